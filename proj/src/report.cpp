#include "bec/report.hpp"

#include <cstdio>
#include <ostream>

namespace bec {

namespace {

std::string field(const std::optional<double>& v)
{
  return v ? format_number(*v) : std::string();
}

template <class T>
nlohmann::ordered_json optional_json(const std::optional<T>& v)
{
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

std::string cell_or_dash(const std::optional<double>& v)
{
  return v ? format_number(*v) : std::string("-");
}

}  // namespace

std::optional<OutputFormat> parse_format(std::string_view text)
{
  if (text == "table")
    return OutputFormat::Table;
  if (text == "csv")
    return OutputFormat::Csv;
  if (text == "json")
    return OutputFormat::Json;
  return std::nullopt;
}

std::string format_number(double value)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

std::string row_label(const SweepRow& row)
{
  return row.classification ? std::string(to_string(*row.classification))
                            : std::string("NonConverged");
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows)
{
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.dimension << ',' << format_number(r.coupling) << ','
        << (r.atom_count ? std::to_string(*r.atom_count) : std::string()) << ',' << row_label(r)
        << ',' << field(r.sigma_min) << ',' << field(r.rms_radius_variational) << ','
        << field(r.rms_radius_grid) << ',' << field(r.energy_variational) << ','
        << field(r.energy_grid) << ',' << field(r.barrier) << '\n';
  }
}

void write_table(std::ostream& out, const std::vector<SweepRow>& rows)
{
  char line[256];
  std::snprintf(line, sizeof line, "%3s %14s %8s %-12s %-16s %12s %12s %12s %14s %14s %12s\n",
                "d", "g", "atoms", "class", "grid", "sigma_min", "rms_var", "rms_grid",
                "energy_var", "energy_grid", "barrier");
  out << line;
  for (const auto& r : rows) {
    const std::string atoms = r.atom_count ? std::to_string(*r.atom_count) : "-";
    const std::string grid = r.grid_status ? std::string(to_string(*r.grid_status)) : "-";
    std::snprintf(line, sizeof line, "%3d %14s %8s %-12s %-16s %12s %12s %12s %14s %14s %12s\n",
                  r.dimension, format_number(r.coupling).c_str(), atoms.c_str(),
                  row_label(r).c_str(), grid.c_str(), cell_or_dash(r.sigma_min).c_str(),
                  cell_or_dash(r.rms_radius_variational).c_str(),
                  cell_or_dash(r.rms_radius_grid).c_str(),
                  cell_or_dash(r.energy_variational).c_str(),
                  cell_or_dash(r.energy_grid).c_str(), cell_or_dash(r.barrier).c_str());
    out << line;
  }
}

void write_phase_csv(std::ostream& out, const std::vector<PhaseCell>& cells)
{
  out << kCsvHeader << '\n';
  for (const auto& c : cells)
    out << c.dimension << ',' << format_number(c.coupling) << ",," << to_string(c.classification)
        << ",,,,,,\n";
}

void write_phase_table(std::ostream& out, const std::vector<PhaseCell>& cells)
{
  char line[128];
  std::snprintf(line, sizeof line, "%3s %14s %-12s %s\n", "d", "g", "class", "boundary");
  out << line;
  for (const auto& c : cells) {
    std::snprintf(line, sizeof line, "%3d %14s %-12s %s\n", c.dimension,
                  format_number(c.coupling).c_str(),
                  std::string(to_string(c.classification)).c_str(), c.boundary ? "*" : "");
    out << line;
  }
}

nlohmann::ordered_json to_json(const EnergyBreakdown& e)
{
  return {{"kinetic", e.kinetic},
          {"potential", e.potential},
          {"interaction", e.interaction},
          {"total", e.total}};
}

nlohmann::ordered_json to_json(const VariationalPoint& p)
{
  return {{"sigma", p.sigma},
          {"kind", to_string(p.kind)},
          {"curvature", p.curvature},
          {"energy", to_json(p.energy)}};
}

nlohmann::ordered_json to_json(const StabilityReport& r)
{
  nlohmann::ordered_json points = nlohmann::ordered_json::array();
  for (const auto& p : r.points)
    points.push_back(to_json(p));
  return {{"classification", to_string(r.classification)},
          {"points", std::move(points)},
          {"barrier_height", optional_json(r.barrier_height)},
          {"mean_radius", optional_json(r.mean_radius)}};
}

nlohmann::ordered_json to_json(const Observables& o)
{
  return {{"energy", to_json(o.energy)},
          {"chemical_potential", o.chemical_potential},
          {"rms_radius", o.rms_radius},
          {"central_density_amplitude", o.central_density_amplitude}};
}

nlohmann::ordered_json to_json(const SweepRow& row)
{
  nlohmann::ordered_json j;
  j["dimension"] = row.dimension;
  j["coupling"] = row.coupling;
  j["atoms"] = optional_json(row.atom_count);
  j["classification"] = row_label(row);
  j["grid_status"] = row.grid_status ? nlohmann::ordered_json(to_string(*row.grid_status))
                                     : nlohmann::ordered_json(nullptr);
  j["sigma_min"] = optional_json(row.sigma_min);
  j["rms_var"] = optional_json(row.rms_radius_variational);
  j["rms_grid"] = optional_json(row.rms_radius_grid);
  j["energy_var"] = optional_json(row.energy_variational);
  j["energy_grid"] = optional_json(row.energy_grid);
  j["barrier"] = optional_json(row.barrier);
  return j;
}

nlohmann::ordered_json to_json(const PhaseCell& cell)
{
  return {{"dimension", cell.dimension},
          {"coupling", cell.coupling},
          {"classification", to_string(cell.classification)},
          {"boundary", cell.boundary}};
}

nlohmann::ordered_json make_document(std::string_view command)
{
  nlohmann::ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = command;
  return doc;
}

}  // namespace bec
