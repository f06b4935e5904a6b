#pragma once

// Serialization of sweep rows, phase cells and single-point reports to the
// table / CSV / JSON output formats.

#include "bec/sweep.hpp"

#include "json.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bec {

enum class OutputFormat { Table, Csv, Json };

/// Parses "table", "csv" or "json"; nullopt otherwise.
std::optional<OutputFormat> parse_format(std::string_view text);

inline constexpr int kSchemaVersion = 1;

inline constexpr std::string_view kCsvHeader =
    "dimension,coupling,atoms,classification,sigma_min,rms_var,rms_grid,energy_var,energy_grid,"
    "barrier";

/// Shortest round-trippable-enough rendering used in every text format.
std::string format_number(double value);

/// Classification column: the class name, or "NonConverged" when a grid-only
/// row has none.
std::string row_label(const SweepRow& row);

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_table(std::ostream& out, const std::vector<SweepRow>& rows);

void write_phase_csv(std::ostream& out, const std::vector<PhaseCell>& cells);
void write_phase_table(std::ostream& out, const std::vector<PhaseCell>& cells);

nlohmann::ordered_json to_json(const EnergyBreakdown& e);
nlohmann::ordered_json to_json(const VariationalPoint& p);
nlohmann::ordered_json to_json(const StabilityReport& r);
nlohmann::ordered_json to_json(const Observables& o);
nlohmann::ordered_json to_json(const SweepRow& row);
nlohmann::ordered_json to_json(const PhaseCell& cell);

/// {"schema_version": 1, "command": ..., ...}
nlohmann::ordered_json make_document(std::string_view command);

}  // namespace bec
