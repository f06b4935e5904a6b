#include "bec/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bec {

std::string_view to_string(Engine engine)
{
  switch (engine) {
  case Engine::Variational: return "variational";
  case Engine::Grid: return "grid";
  case Engine::Both: return "both";
  }
  return "?";
}

void SweepSpec::validate() const
{
  if (coupling_values.empty())
    throw std::invalid_argument("sweep needs at least one coupling value");
  for (std::size_t i = 0; i < coupling_values.size(); ++i) {
    if (!std::isfinite(coupling_values[i]))
      throw std::invalid_argument("coupling values must be finite");
    if (i > 0 && coupling_values[i] < coupling_values[i - 1])
      throw std::invalid_argument("coupling values must be sorted ascending");
  }
  if (!atom_counts.empty() && atom_counts.size() != coupling_values.size())
    throw std::invalid_argument("atom counts and couplings differ in length");
  if (engine != Engine::Variational)
    solver.validate();
}

SweepSpec atom_sweep(const PhysicalSystem& system, std::vector<long> atom_counts, Engine engine)
{
  SweepSpec spec;
  spec.dimension = 3;
  spec.engine = engine;
  for (std::size_t i = 0; i < atom_counts.size(); ++i) {
    if (i > 0 && atom_counts[i] < atom_counts[i - 1])
      throw std::invalid_argument("atom counts must be sorted ascending");
    PhysicalSystem s = system;
    s.atom_count = atom_counts[i];
    spec.coupling_values.push_back(coupling_from_physical(s).g);
  }
  // Attractive systems map ascending N onto descending g.
  if (system.scattering_length < 0.0) {
    std::reverse(atom_counts.begin(), atom_counts.end());
    std::reverse(spec.coupling_values.begin(), spec.coupling_values.end());
  }
  spec.atom_counts = std::move(atom_counts);
  return spec;
}

SweepRow evaluate_point(int dimension, double coupling, Engine engine, const SolverConfig& solver)
{
  SweepRow row;
  row.dimension = dimension;
  row.coupling = coupling;

  if (engine != Engine::Grid) {
    const auto report = classify(AnsatzProblem(dimension, coupling));
    row.classification = report.classification;
    if (const auto min = report.minimum()) {
      row.sigma_min = min->sigma;
      row.rms_radius_variational = report.mean_radius;
      row.energy_variational = min->energy.total;
    }
    row.barrier = report.barrier_height;
  }

  if (engine != Engine::Variational) {
    const auto result = relax(solver, dimension, coupling);
    row.grid_status = result.status;
    if (result.status == RelaxStatus::Converged) {
      const auto obs = observables(result.state);
      row.rms_radius_grid = obs.rms_radius;
      row.energy_grid = obs.energy.total;
    }
    if (engine == Engine::Grid) {
      switch (result.status) {
      case RelaxStatus::Converged:
        row.classification = (dimension == 3 && coupling < 0.0) ? Classification::Metastable
                                                                 : Classification::Stable;
        break;
      case RelaxStatus::CollapseDetected:
        row.classification = Classification::Unstable;
        break;
      case RelaxStatus::NonConverged:
        break;
      }
    }
  }
  return row;
}

std::vector<SweepRow> radius_vs_coupling(const SweepSpec& spec)
{
  spec.validate();
  std::vector<SweepRow> rows(spec.coupling_values.size());
  parallel_for(rows.size(), spec.threads, [&](std::size_t i) {
    rows[i] = evaluate_point(spec.dimension, spec.coupling_values[i], spec.engine, spec.solver);
    if (!spec.atom_counts.empty())
      rows[i].atom_count = spec.atom_counts[i];
  });
  return rows;
}

std::vector<PhaseCell> phase_diagram(const std::vector<int>& dimensions,
                                     const std::vector<double>& couplings, unsigned threads)
{
  for (int d : dimensions)
    if (d < 1 || d > 3)
      throw std::invalid_argument("phase diagram dimensions must be 1, 2 or 3");
  for (double g : couplings)
    if (!std::isfinite(g))
      throw std::invalid_argument("coupling values must be finite");

  const std::size_t per_row = couplings.size();
  std::vector<PhaseCell> cells(dimensions.size() * per_row);
  parallel_for(cells.size(), threads, [&](std::size_t k) {
    const int d = dimensions[k / per_row];
    const double g = couplings[k % per_row];
    cells[k] = {d, g, classify(AnsatzProblem(d, g)).classification, false};
  });
  for (std::size_t k = 0; k < cells.size(); ++k)
    if (k % per_row != 0)
      cells[k].boundary = cells[k].classification != cells[k - 1].classification;
  return cells;
}

BosonLimit max_boson_number(const PhysicalSystem& system, int dimension, Engine engine,
                            const SolverConfig& solver, double tol_g)
{
  system.validate();
  if (dimension == 1)
    return Unbounded{};
  if (dimension != 3)
    throw std::invalid_argument("maximum atom number is defined for d = 1 and d = 3 only");
  if (!(system.scattering_length < 0.0))
    throw std::invalid_argument("no maximum atom number for a non-negative scattering length");

  const double g_variational = critical_coupling(3.0)->coupling;
  double g_c = g_variational;
  switch (engine) {
  case Engine::Variational:
    break;
  case Engine::Grid: {
    // The grid threshold is weaker than the variational one.
    const auto bracket = critical_coupling_grid(solver, 3, g_variational - 0.5,
                                                0.5 * g_variational, tol_g);
    g_c = 0.5 * (bracket.g_lo + bracket.g_hi);
    break;
  }
  case Engine::Both:
    throw std::invalid_argument("choose a single engine for the maximum atom number");
  }
  return static_cast<long>(std::floor(critical_atom_number(system, g_c)));
}

}  // namespace bec
