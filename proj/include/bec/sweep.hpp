#pragma once

// Batch evaluation over couplings and dimensions. Rows are independent and
// computed in parallel; results always come back in input order.

#include "bec/gpesolve.hpp"
#include "bec/units.hpp"
#include "bec/variational.hpp"

#include <optional>
#include <string_view>
#include <variant>
#include <vector>

namespace bec {

enum class Engine { Variational, Grid, Both };

std::string_view to_string(Engine engine);

struct SweepSpec {
  int dimension = 3;
  std::vector<double> coupling_values;  ///< ascending
  /// When set, row i carries atom_counts[i]; couplings are derived from it.
  std::vector<long> atom_counts;
  Engine engine = Engine::Variational;
  SolverConfig solver;
  unsigned threads = 1;

  /// Throws std::invalid_argument when empty, unsorted or non-finite.
  void validate() const;
};

/// Builds an atom-number sweep in d = 3 from a physical system (its own
/// atom_count is ignored). Atom counts must be ascending.
SweepSpec atom_sweep(const PhysicalSystem& system, std::vector<long> atom_counts, Engine engine);

struct SweepRow {
  int dimension = 3;
  double coupling = 0.0;
  std::optional<long> atom_count;
  /// Absent only for a grid-only row whose relaxation did not settle.
  std::optional<Classification> classification;
  std::optional<RelaxStatus> grid_status;
  std::optional<double> sigma_min;
  std::optional<double> rms_radius_variational;
  std::optional<double> rms_radius_grid;
  std::optional<double> energy_variational;
  std::optional<double> energy_grid;
  std::optional<double> barrier;
};

/// One row for a single (d, g) point with the requested engine(s).
SweepRow evaluate_point(int dimension, double coupling, Engine engine,
                        const SolverConfig& solver = {});

std::vector<SweepRow> radius_vs_coupling(const SweepSpec& spec);

struct PhaseCell {
  int dimension = 3;
  double coupling = 0.0;
  Classification classification = Classification::Unstable;
  bool boundary = false;  ///< classification differs from the previous g in this row
};

/// Variational classification over every (d, g) pair, d-major.
std::vector<PhaseCell> phase_diagram(const std::vector<int>& dimensions,
                                     const std::vector<double>& couplings, unsigned threads = 1);

struct Unbounded {};

using BosonLimit = std::variant<long, Unbounded>;

/// Largest atom number that still supports a (meta)stable condensate.
/// d = 1 is Unbounded; d = 3 needs a negative scattering length. The grid
/// engine uses the centre of a bisection bracket of width tol_g.
/// Engine::Both is rejected; ask for each engine separately.
BosonLimit max_boson_number(const PhysicalSystem& system, int dimension, Engine engine,
                            const SolverConfig& solver = {}, double tol_g = 0.02);

/// Runs fn(i) for i in [0, count) on up to `threads` workers.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn);

}  // namespace bec

#include "bec/detail/parallel_for.hpp"
