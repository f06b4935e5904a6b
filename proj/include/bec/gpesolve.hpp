#pragma once

// Ansatz-free ground states of the Gross-Pitaevskii functional for a
// spherically symmetric condensate, found by normalized gradient flow
// (imaginary-time relaxation) on a uniform radial grid r_i = i h.
//
// Discretization:
//  * interior nodes use central differences for psi'' + (d-1)/r psi';
//  * r = 0 uses the even extension psi_{-1} = psi_1 and the limit value
//    d psi''(0) of the radial Laplacian;
//  * psi vanishes at r_max;
//  * integrals use trapezoid weights w_i times r_i^(d-1) times the unit-sphere
//    measure S_d (2, 2 pi, 4 pi), except that in 2D the origin node carries
//    its half-cell area h^2/8 instead of zero.
// With these weights the interior difference operator is symmetric, and the
// kinetic energy is evaluated as the matching edge sum, so the discrete
// energy is exactly the functional whose gradient drives the flow.
//
// Each step is linearly implicit,
//
//   (1 + tau H[psi_k]) psi~ = psi_k,   psi_{k+1} = psi~ / ||psi~||,
//
// with H[psi] = -1/2 Laplacian + r^2/2 + g psi^2. Its fixed points solve the
// discrete stationary GP equation exactly.

#include "bec/variational.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace bec {

struct SolverConfig {
  double r_max = 8.0;
  int n_points = 1024;
  double time_step = 1e-3;
  double energy_tol = 1e-9;  ///< on |E_k - E_{k-1}| / time_step
  long max_iters = 2'000'000;
  std::optional<double> collapse_radius_floor;  ///< default 3 h
  std::optional<double> collapse_energy_floor;  ///< default -(10 + 10 |g|)
  double initial_width = 1.0;                   ///< width of the default Gaussian start

  double grid_spacing() const { return r_max / (n_points - 1); }
  double radius_floor() const;
  double energy_floor(double coupling) const;

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

class RadialState {
public:
  RadialState(int dimension, double coupling, double r_max, int n_points);

  /// Normalized Gaussian pi^(-d/4) w^(-d/2) exp(-r^2 / 2w^2) sampled on the grid.
  static RadialState gaussian(int dimension, double coupling, const SolverConfig& config,
                              double width = 1.0);

  int dimension() const noexcept { return dimension_; }
  double coupling() const noexcept { return coupling_; }
  double r_max() const noexcept { return r_max_; }
  double spacing() const noexcept { return h_; }
  std::size_t size() const noexcept { return psi_.size(); }
  double radius(std::size_t i) const noexcept { return h_ * static_cast<double>(i); }

  std::span<const double> psi() const noexcept { return psi_; }
  std::span<double> psi() noexcept { return psi_; }

  bool converged = false;
  long iterations = 0;

  /// Same dimension, spacing and node count.
  bool same_geometry(const RadialState& other) const noexcept;
  /// Copy of this profile relabelled with another coupling (warm starts).
  RadialState with_coupling(double coupling) const;

private:
  int dimension_;
  double coupling_;
  double r_max_;
  double h_;
  std::vector<double> psi_;
};

struct Observables {
  EnergyBreakdown energy;
  double chemical_potential = 0.0;
  double rms_radius = 0.0;
  double central_density_amplitude = 0.0;  ///< psi(0)
};

enum class RelaxStatus { Converged, CollapseDetected, NonConverged };

std::string_view to_string(RelaxStatus status);

struct RelaxResult {
  RelaxStatus status = RelaxStatus::NonConverged;
  RadialState state;  ///< final profile (last one reached for failures)
};

/// Called after every flow step with the step index (1-based), the
/// renormalized profile and its energy.
using StepObserver = std::function<void(long step, const RadialState& state, double energy)>;

/// S_d sum w_i psi_i^2 r_i^(d-1).
double norm(const RadialState& state);

EnergyBreakdown grid_energy(const RadialState& state);

Observables observables(const RadialState& state);

/// 2 T - 2 V + d E_int; zero at any stationary state.
double virial_residual(const RadialState& state);

/// Relaxes from `initial` or, when absent, from a Gaussian of width
/// config.initial_width. Throws std::invalid_argument on bad inputs.
RelaxResult relax(const SolverConfig& config, int dimension, double coupling,
                  const std::optional<RadialState>& initial = std::nullopt,
                  const StepObserver& observer = {});

/// Bisection on g for the collapse threshold of the grid functional.
struct CouplingBracket {
  double g_lo = 0.0;  ///< collapses
  double g_hi = 0.0;  ///< converges
  int probes = 0;
  RadialState last_converged;  ///< converged profile at g_hi
};

class BracketError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Requires d in {2, 3} and g_lo < g_hi < 0 with relax collapsing at g_lo and
/// converging at g_hi. Probes run sequentially, each warm-started from the
/// last converged profile. Throws BracketError when the end points do not
/// straddle the transition or a probe fails to converge.
CouplingBracket critical_coupling_grid(const SolverConfig& config, int dimension, double g_lo,
                                       double g_hi, double tol_g);

/// Two-column (r, psi) dump preceded by a `#` header with d, g, energy and
/// iterations.
void write_profile(std::ostream& out, const RadialState& state);

}  // namespace bec
