#pragma once

// Gaussian variational analysis of the Gross-Pitaevskii energy in a
// harmonic trap. The trial state is the normalized isotropic Gaussian
//
//   psi(r) = pi^(-d/4) sigma^(-d/2) exp(-r^2 / (2 sigma^2)),
//
// for which the energy per particle (oscillator units) is
//
//   E(sigma) = (d/4)(sigma^-2 + sigma^2) + g' sigma^-d,
//   g'       = g / (2 (2 pi)^(d/2)).
//
// The dimension is allowed to be any real d >= 1; the formulas are analytic
// in d.

#include <optional>
#include <string_view>
#include <vector>

namespace bec {

/// Energy per particle split into the three functional terms, in hbar omega.
struct EnergyBreakdown {
  double kinetic = 0.0;
  double potential = 0.0;
  double interaction = 0.0;
  double total = 0.0;
};

class AnsatzProblem {
public:
  /// Throws std::invalid_argument for d < 1 or non-finite inputs.
  AnsatzProblem(double dimension, double coupling);

  double dimension() const noexcept { return dimension_; }
  double coupling() const noexcept { return coupling_; }
  /// g' = g / (2 (2 pi)^(d/2)), the prefactor of sigma^-d in E(sigma).
  double reduced_coupling() const noexcept { return reduced_; }

private:
  double dimension_;
  double coupling_;
  double reduced_;
};

enum class PointKind { LocalMin, LocalMax, Degenerate };

enum class Classification { Stable, Metastable, Unstable, Critical };

std::string_view to_string(PointKind kind);
std::string_view to_string(Classification c);

struct VariationalPoint {
  double sigma = 0.0;
  EnergyBreakdown energy;
  double curvature = 0.0;  ///< d^2E/dsigma^2 at sigma
  PointKind kind = PointKind::Degenerate;
};

struct StabilityReport {
  Classification classification = Classification::Unstable;
  std::vector<VariationalPoint> points;  ///< ascending sigma
  std::optional<double> barrier_height;
  std::optional<double> mean_radius;

  /// The local minimum, when one exists.
  std::optional<VariationalPoint> minimum() const;
};

struct CriticalPoint {
  double coupling = 0.0;
  std::optional<double> sigma;  ///< absent at d = 2, where the fold sits at sigma -> 0
};

/// |E''| at or below this is treated as a fold point.
inline constexpr double kCurvatureTolerance = 1e-8;

/// Root search window for stationary points.
inline constexpr double kSigmaSearchMin = 1e-6;
inline constexpr double kSigmaSearchMax = 1e3;
inline constexpr int kSearchPanels = 4096;

/// Throws std::domain_error for sigma <= 0.
EnergyBreakdown gaussian_energy(const AnsatzProblem& problem, double sigma);

/// d^2E/dsigma^2.
double energy_curvature(const AnsatzProblem& problem, double sigma);

/// sigma^(d+2) - sigma^(d-2) - 2g'; equals (2 sigma^(d+1)/d) dE/dsigma.
double stationarity_residual(const AnsatzProblem& problem, double sigma);

/// All stationary points in [1e-6, 1e3], ascending in sigma. Each root is
/// bracketed on a log-spaced scan, bisected, then Newton-polished.
std::vector<VariationalPoint> find_stationary_points(const AnsatzProblem& problem);

StabilityReport classify(const AnsatzProblem& problem);

/// Coupling at which the metastable minimum disappears. Absent for d < 2.
std::optional<CriticalPoint> critical_coupling(double dimension);

/// Root-mean-square radius sqrt(d/2) sigma of the Gaussian.
double mean_radius(double dimension, double sigma);

/// E(local max) - E(local min) in the metastable regime. Absent otherwise,
/// and also when the barrier top lies below the search window (|g| tiny, d > 2).
std::optional<double> barrier_height(const AnsatzProblem& problem);

/// Brute-force minimizer: evaluates E on n log-spaced points in [lo, hi] and
/// refines the lowest interior local minimum of the samples by golden-section
/// search. Absent when the samples have no interior local minimum, i.e. the
/// energy keeps falling toward an edge of the window.
std::optional<VariationalPoint> scan_minimize(const AnsatzProblem& problem, double sigma_lo,
                                              double sigma_hi, std::size_t n_points);

}  // namespace bec
