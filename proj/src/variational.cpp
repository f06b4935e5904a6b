#include "bec/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bec {

namespace {

constexpr double kTwoPi = 6.283185307179586476925;

// Residual scale used to judge convergence of the stationarity polynomial.
double residual_scale(double d, double sigma)
{
  return std::max({1.0, std::pow(sigma, d + 2.0), std::pow(sigma, d - 2.0)});
}

double residual_slope(double d, double sigma)
{
  return (d + 2.0) * std::pow(sigma, d + 1.0) - (d - 2.0) * std::pow(sigma, d - 3.0);
}

PointKind kind_from_curvature(double curvature)
{
  if (curvature > kCurvatureTolerance)
    return PointKind::LocalMin;
  if (curvature < -kCurvatureTolerance)
    return PointKind::LocalMax;
  return PointKind::Degenerate;
}

VariationalPoint make_point(const AnsatzProblem& problem, double sigma)
{
  VariationalPoint p;
  p.sigma = sigma;
  p.energy = gaussian_energy(problem, sigma);
  p.curvature = energy_curvature(problem, sigma);
  p.kind = kind_from_curvature(p.curvature);
  return p;
}

// Bracketed bisection followed by a Newton polish that never leaves the
// bracket.
double refine_root(const AnsatzProblem& problem, double lo, double hi)
{
  const double d = problem.dimension();
  double f_lo = stationarity_residual(problem, lo);
  for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = stationarity_residual(problem, mid);
    if (f_mid == 0.0)
      return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  double sigma = 0.5 * (lo + hi);
  double f = stationarity_residual(problem, sigma);
  for (int it = 0; it < 8 && f != 0.0; ++it) {
    const double slope = residual_slope(d, sigma);
    if (slope == 0.0)
      break;
    const double next = sigma - f / slope;
    if (!(next >= lo && next <= hi))
      break;
    const double f_next = stationarity_residual(problem, next);
    if (std::abs(f_next) >= std::abs(f))
      break;
    sigma = next;
    f = f_next;
  }
  return sigma;
}

}  // namespace

AnsatzProblem::AnsatzProblem(double dimension, double coupling)
    : dimension_(dimension), coupling_(coupling)
{
  if (!std::isfinite(dimension) || dimension < 1.0)
    throw std::invalid_argument("dimension must be a finite real >= 1");
  if (!std::isfinite(coupling))
    throw std::invalid_argument("coupling must be finite");
  reduced_ = coupling / (2.0 * std::pow(kTwoPi, 0.5 * dimension));
}

std::string_view to_string(PointKind kind)
{
  switch (kind) {
  case PointKind::LocalMin: return "LocalMin";
  case PointKind::LocalMax: return "LocalMax";
  case PointKind::Degenerate: return "Degenerate";
  }
  return "?";
}

std::string_view to_string(Classification c)
{
  switch (c) {
  case Classification::Stable: return "Stable";
  case Classification::Metastable: return "Metastable";
  case Classification::Unstable: return "Unstable";
  case Classification::Critical: return "Critical";
  }
  return "?";
}

std::optional<VariationalPoint> StabilityReport::minimum() const
{
  for (const auto& p : points)
    if (p.kind == PointKind::LocalMin)
      return p;
  return std::nullopt;
}

EnergyBreakdown gaussian_energy(const AnsatzProblem& problem, double sigma)
{
  if (!(sigma > 0.0))
    throw std::domain_error("Gaussian width must be positive");
  const double d = problem.dimension();
  EnergyBreakdown e;
  e.kinetic = 0.25 * d / (sigma * sigma);
  e.potential = 0.25 * d * sigma * sigma;
  e.interaction = problem.reduced_coupling() * std::pow(sigma, -d);
  e.total = e.kinetic + e.potential + e.interaction;
  return e;
}

double energy_curvature(const AnsatzProblem& problem, double sigma)
{
  const double d = problem.dimension();
  const double s2 = sigma * sigma;
  return 0.25 * d * (6.0 / (s2 * s2) + 2.0) +
         d * (d + 1.0) * problem.reduced_coupling() * std::pow(sigma, -d - 2.0);
}

double stationarity_residual(const AnsatzProblem& problem, double sigma)
{
  const double d = problem.dimension();
  return std::pow(sigma, d + 2.0) - std::pow(sigma, d - 2.0) - 2.0 * problem.reduced_coupling();
}

std::vector<VariationalPoint> find_stationary_points(const AnsatzProblem& problem)
{
  const double d = problem.dimension();

  std::vector<double> nodes(kSearchPanels + 1);
  const double log_lo = std::log(kSigmaSearchMin);
  const double step = (std::log(kSigmaSearchMax) - log_lo) / kSearchPanels;
  for (int i = 0; i <= kSearchPanels; ++i)
    nodes[i] = std::exp(log_lo + step * i);
  nodes.front() = kSigmaSearchMin;
  nodes.back() = kSigmaSearchMax;

  // For d > 2 the residual falls then rises with its only turning point at
  // ((d-2)/(d+2))^(1/4). Inserting it as a node keeps two nearly merged roots
  // from hiding inside one panel.
  if (d > 2.0) {
    const double turn = std::pow((d - 2.0) / (d + 2.0), 0.25);
    if (turn > kSigmaSearchMin && turn < kSigmaSearchMax) {
      nodes.insert(std::upper_bound(nodes.begin(), nodes.end(), turn), turn);
    }
  }

  std::vector<double> values(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i)
    values[i] = stationarity_residual(problem, nodes[i]);

  std::vector<double> roots;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (std::abs(values[i]) <= 1e-14 * residual_scale(d, nodes[i]))
      roots.push_back(nodes[i]);
    else if (i + 1 < nodes.size() &&
             std::abs(values[i + 1]) > 1e-14 * residual_scale(d, nodes[i + 1]) &&
             (values[i] < 0.0) != (values[i + 1] < 0.0))
      roots.push_back(refine_root(problem, nodes[i], nodes[i + 1]));
  }

  std::vector<VariationalPoint> points;
  points.reserve(roots.size());
  for (double sigma : roots)
    points.push_back(make_point(problem, sigma));
  return points;
}

StabilityReport classify(const AnsatzProblem& problem)
{
  const double d = problem.dimension();
  const double gr = problem.reduced_coupling();

  StabilityReport report;
  report.points = find_stationary_points(problem);

  bool bounded_below = true;
  bool boundary_case = false;
  if (d == 2.0) {
    const double lead = 1.0 + 2.0 * gr;
    boundary_case = std::abs(lead) <= 1e-12;
    bounded_below = lead >= 0.0;
  } else if (d > 2.0) {
    bounded_below = problem.coupling() >= 0.0;
  }

  const auto count = [&](PointKind k) {
    return std::count_if(report.points.begin(), report.points.end(),
                         [k](const VariationalPoint& p) { return p.kind == k; });
  };
  const auto n_min = count(PointKind::LocalMin);
  const auto n_degenerate = count(PointKind::Degenerate);

  if (boundary_case || n_degenerate > 0)
    report.classification = Classification::Critical;
  else if (n_min == 0)
    report.classification = Classification::Unstable;
  else if (bounded_below)
    report.classification = Classification::Stable;
  else
    report.classification = Classification::Metastable;

  if (auto min = report.minimum())
    report.mean_radius = mean_radius(d, min->sigma);

  if (report.classification == Classification::Metastable) {
    auto min = report.minimum();
    for (const auto& p : report.points) {
      if (p.kind == PointKind::LocalMax) {
        report.barrier_height = p.energy.total - min->energy.total;
        break;
      }
    }
  }
  return report;
}

std::optional<CriticalPoint> critical_coupling(double dimension)
{
  if (!std::isfinite(dimension) || dimension < 1.0)
    throw std::invalid_argument("dimension must be a finite real >= 1");
  const double d = dimension;
  if (d < 2.0)
    return std::nullopt;
  if (d == 2.0)
    return CriticalPoint{-kTwoPi, std::nullopt};
  // Simultaneous E' = 0 and E'' = 0.
  const double sigma_c = std::pow((d - 2.0) / (d + 2.0), 0.25);
  const double two_reduced = std::pow(sigma_c, d + 2.0) - std::pow(sigma_c, d - 2.0);
  return CriticalPoint{std::pow(kTwoPi, 0.5 * d) * two_reduced, sigma_c};
}

double mean_radius(double dimension, double sigma)
{
  return std::sqrt(0.5 * dimension) * sigma;
}

std::optional<double> barrier_height(const AnsatzProblem& problem)
{
  return classify(problem).barrier_height;
}

std::optional<VariationalPoint> scan_minimize(const AnsatzProblem& problem, double sigma_lo,
                                              double sigma_hi, std::size_t n_points)
{
  if (!(sigma_lo > 0.0) || !(sigma_hi > sigma_lo))
    throw std::invalid_argument("scan window must satisfy 0 < lo < hi");
  if (n_points < 3)
    throw std::invalid_argument("scan needs at least 3 points");

  const double log_lo = std::log(sigma_lo);
  const double step = (std::log(sigma_hi) - log_lo) / static_cast<double>(n_points - 1);
  const auto sigma_at = [&](std::size_t i) {
    if (i == 0)
      return sigma_lo;
    if (i == n_points - 1)
      return sigma_hi;
    return std::exp(log_lo + step * static_cast<double>(i));
  };
  const auto energy_at = [&](double s) { return gaussian_energy(problem, s).total; };

  double e_prev = energy_at(sigma_at(0));
  double e_cur = energy_at(sigma_at(1));
  std::optional<std::size_t> best;
  double best_energy = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < n_points; ++i) {
    const double e_next = energy_at(sigma_at(i + 1));
    if (e_cur < e_prev && e_cur <= e_next && e_cur < best_energy) {
      best = i;
      best_energy = e_cur;
    }
    e_prev = e_cur;
    e_cur = e_next;
  }
  if (!best)
    return std::nullopt;

  // Golden-section search on the two neighbouring panels.
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = sigma_at(*best - 1);
  double b = sigma_at(*best + 1);
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = energy_at(x1);
  double f2 = energy_at(x2);
  for (int it = 0; it < 200 && (b - a) > 1e-13 * b; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = energy_at(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = energy_at(x2);
    }
  }
  return make_point(problem, 0.5 * (a + b));
}

}  // namespace bec
