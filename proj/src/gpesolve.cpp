#include "bec/gpesolve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace bec {

namespace {

constexpr double kPi = 3.14159265358979323846;

double sphere_measure(int d)
{
  switch (d) {
  case 1: return 2.0;
  case 2: return 2.0 * kPi;
  default: return 4.0 * kPi;
  }
}

void check_dimension(int d)
{
  if (d < 1 || d > 3)
    throw std::invalid_argument("grid solver supports d = 1, 2, 3 only");
}

// Radial measure and edge coefficients of the discrete Laplacian. For every
// interior node
//   m_i (Lap psi)_i = c_{i+1/2} (psi_{i+1} - psi_i) - c_{i-1/2} (psi_i - psi_{i-1})
// reproduces the central-difference stencil of psi'' + (d-1)/r psi'.
struct Geometry {
  explicit Geometry(const RadialState& s) : d(s.dimension()), h(s.spacing()), n(s.size())
  {
    measure.resize(n);
    edge.resize(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = h * static_cast<double>(i);
      const double w = (i == 0 || i + 1 == n) ? 0.5 * h : h;
      measure[i] = w * (d == 1 ? 1.0 : d == 2 ? r : r * r);
    }
    // Half-cell area at the origin in 2D; with it the limit stencil at r = 0
    // is the exact gradient of the discrete energy.
    if (d == 2)
      measure[0] = 0.125 * h * h;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double k = static_cast<double>(i);
      edge[i] = d == 1 ? 1.0 / h : d == 2 ? k + 0.5 : h * k * (k + 1.0);
    }
  }

  int d;
  double h;
  std::size_t n;
  std::vector<double> measure;  // w_i r_i^(d-1)
  std::vector<double> edge;     // c_{i+1/2}
};

EnergyBreakdown energy_on(const Geometry& geo, std::span<const double> psi, double g)
{
  const double sd = sphere_measure(geo.d);
  double kin = 0.0;
  for (std::size_t i = 0; i + 1 < geo.n; ++i) {
    const double diff = psi[i + 1] - psi[i];
    kin += geo.edge[i] * diff * diff;
  }
  double pot = 0.0;
  double inter = 0.0;
  for (std::size_t i = 0; i < geo.n; ++i) {
    const double r = geo.h * static_cast<double>(i);
    const double p2 = psi[i] * psi[i];
    pot += geo.measure[i] * r * r * p2;
    inter += geo.measure[i] * p2 * p2;
  }
  EnergyBreakdown e;
  e.kinetic = 0.5 * sd * kin;
  e.potential = 0.5 * sd * pot;
  e.interaction = 0.5 * g * sd * inter;
  e.total = e.kinetic + e.potential + e.interaction;
  return e;
}

// S_d sum m_i r_i^power psi_i^2 for power 0 or 2.
double moment(const Geometry& geo, std::span<const double> psi, int power)
{
  double acc = 0.0;
  for (std::size_t i = 0; i < geo.n; ++i) {
    const double r = geo.h * static_cast<double>(i);
    const double weight = power == 2 ? r * r : 1.0;
    acc += geo.measure[i] * weight * psi[i] * psi[i];
  }
  return sphere_measure(geo.d) * acc;
}

// Thomas algorithm for one linearly implicit step. Returns false on a zero or
// non-finite pivot.
bool implicit_step(const Geometry& geo, double tau, double g, std::span<double> psi,
                   std::vector<double>& upper_scratch, std::vector<double>& rhs_scratch)
{
  const std::size_t m = geo.n - 1;  // psi[n-1] stays 0
  auto& cp = upper_scratch;
  auto& dp = rhs_scratch;
  cp.resize(m);
  dp.resize(m);

  const double h2 = geo.h * geo.h;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = geo.h * static_cast<double>(i);
    double lower = 0.0;
    double upper = 0.0;
    double lap_diag = 0.0;
    if (i == 0) {
      upper = static_cast<double>(geo.d) / h2;  // -1/2 * (2 d / h^2)
      lap_diag = upper;
    } else {
      lower = 0.5 * geo.edge[i - 1] / geo.measure[i];
      upper = 0.5 * geo.edge[i] / geo.measure[i];
      lap_diag = lower + upper;
    }
    const double diag = 1.0 + tau * (lap_diag + 0.5 * r * r + g * psi[i] * psi[i]);
    const double a = -tau * lower;
    const double c = -tau * upper;

    const double denom = i == 0 ? diag : diag - a * cp[i - 1];
    if (!(std::abs(denom) > 0.0) || !std::isfinite(denom))
      return false;
    cp[i] = c / denom;
    dp[i] = (i == 0 ? psi[i] : psi[i] - a * dp[i - 1]) / denom;
  }
  psi[m - 1] = dp[m - 1];
  for (std::size_t i = m - 1; i-- > 0;)
    psi[i] = dp[i] - cp[i] * psi[i + 1];
  psi[m] = 0.0;
  return true;
}

bool normalize(const Geometry& geo, std::span<double> psi)
{
  double acc = 0.0;
  for (std::size_t i = 0; i < geo.n; ++i)
    acc += geo.measure[i] * psi[i] * psi[i];
  acc *= sphere_measure(geo.d);
  if (!(acc > 0.0) || !std::isfinite(acc))
    return false;
  const double scale = 1.0 / std::sqrt(acc);
  for (auto& v : psi)
    v *= scale;
  return true;
}

}  // namespace

double SolverConfig::radius_floor() const
{
  return collapse_radius_floor.value_or(3.0 * grid_spacing());
}

double SolverConfig::energy_floor(double coupling) const
{
  return collapse_energy_floor.value_or(-(10.0 + 10.0 * std::abs(coupling)));
}

void SolverConfig::validate() const
{
  if (!(r_max > 0.0) || !std::isfinite(r_max))
    throw std::invalid_argument("r_max must be positive");
  if (n_points < 16)
    throw std::invalid_argument("n_points must be at least 16");
  if (!(time_step > 0.0) || !std::isfinite(time_step))
    throw std::invalid_argument("time_step must be positive");
  if (!(energy_tol > 0.0))
    throw std::invalid_argument("energy_tol must be positive");
  if (max_iters < 1)
    throw std::invalid_argument("max_iters must be at least 1");
  if (!(initial_width > 0.0) || !std::isfinite(initial_width))
    throw std::invalid_argument("initial width must be positive");
}

RadialState::RadialState(int dimension, double coupling, double r_max, int n_points)
    : dimension_(dimension), coupling_(coupling), r_max_(r_max),
      h_(r_max / (n_points - 1)), psi_(static_cast<std::size_t>(n_points), 0.0)
{
  check_dimension(dimension);
  if (!std::isfinite(coupling))
    throw std::invalid_argument("coupling must be finite");
  if (!(r_max > 0.0) || n_points < 16)
    throw std::invalid_argument("grid needs r_max > 0 and at least 16 points");
}

RadialState RadialState::gaussian(int dimension, double coupling, const SolverConfig& config,
                                  double width)
{
  RadialState s(dimension, coupling, config.r_max, config.n_points);
  const double amp = std::pow(kPi, -0.25 * dimension) * std::pow(width, -0.5 * dimension);
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double x = s.radius(i) / width;
    s.psi_[i] = amp * std::exp(-0.5 * x * x);
  }
  s.psi_.back() = 0.0;
  return s;
}

bool RadialState::same_geometry(const RadialState& other) const noexcept
{
  return dimension_ == other.dimension_ && size() == other.size() &&
         std::abs(h_ - other.h_) <= 1e-14 * h_;
}

RadialState RadialState::with_coupling(double coupling) const
{
  RadialState copy = *this;
  copy.coupling_ = coupling;
  copy.converged = false;
  copy.iterations = 0;
  return copy;
}

std::string_view to_string(RelaxStatus status)
{
  switch (status) {
  case RelaxStatus::Converged: return "Converged";
  case RelaxStatus::CollapseDetected: return "CollapseDetected";
  case RelaxStatus::NonConverged: return "NonConverged";
  }
  return "?";
}

double norm(const RadialState& state)
{
  return moment(Geometry(state), state.psi(), 0);
}

EnergyBreakdown grid_energy(const RadialState& state)
{
  return energy_on(Geometry(state), state.psi(), state.coupling());
}

Observables observables(const RadialState& state)
{
  const Geometry geo(state);
  Observables o;
  o.energy = energy_on(geo, state.psi(), state.coupling());
  o.chemical_potential = o.energy.total + o.energy.interaction;
  o.rms_radius = std::sqrt(moment(geo, state.psi(), 2));
  o.central_density_amplitude = state.psi()[0];
  return o;
}

double virial_residual(const RadialState& state)
{
  const auto e = grid_energy(state);
  return 2.0 * e.kinetic - 2.0 * e.potential + state.dimension() * e.interaction;
}

RelaxResult relax(const SolverConfig& config, int dimension, double coupling,
                  const std::optional<RadialState>& initial, const StepObserver& observer)
{
  config.validate();
  check_dimension(dimension);

  RadialState state = RadialState::gaussian(dimension, coupling, config, config.initial_width);
  if (initial) {
    if (!initial->same_geometry(state))
      throw std::invalid_argument("initial profile does not match the solver grid");
    state = initial->with_coupling(coupling);
  }

  const Geometry geo(state);
  const double tau = config.time_step;
  const double radius_floor = config.radius_floor();
  const double energy_floor = config.energy_floor(coupling);
  auto psi = state.psi();
  psi.back() = 0.0;

  const auto collapsed = [&](double energy) {
    if (!std::isfinite(energy) || energy < energy_floor)
      return true;
    const double r2 = moment(geo, psi, 2);
    return !std::isfinite(r2) || std::sqrt(r2) < radius_floor;
  };

  if (!normalize(geo, psi))
    throw std::invalid_argument("initial profile has zero norm");
  double energy = energy_on(geo, psi, coupling).total;
  if (collapsed(energy))
    return {RelaxStatus::CollapseDetected, std::move(state)};

  std::vector<double> upper_scratch;
  std::vector<double> rhs_scratch;
  for (long step = 1; step <= config.max_iters; ++step) {
    const bool ok = implicit_step(geo, tau, coupling, psi, upper_scratch, rhs_scratch) &&
                    normalize(geo, psi);
    state.iterations = step;
    if (!ok)
      return {RelaxStatus::CollapseDetected, std::move(state)};

    const double next = energy_on(geo, psi, coupling).total;
    if (observer)
      observer(step, state, next);
    if (collapsed(next))
      return {RelaxStatus::CollapseDetected, std::move(state)};
    const bool done = std::abs(next - energy) / tau < config.energy_tol;
    energy = next;
    if (done) {
      state.converged = true;
      return {RelaxStatus::Converged, std::move(state)};
    }
  }
  return {RelaxStatus::NonConverged, std::move(state)};
}

CouplingBracket critical_coupling_grid(const SolverConfig& config, int dimension, double g_lo,
                                       double g_hi, double tol_g)
{
  if (dimension != 2 && dimension != 3)
    throw std::invalid_argument("grid critical coupling requires d = 2 or d = 3");
  if (!(g_lo < g_hi) || !(g_hi < 0.0))
    throw std::invalid_argument("bracket must satisfy g_lo < g_hi < 0");
  if (!(tol_g > 0.0))
    throw std::invalid_argument("tolerance must be positive");

  auto upper = relax(config, dimension, g_hi);
  if (upper.status != RelaxStatus::Converged)
    throw BracketError("relaxation does not converge at the upper end g = " +
                       std::to_string(g_hi) + " (" + std::string(to_string(upper.status)) + ")");

  CouplingBracket bracket{g_lo, g_hi, 1, std::move(upper.state)};

  auto lower = relax(config, dimension, g_lo, bracket.last_converged);
  ++bracket.probes;
  if (lower.status != RelaxStatus::CollapseDetected)
    throw BracketError("relaxation does not collapse at the lower end g = " +
                       std::to_string(g_lo) + " (" + std::string(to_string(lower.status)) + ")");

  while (bracket.g_hi - bracket.g_lo >= tol_g) {
    const double mid = 0.5 * (bracket.g_lo + bracket.g_hi);
    auto probe = relax(config, dimension, mid, bracket.last_converged);
    ++bracket.probes;
    switch (probe.status) {
    case RelaxStatus::Converged:
      bracket.g_hi = mid;
      bracket.last_converged = std::move(probe.state);
      break;
    case RelaxStatus::CollapseDetected:
      bracket.g_lo = mid;
      break;
    case RelaxStatus::NonConverged:
      throw BracketError("relaxation did not settle at g = " + std::to_string(mid));
    }
  }
  return bracket;
}

void write_profile(std::ostream& out, const RadialState& state)
{
  const auto e = grid_energy(state);
  char line[128];
  std::snprintf(line, sizeof line, "# d=%d g=%.10g energy=%.12g iterations=%ld\n",
                state.dimension(), state.coupling(), e.total, state.iterations);
  out << line;
  const auto psi = state.psi();
  for (std::size_t i = 0; i < state.size(); ++i) {
    std::snprintf(line, sizeof line, "%.10e %.12e\n", state.radius(i), psi[i]);
    out << line;
  }
}

}  // namespace bec
