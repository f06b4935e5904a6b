#include "bec/gpesolve.hpp"
#include "bec/variational.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

using namespace bec;

namespace {

double max_node_error(const RadialState& a, const RadialState& b)
{
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a.psi()[i] - b.psi()[i]));
  return worst;
}

double variational_minimum(int d, double g)
{
  return classify(AnsatzProblem(d, g)).minimum()->energy.total;
}

}  // namespace

TEST_CASE("ideal gas relaxes to the oscillator ground state")
{
  SolverConfig config;
  config.initial_width = 1.6;  // start away from the answer
  for (int d : {1, 2, 3}) {
    CAPTURE(d);
    const auto result = relax(config, d, 0.0);
    REQUIRE(result.status == RelaxStatus::Converged);
    CHECK(result.state.converged);
    const auto obs = observables(result.state);
    CHECK(std::abs(obs.energy.total - 0.5 * d) < 1e-4);
    CHECK(std::abs(obs.rms_radius - std::sqrt(0.5 * d)) < 1e-3);
    CHECK(max_node_error(result.state, RadialState::gaussian(d, 0.0, config)) < 1e-3);
    CHECK(obs.energy.interaction == 0.0);
  }
}

TEST_CASE("attractive 3D condensate sits below the Gaussian bound")
{
  const auto result = relax(SolverConfig{}, 3, -4.0);
  REQUIRE(result.status == RelaxStatus::Converged);
  const auto obs = observables(result.state);
  CHECK(obs.energy.total <= 1.358);
  CHECK(obs.energy.total >= 1.2);
  CHECK(obs.rms_radius < std::sqrt(1.5));
  CHECK(obs.energy.interaction < 0.0);
  CHECK(std::abs(virial_residual(result.state)) < 1e-3);
  CHECK(obs.chemical_potential == obs.energy.total + obs.energy.interaction);
}

TEST_CASE("beyond the threshold the flow collapses")
{
  CHECK(relax(SolverConfig{}, 3, -10.0).status == RelaxStatus::CollapseDetected);
  CHECK(relax(SolverConfig{}, 2, -8.0).status == RelaxStatus::CollapseDetected);
}

TEST_CASE("virial residual of sampled Gaussians")
{
  const SolverConfig config;
  CHECK(std::abs(virial_residual(RadialState::gaussian(3, 0.0, config))) < 1e-3);
  // Kinetic and potential cancel at unit width, leaving 3 E_int.
  const double expected = 3.0 * gaussian_energy(AnsatzProblem(3, -4.0), 1.0).interaction;
  CHECK(virial_residual(RadialState::gaussian(3, -4.0, config)) ==
        doctest::Approx(expected).epsilon(1e-3));
  CHECK(expected == doctest::Approx(-0.38096).epsilon(1e-4));
}

TEST_CASE("flow keeps the norm and lowers the energy")
{
  for (int d : {1, 2, 3}) {
    CAPTURE(d);
    const double g = d == 3 ? -4.0 : d == 2 ? -3.0 : -5.0;
    double worst_norm = 0.0;
    double worst_rise = 0.0;
    double previous = 0.0;
    const auto result = relax(SolverConfig{}, d, g, std::nullopt,
                              [&](long step, const RadialState& s, double energy) {
                                worst_norm = std::max(worst_norm, std::abs(norm(s) - 1.0));
                                if (step > 100)
                                  worst_rise = std::max(worst_rise, energy - previous);
                                previous = energy;
                              });
    REQUIRE(result.status == RelaxStatus::Converged);
    CHECK(worst_norm < 1e-12);
    // Rounding only.
    CHECK(worst_rise <= 1e-13);
  }
}

TEST_CASE("grid energy never exceeds the Gaussian bound")
{
  for (int d : {1, 2, 3}) {
    for (double g : {-5.0, -2.0, 0.0, 3.0, 10.0}) {
      if (d >= 2 && g < -4.0)
        continue;
      CAPTURE(d);
      CAPTURE(g);
      const auto result = relax(SolverConfig{}, d, g);
      REQUIRE(result.status == RelaxStatus::Converged);
      CHECK(grid_energy(result.state).total <= variational_minimum(d, g) + 1e-3);
    }
  }
}

TEST_CASE("second-order mesh convergence")
{
  std::vector<double> energies;
  for (int n : {257, 513, 1025}) {
    SolverConfig config;
    config.n_points = n;
    config.energy_tol = 1e-11;
    const auto result = relax(config, 3, -4.0);
    REQUIRE(result.status == RelaxStatus::Converged);
    energies.push_back(grid_energy(result.state).total);
  }
  const double coarse = energies[0] - energies[1];
  const double fine = energies[1] - energies[2];
  CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("1D condensate narrows with attraction but does not collapse")
{
  double previous = 1e9;
  for (double g : {-1.0, -5.0, -20.0, -50.0}) {
    CAPTURE(g);
    const auto result = relax(SolverConfig{}, 1, g);
    REQUIRE(result.status == RelaxStatus::Converged);
    const double rms = observables(result.state).rms_radius;
    CHECK(rms < previous);
    previous = rms;
  }
}

TEST_CASE("warm start and iteration cap")
{
  const SolverConfig config;
  const auto first = relax(config, 3, -2.0);
  REQUIRE(first.status == RelaxStatus::Converged);
  const auto again = relax(config, 3, -2.0, first.state);
  REQUIRE(again.status == RelaxStatus::Converged);
  CHECK(again.state.iterations < 10);

  SolverConfig capped;
  capped.max_iters = 5;
  const auto stopped = relax(capped, 3, -2.0);
  CHECK(stopped.status == RelaxStatus::NonConverged);
  CHECK(stopped.state.iterations == 5);
  CHECK_FALSE(stopped.state.converged);
}

TEST_CASE("input validation")
{
  SolverConfig bad;
  bad.n_points = 8;
  CHECK_THROWS_AS(relax(bad, 3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(relax(SolverConfig{}, 4, 0.0), std::invalid_argument);

  SolverConfig other;
  other.n_points = 512;
  const auto foreign = RadialState::gaussian(3, 0.0, other);
  CHECK_THROWS_AS(relax(SolverConfig{}, 3, 0.0, foreign), std::invalid_argument);
  CHECK_THROWS_AS(relax(SolverConfig{}, 2, 0.0, RadialState::gaussian(3, 0.0, SolverConfig{})),
                  std::invalid_argument);
}

TEST_CASE("collapse thresholds from the defaults")
{
  SolverConfig config;
  CHECK(config.radius_floor() == doctest::Approx(3.0 * 8.0 / 1023.0));
  CHECK(config.energy_floor(-4.0) == doctest::Approx(-50.0));
  config.collapse_radius_floor = 0.2;
  CHECK(config.radius_floor() == 0.2);
}

TEST_CASE("grid critical coupling in 3D")
{
  const auto bracket = critical_coupling_grid(SolverConfig{}, 3, -9.0, -1.0, 0.02);
  CHECK(bracket.g_hi - bracket.g_lo < 0.02);
  CHECK(bracket.g_lo > critical_coupling(3)->coupling);
  CHECK(bracket.g_hi < 0.0);
  CHECK(bracket.g_lo <= -7.1);
  CHECK(bracket.g_hi >= -7.3);
  CHECK(bracket.last_converged.converged);
  CHECK(bracket.last_converged.coupling() == bracket.g_hi);
}

TEST_CASE("grid critical coupling preconditions")
{
  CHECK_THROWS_AS(critical_coupling_grid(SolverConfig{}, 1, -9.0, -1.0, 0.02),
                  std::invalid_argument);
  CHECK_THROWS_AS(critical_coupling_grid(SolverConfig{}, 3, -1.0, -9.0, 0.02),
                  std::invalid_argument);
  CHECK_THROWS_AS(critical_coupling_grid(SolverConfig{}, 3, -9.0, 1.0, 0.02),
                  std::invalid_argument);
  // Both ends converge.
  CHECK_THROWS_AS(critical_coupling_grid(SolverConfig{}, 3, -5.0, -1.0, 0.02), BracketError);
  // Both ends collapse.
  CHECK_THROWS_AS(critical_coupling_grid(SolverConfig{}, 3, -12.0, -9.0, 0.02), BracketError);
}

TEST_CASE("profile dump")
{
  SolverConfig config;
  config.n_points = 64;
  const auto result = relax(config, 2, 1.0);
  std::ostringstream out;
  write_profile(out, result.state);

  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header.rfind("# d=2 g=1 energy=", 0) == 0);
  CHECK(header.find("iterations=" + std::to_string(result.state.iterations)) != std::string::npos);

  std::size_t rows = 0;
  double r = 0.0;
  double psi = 0.0;
  while (in >> r >> psi) {
    CHECK(r == doctest::Approx(result.state.radius(rows)));
    CHECK(psi == doctest::Approx(result.state.psi()[rows]));
    ++rows;
  }
  CHECK(rows == 64);
}
