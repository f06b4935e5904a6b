#include "bec/variational.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

using namespace bec;

namespace {

constexpr double kPi = oracle::kPi;

std::optional<VariationalPoint> local_min(double d, double g)
{
  return classify(AnsatzProblem(d, g)).minimum();
}

}  // namespace

TEST_CASE("gaussian energy closed form")
{
  CHECK(gaussian_energy(AnsatzProblem(3, 0), 1.0).total == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(gaussian_energy(AnsatzProblem(1, 0), 2.0).total == doctest::Approx(1.0625).epsilon(1e-15));

  const auto e = gaussian_energy(AnsatzProblem(3, -4), 1.0);
  CHECK(e.interaction == doctest::Approx(-0.12698727186848194).epsilon(1e-13));
  CHECK(e.total == doctest::Approx(1.3730127281315181).epsilon(1e-13));
  CHECK(e.total == e.kinetic + e.potential + e.interaction);
  CHECK(e.kinetic > 0.0);
  CHECK(e.potential > 0.0);

  CHECK_THROWS_AS(gaussian_energy(AnsatzProblem(3, 1), 0.0), std::domain_error);
  CHECK_THROWS_AS(gaussian_energy(AnsatzProblem(3, 1), -1.0), std::domain_error);
}

TEST_CASE("gaussian energy matches quadrature of the functional")
{
  for (int d : {1, 2, 3}) {
    for (double g : {-6.0, -1.0, 0.0, 3.5}) {
      for (double sigma : {0.4, 1.0, 1.7}) {
        const auto closed = gaussian_energy(AnsatzProblem(d, g), sigma);
        const auto quad = oracle::gaussian_energy_by_quadrature(d, g, sigma);
        CAPTURE(d);
        CAPTURE(g);
        CAPTURE(sigma);
        CHECK(std::abs(closed.total - quad.total) <= 1e-8 * std::abs(quad.total));
        CHECK(closed.kinetic == doctest::Approx(quad.kinetic).epsilon(1e-8));
        CHECK(closed.potential == doctest::Approx(quad.potential).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("stationarity residual")
{
  CHECK(stationarity_residual(AnsatzProblem(3, 0), 1.0) == 0.0);
  CHECK(stationarity_residual(AnsatzProblem(3, 0), 2.0) == doctest::Approx(30.0));

  // Sign agrees with a central finite difference of E.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist_d(1.0, 3.0), dist_g(-10.0, 10.0), dist_s(0.2, 3.0);
  for (int k = 0; k < 200; ++k) {
    const AnsatzProblem p(dist_d(rng), dist_g(rng));
    const double s = dist_s(rng);
    const double h = 1e-6 * s;
    const double slope = (oracle::gaussian_total_energy(p.dimension(), p.coupling(), s + h) -
                          oracle::gaussian_total_energy(p.dimension(), p.coupling(), s - h)) /
                         (2 * h);
    const double scaled = 2.0 * std::pow(s, p.dimension() + 1) / p.dimension() * slope;
    const double res = stationarity_residual(p, s);
    CHECK(res == doctest::Approx(scaled).epsilon(1e-5).scale(1.0));
  }
}

TEST_CASE("stationary points")
{
  SUBCASE("ideal gas")
  {
    const auto pts = find_stationary_points(AnsatzProblem(3, 0));
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].sigma == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(pts[0].kind == PointKind::LocalMin);
  }
  SUBCASE("metastable 3D")
  {
    const auto pts = find_stationary_points(AnsatzProblem(3, -4));
    REQUIRE(pts.size() == 2);
    const auto scan = oracle::stationary_points_by_scan(3, -4);
    REQUIRE(scan.size() == 2);
    CHECK(pts[0].sigma == doctest::Approx(0.25505388737456467).epsilon(1e-11));
    CHECK(pts[1].sigma == doctest::Approx(0.92266787088591323).epsilon(1e-11));
    CHECK(pts[0].sigma == doctest::Approx(scan[0]).epsilon(1e-10));
    CHECK(pts[1].sigma == doctest::Approx(scan[1]).epsilon(1e-10));
    CHECK(pts[0].kind == PointKind::LocalMax);
    CHECK(pts[1].kind == PointKind::LocalMin);
  }
  SUBCASE("collapse regime")
  {
    CHECK(find_stationary_points(AnsatzProblem(3, -10)).empty());
    CHECK(oracle::stationary_points_by_scan(3, -10).empty());
  }
  SUBCASE("residual at refined roots")
  {
    for (double g : {-8.0, -4.0, -0.5, 0.0, 2.0, 100.0}) {
      const AnsatzProblem p(3, g);
      for (const auto& pt : find_stationary_points(p))
        CHECK(std::abs(stationarity_residual(p, pt.sigma)) < 1e-10);
    }
  }
  SUBCASE("weak attraction puts the barrier top below the search window")
  {
    const auto pts = find_stationary_points(AnsatzProblem(3, -1e-7));
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].kind == PointKind::LocalMin);
    const auto report = classify(AnsatzProblem(3, -1e-7));
    CHECK(report.classification == Classification::Metastable);
    CHECK_FALSE(report.barrier_height.has_value());
  }
}

TEST_CASE("classification")
{
  CHECK(classify(AnsatzProblem(3, 5)).classification == Classification::Stable);
  CHECK(classify(AnsatzProblem(3, -4)).classification == Classification::Metastable);
  CHECK(classify(AnsatzProblem(1, -50)).classification == Classification::Stable);
  CHECK(classify(AnsatzProblem(2, -2 * kPi)).classification == Classification::Critical);
  CHECK(classify(AnsatzProblem(3, -10)).classification == Classification::Unstable);

  const auto stable = classify(AnsatzProblem(3, 5));
  CHECK(stable.points.size() == 1);
  CHECK_FALSE(stable.barrier_height.has_value());
  REQUIRE(stable.mean_radius.has_value());

  const auto meta = classify(AnsatzProblem(3, -4));
  REQUIRE(meta.mean_radius.has_value());
  CHECK(*meta.mean_radius == doctest::Approx(std::sqrt(1.5) * 0.92266787088591323));

  const auto gone = classify(AnsatzProblem(3, -10));
  CHECK_FALSE(gone.mean_radius.has_value());
  CHECK_FALSE(gone.barrier_height.has_value());
}

TEST_CASE("classification flips at the thresholds")
{
  const double g3 = critical_coupling(3)->coupling;
  CHECK(classify(AnsatzProblem(3, g3 + 1e-6)).classification == Classification::Metastable);
  CHECK(classify(AnsatzProblem(3, g3 - 1e-6)).classification == Classification::Unstable);

  const double g2 = critical_coupling(2)->coupling;
  CHECK(classify(AnsatzProblem(2, g2 + 1e-6)).classification == Classification::Stable);
  CHECK(classify(AnsatzProblem(2, g2)).classification == Classification::Critical);
  CHECK(classify(AnsatzProblem(2, g2 - 1e-6)).classification == Classification::Unstable);
}

TEST_CASE("critical coupling")
{
  const auto c3 = critical_coupling(3);
  REQUIRE(c3.has_value());
  REQUIRE(c3->sigma.has_value());
  CHECK(*c3->sigma == doctest::Approx(0.66874030497642202).epsilon(1e-13));
  CHECK(c3->coupling == doctest::Approx(-8.4259191666896804).epsilon(1e-13));

  const auto c2 = critical_coupling(2);
  REQUIRE(c2.has_value());
  CHECK(c2->coupling == doctest::Approx(-2 * kPi).epsilon(1e-15));
  CHECK_FALSE(c2->sigma.has_value());

  CHECK_FALSE(critical_coupling(1).has_value());
  CHECK_FALSE(critical_coupling(1.7).has_value());
}

TEST_CASE("3D threshold found independently by scanning g")
{
  // Walk g downward with the dense-scan oracle until the two roots vanish.
  double lo = -9.0;
  double hi = -8.0;
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (oracle::stationary_points_by_scan(3, mid, 0.3, 1.5, 20000, 1e-13).size() == 2)
      hi = mid;
    else
      lo = mid;
  }
  CHECK(hi == doctest::Approx(critical_coupling(3)->coupling).epsilon(1e-6));
}

TEST_CASE("stationary points merge at the 3D fold")
{
  const double g3 = critical_coupling(3)->coupling;
  const auto pts = find_stationary_points(AnsatzProblem(3, g3 + 1e-6));
  REQUIRE(pts.size() == 2);
  const double sigma_c = std::pow(5.0, -0.25);
  CHECK(std::abs(pts[0].sigma - sigma_c) < 1e-3);
  CHECK(std::abs(pts[1].sigma - sigma_c) < 1e-3);

  const auto wider = find_stationary_points(AnsatzProblem(3, g3 + 1e-2));
  REQUIRE(wider.size() == 2);
  CHECK(wider[1].sigma - wider[0].sigma > pts[1].sigma - pts[0].sigma);

  const auto at = find_stationary_points(AnsatzProblem(3, g3));
  REQUIRE_FALSE(at.empty());
  for (const auto& p : at)
    CHECK(std::abs(p.sigma - sigma_c) < 1e-4);
}

TEST_CASE("mean radius")
{
  CHECK(mean_radius(3, 1.0) == doctest::Approx(1.2247448713915890));
  CHECK(mean_radius(1, 2.0) == doctest::Approx(1.4142135623730951));
  CHECK(mean_radius(2, 0.5) == doctest::Approx(0.5));
}

TEST_CASE("barrier height")
{
  REQUIRE(barrier_height(AnsatzProblem(3, -4)).has_value());
  CHECK(*barrier_height(AnsatzProblem(3, -4)) == doctest::Approx(2.5665583222413444).epsilon(1e-10));
  CHECK_FALSE(barrier_height(AnsatzProblem(3, 0)).has_value());

  const double b1 = *barrier_height(AnsatzProblem(3, -8.4));
  const double b2 = *barrier_height(AnsatzProblem(3, -8.42));
  CHECK(b1 == doctest::Approx(3.8768068060962817e-4).epsilon(1e-7));
  CHECK(b2 == doctest::Approx(4.2171402914015425e-5).epsilon(1e-6));
  CHECK(b2 < b1);
}

TEST_CASE("scan minimizer")
{
  const auto ideal = scan_minimize(AnsatzProblem(3, 0), 0.1, 10, 100000);
  REQUIRE(ideal.has_value());
  CHECK(std::abs(ideal->sigma - 1.0) < 1e-6);

  const auto meta = scan_minimize(AnsatzProblem(3, -4), 1e-4, 10, 1000000);
  REQUIRE(meta.has_value());
  CHECK(std::abs(meta->sigma - 0.92266787088591323) < 1e-6);

  CHECK_FALSE(scan_minimize(AnsatzProblem(3, -10), 1e-4, 10, 1000000).has_value());

  CHECK_THROWS_AS(scan_minimize(AnsatzProblem(3, 0), 1.0, 0.5, 100), std::invalid_argument);
  CHECK_THROWS_AS(scan_minimize(AnsatzProblem(3, 0), 0.1, 1.0, 2), std::invalid_argument);
}

// Near d = 2 with g < 0 the barrier top sits at sigma ~ 1e-6 where each term
// is ~1e11; there only the relative residual is meaningful in double.
TEST_CASE("virial identity at stationary points")
{
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> dist_d(1.0, 3.0), dist_g(-8.0, 8.0);
  for (int k = 0; k < 200; ++k) {
    const AnsatzProblem p(dist_d(rng), dist_g(rng));
    for (const auto& pt : find_stationary_points(p)) {
      const auto& e = pt.energy;
      const double virial = 2 * e.kinetic - 2 * e.potential + p.dimension() * e.interaction;
      const double scale = e.kinetic + e.potential + std::abs(e.interaction);
      CHECK(std::abs(virial) < 1e-9 * std::max(1.0, scale));
    }
  }
}

TEST_CASE("root finder and scan minimizer agree")
{
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> dist_d(1.0, 3.0), dist_g(-8.0, 8.0);
  int compared = 0;
  for (int k = 0; k < 200; ++k) {
    const AnsatzProblem p(dist_d(rng), dist_g(rng));
    const auto root = classify(p).minimum();
    const auto scan = scan_minimize(p, 1e-4, 10.0, 100000);
    if (root && scan) {
      CHECK(std::abs(root->sigma - scan->sigma) < 1e-5);
      ++compared;
    }
  }
  CHECK(compared > 150);
}

TEST_CASE("radius grows with repulsion and shrinks with attraction in 3D")
{
  double prev_sigma = 0.0;
  double prev_radius = 0.0;
  for (double g = -8.4; g <= 20.0; g += 0.4) {
    const auto m = local_min(3, g);
    REQUIRE(m.has_value());
    CHECK(m->sigma > prev_sigma);
    CHECK(mean_radius(3, m->sigma) > prev_radius);
    prev_sigma = m->sigma;
    prev_radius = mean_radius(3, m->sigma);
  }
}

TEST_CASE("1D width shrinks toward zero but never collapses")
{
  double prev = 1.0;
  for (double g : {-1.0, -10.0, -100.0, -1000.0, -10000.0}) {
    const auto m = local_min(1, g);
    REQUIRE(m.has_value());
    CHECK(m->sigma > 0.0);
    CHECK(m->sigma < prev);
    prev = m->sigma;
  }
  CHECK(prev < 3e-4);
}

TEST_CASE("dimension validation")
{
  CHECK_THROWS_AS(AnsatzProblem(0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(AnsatzProblem(3, std::nan("")), std::invalid_argument);
  CHECK_NOTHROW(AnsatzProblem(2.5, -1.0));
}
