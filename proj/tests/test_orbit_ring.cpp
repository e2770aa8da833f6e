#include <doctest.h>

#include <allroots/orbit_ring.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "test_util.hpp"

using namespace allroots;
using allroots_tests::approx_eq;

TEST_CASE("cross ratio of three points") {
  // (z_prev - z_cur) / (z_next - z_cur) with z_cur = 1.
  const auto t = cross_ratio(Cx<double>(0.0, 0.0), Cx<double>(1.0, 0.0), Cx<double>(1.0, 1.0));
  CHECK(approx_eq(t, Cx<double>(0.0, 1.0), 1e-15));
  CHECK_THROWS_AS(cross_ratio(Cx<double>(0.0, 0.0), Cx<double>(1.0, 0.0), Cx<double>(1.0, 0.0)),
                  std::domain_error);
}

TEST_CASE("deformation measures log distortion of the cross ratio") {
  const Cx<double> t(0.3, -0.7);
  CHECK(deformation(t, t) == doctest::Approx(0.0));
  CHECK(deformation(2.0 * t, t) == doctest::Approx(std::log(2.0)));
  CHECK(std::isinf(deformation(Cx<double>(0.0, 0.0), t)));
  CHECK(std::isinf(deformation(t, Cx<double>(0.0, 0.0))));
}

TEST_CASE("ring configuration is validated") {
  RingConfig<double> cfg;
  cfg.n0 = 2;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = RingConfig<double>{};
  cfg.refinement_threshold = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = RingConfig<double>{};
  cfg.radius_factor = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  CHECK_NOTHROW(RingConfig<double>{}.validate());
}

TEST_CASE("seed geometry places orbits uniformly on the starting circle") {
  const PolyFamily fam = PolyFamily::per2(1);
  SUBCASE("phase zero starts on the positive real axis") {
    RingConfig<double> cfg;
    cfg.n0 = 4;
    OrbitRing<double> ring(fam, cfg);
    const auto& orbits = ring.pool();
    REQUIRE(orbits.size() == 4);
    const double r = starting_radius(fam, cfg.radius_factor);
    CHECK(r == doctest::Approx(3.48));
    CHECK(approx_eq(orbits[0].z, Cx<double>(r, 0.0), 1e-12));
    CHECK(approx_eq(orbits[1].z, Cx<double>(0.0, r), 1e-12));
    CHECK(approx_eq(orbits[2].z, Cx<double>(-r, 0.0), 1e-12));
    CHECK(approx_eq(orbits[3].z, Cx<double>(0.0, -r), 1e-12));
  }
  SUBCASE("phase shifts every seed by the same fraction of the spacing") {
    RingConfig<double> cfg;
    cfg.n0 = 4;
    cfg.phase = 0.5;
    OrbitRing<double> ring(fam, cfg);
    const double r = starting_radius(fam, cfg.radius_factor);
    const double angle = 2.0 * std::numbers::pi_v<double> * 0.5 / 4.0;
    CHECK(approx_eq(ring.pool()[0].z, Cx<double>(r * std::cos(angle), r * std::sin(angle)), 1e-12));
  }
}

TEST_CASE("generation cap is the smallest doubling that covers four times the degree") {
  SUBCASE("already covered at the seed count") {
    RingConfig<double> cfg;
    cfg.n0 = 64;
    OrbitRing<double> ring(PolyFamily::peri(2), cfg);  // degree 4, 64 >= 16
    CHECK(ring.max_generation() == 0);
  }
  SUBCASE("degree 256 with 64 seeds needs four doublings") {
    RingConfig<double> cfg;
    cfg.n0 = 64;
    OrbitRing<double> ring(PolyFamily::peri(8), cfg);  // 64 * 2^4 = 1024 >= 4 * 256
    CHECK(ring.max_generation() == 4);
  }
  SUBCASE("an explicit cap wins over the derived one") {
    RingConfig<double> cfg;
    cfg.n0 = 64;
    cfg.max_generation = 2;
    OrbitRing<double> ring(PolyFamily::peri(8), cfg);
    CHECK(ring.max_generation() == 2);
  }
}

TEST_CASE("sweeping a drained ring is a no-op") {
  RingConfig<double> rcfg;
  rcfg.n0 = 4;
  OrbitRing<double> ring(PolyFamily::per2(1), rcfg);
  EngineConfig<double> ecfg;
  while (!ring.done()) ring.sweep(ecfg, 1);
  const auto sweeps = ring.sweep_count();
  const auto pool_size = ring.pool().size();
  const SweepOutcome out = ring.sweep(ecfg, 1);
  CHECK(out.advanced == 0);
  CHECK(out.inserted == 0);
  CHECK(ring.sweep_count() == sweeps);
  CHECK(ring.pool().size() == pool_size);
  CHECK(ring.done());
}

TEST_CASE("a full run on the fixed points of squaring plus i finds both") {
  const PolyFamily fam = PolyFamily::peri(1);  // z^2 - z + i
  EngineConfig<long double> ecfg;
  RingConfig<long double> rcfg;
  rcfg.n0 = 8;
  const auto result = run(fam, ecfg, rcfg, default_eps_root<long double>(), 1);
  CHECK(result.stats.distinct_roots == 2);
  CHECK(result.stats.failed == 0);
  const auto pts = result.roots.points();
  REQUIRE(pts.size() == 2);
  // Roots of z^2 - z + i: sum is 1, product is i.
  CHECK(approx_eq(pts[0] + pts[1], Cx<long double>(1.0L, 0.0L), 1e-15L));
  CHECK(approx_eq(pts[0] * pts[1], Cx<long double>(0.0L, 1.0L), 1e-15L));
}

TEST_CASE("trace callback fires for sweep zero and then per sweep") {
  RingConfig<double> rcfg;
  rcfg.n0 = 4;
  OrbitRing<double> ring(PolyFamily::per2(1), rcfg);
  std::vector<std::int64_t> sweeps_seen;
  ring.set_trace(
      [&](std::int64_t sweep, std::uint32_t, const Cx<double>&) { sweeps_seen.push_back(sweep); },
      1);
  REQUIRE(sweeps_seen.size() == 4);
  for (auto s : sweeps_seen) CHECK(s == 0);
  EngineConfig<double> ecfg;
  ring.sweep(ecfg, 1);
  REQUIRE(sweeps_seen.size() == 8);
  for (std::size_t i = 4; i < 8; ++i) CHECK(sweeps_seen[i] == 1);
}
