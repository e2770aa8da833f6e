#include <doctest.h>

#include <allroots/poly_family.hpp>

#include <cmath>
#include <vector>

#include "test_util.hpp"

using namespace allroots;
using allroots_tests::seeded_rng;

TEST_CASE("family construction fixes degree and root bound") {
  const PolyFamily m4 = PolyFamily::mandelbrot_centers(4);
  CHECK(m4.degree == 8);
  CHECK(m4.root_bound == 2.0);
  const PolyFamily p2 = PolyFamily::per2(5);
  CHECK(p2.degree == 32);
  CHECK(p2.c_re == 2);
  CHECK(p2.c_im == 0);
  CHECK(p2.root_bound == doctest::Approx(1.74));
  const PolyFamily pi = PolyFamily::peri(3);
  CHECK(pi.degree == 8);
  CHECK(pi.c_re == 0);
  CHECK(pi.c_im == 1);
  CHECK(pi.root_bound == doctest::Approx(1.48));
  // Generic bound solves rho^2 - rho = |c|.
  const PolyFamily g = PolyFamily::periodic_points(2, 0, 3);
  CHECK(g.root_bound == doctest::Approx(2.0));
  CHECK_THROWS_AS(PolyFamily::mandelbrot_centers(0), std::invalid_argument);
  CHECK_THROWS_AS(PolyFamily::peri(41), std::invalid_argument);
}

TEST_CASE("starting radius scales the root bound") {
  CHECK(starting_radius(PolyFamily::per2(3), 2.0) == doctest::Approx(3.48));
  CHECK_THROWS_AS(starting_radius(PolyFamily::per2(3), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(starting_radius(PolyFamily::per2(3), 0.5), std::invalid_argument);
}

TEST_CASE("recursive evaluation on hand-checked points") {
  SUBCASE("center polynomial: three levels at c = 1") {
    // p: 1, 2, 5; p': 1, 3, 13.
    const auto ev = eval(PolyFamily::mandelbrot_centers(3), Cx<double>(1.0, 0.0));
    CHECK(ev.p.value() == Cx<double>(5.0, 0.0));
    CHECK(ev.dp.value() == Cx<double>(13.0, 0.0));
  }
  SUBCASE("fixed points of z^2 + 2 at z = 0") {
    // P(z) = z^2 - z + 2, P(0) = 2, P'(0) = -1.
    const auto ev = eval(PolyFamily::per2(1), Cx<double>(0.0, 0.0));
    CHECK(ev.p.value() == Cx<double>(2.0, 0.0));
    CHECK(ev.dp.value() == Cx<double>(-1.0, 0.0));
  }
  SUBCASE("period-2 points of z^2 + i at z = i") {
    // w: i, -1+i, -i; w': 1, 2i, -4-4i. P = -2i, P' = -5-4i.
    const auto ev = eval(PolyFamily::peri(2), Cx<double>(0.0, 1.0));
    CHECK(allroots_tests::approx_eq(ev.p.value(), Cx<double>(0.0, -2.0), 1e-15));
    CHECK(allroots_tests::approx_eq(ev.dp.value(), Cx<double>(-5.0, -4.0), 1e-15));
  }
}

TEST_CASE("centers of shorter periods are exact zeros of longer levels") {
  // c = 0 (period 1) and c = -1 (period 2) annihilate the period-4 level; the
  // small-integer recursion is exact in scaled arithmetic.
  CHECK(eval(PolyFamily::mandelbrot_centers(4), Cx<double>(0.0, 0.0)).p.is_zero());
  CHECK(eval(PolyFamily::mandelbrot_centers(4), Cx<double>(-1.0, 0.0)).p.is_zero());
}

TEST_CASE("leading coefficients: period 27 of z^2 + i") {
  // Degree 2^27; the first six leading coefficients, exact. Cross-checked by
  // two independent expansions (full dense for small periods, reversed-series
  // truncation for all periods) in integer arithmetic.
  const std::vector<GaussianInt> c = top_coefficients(PolyFamily::peri(27), 5);
  REQUIRE(c.size() == 6);
  CHECK(to_string(c[0]) == "1+0i");
  CHECK(to_string(c[1]) == "0+0i");
  CHECK(to_string(c[2]) == "0+67108864i");  // 2^26 i
  CHECK(to_string(c[3]) == "0+0i");
  CHECK(to_string(c[4]) == "-2251799780130816+33554432i");  // -2^51 + 2^25 + 2^25 i
  CHECK(to_string(c[5]) == "0+0i");
}

TEST_CASE("leading coefficients: small-period goldens") {
  SUBCASE("period 5 centers, nine leading terms") {
    const std::vector<GaussianInt> c = top_coefficients(PolyFamily::mandelbrot_centers(5), 8);
    const long long want[] = {1, 8, 28, 60, 94, 116, 114, 94, 69};
    REQUIRE(c.size() == 9);
    for (std::size_t i = 0; i < 9; ++i) CHECK(c[i] == GaussianInt(want[i], 0));
  }
  SUBCASE("period 4 of z^2 + 2, seven leading terms") {
    const std::vector<GaussianInt> c = top_coefficients(PolyFamily::per2(4), 6);
    const long long want[] = {1, 0, 16, 0, 120, 0, 544};
    REQUIRE(c.size() == 7);
    for (std::size_t i = 0; i < 7; ++i) CHECK(c[i] == GaussianInt(want[i], 0));
  }
  SUBCASE("period 2 of z^2 + i, complete expansion") {
    // (z^2 + i)^2 + i - z = z^4 + 2i z^2 - z + (-1 + i)
    const std::vector<GaussianInt> c = top_coefficients(PolyFamily::peri(2), 4);
    REQUIRE(c.size() == 5);
    CHECK(c[0] == GaussianInt(1, 0));
    CHECK(c[1] == GaussianInt(0, 0));
    CHECK(c[2] == GaussianInt(0, 2));
    CHECK(c[3] == GaussianInt(-1, 0));
    CHECK(c[4] == GaussianInt(-1, 1));
  }
  SUBCASE("period 4 of z^2 + i, complete expansion") {
    const std::vector<GaussianInt> c = top_coefficients(PolyFamily::peri(4), 16);
    const long long want[][2] = {{1, 0}, {0, 0},  {0, 8},    {0, 0}, {-28, 4}, {0, 0},
                                 {-24, -56}, {0, 0}, {64, -58}, {0, 0}, {72, 32}, {0, 0},
                                 {4, 44}, {0, 0},  {-8, 8},   {-1, 0}, {-1, 1}};
    REQUIRE(c.size() == 17);
    for (std::size_t i = 0; i < 17; ++i) CHECK(c[i] == GaussianInt(want[i][0], want[i][1]));
  }
}

TEST_CASE("prefix length validation") {
  CHECK_THROWS_AS(top_coefficients(PolyFamily::peri(3), 0), std::invalid_argument);
  CHECK_THROWS_AS(top_coefficients(PolyFamily::peri(3), 9), std::invalid_argument);
  CHECK(top_coefficients(PolyFamily::peri(3), 8).size() == 9);  // full expansion allowed
}

TEST_CASE("recursion matches dense Horner on the full expansion") {
  // For small periods the complete coefficient vector is exact; evaluating it
  // by Horner bounds the recursion's rounding error at a few ulp of the
  // magnitude envelope M(z) = sum |c_k| |z|^(d-k).
  auto check_family = [](const PolyFamily& fam) {
    const std::vector<GaussianInt> cg = top_coefficients(fam, fam.degree);
    std::vector<Cx<long double>> c;
    for (const GaussianInt& g : cg) c.push_back(to_complex<long double>(g));
    auto rng = seeded_rng(0xf01dab1e);
    for (int trial = 0; trial < 50; ++trial) {
      const Cx<long double> z = allroots_tests::random_complex<long double>(rng, -2.0L, 2.0L);
      Cx<long double> p = c[0], dp{};
      long double envP = std::abs(c[0]), envD = 0;
      const long double az = std::abs(z);
      for (std::size_t j = 1; j < c.size(); ++j) {
        dp = dp * z + p;
        p = p * z + c[j];
        envD = envD * az + envP;
        envP = envP * az + std::abs(c[j]);
      }
      const auto ev = eval(fam, z);
      const long double eps = std::numeric_limits<long double>::epsilon();
      CHECK(std::abs(ev.p.value() - p) <= 4 * eps * (envP + 1));
      CHECK(std::abs(ev.dp.value() - dp) <= 4 * eps * (envD + 1));
    }
  };
  check_family(PolyFamily::peri(4));
  check_family(PolyFamily::per2(3));
  check_family(PolyFamily::mandelbrot_centers(4));
}

TEST_CASE("scaled evaluation tracks the exact integer recursion beyond native range") {
  // At z = 3 the map w -> w^2 + 2 stays on integers; ten levels reach about
  // 2^1623, far past the double exponent range. Compare mantissa and exponent
  // against the exact big-integer value.
  BigInt w = 3;
  for (int k = 0; k < 10; ++k) w = w * w + 2;
  const BigInt p_exact = w - 3;  // subtract z
  const unsigned kTop = boost::multiprecision::msb(p_exact);
  const std::uint64_t top64 =
      ((p_exact >> (kTop - 63)).template convert_to<std::uint64_t>());

  const auto ev = eval(PolyFamily::per2(10), Cx<long double>(3.0L, 0.0L));
  CHECK(ev.p.im == 0.0L);
  const long double mant = ev.p.re;
  const std::int64_t shift = ev.p.exp2 - std::int64_t(kTop);
  REQUIRE(shift >= -2);
  REQUIRE(shift <= 2);
  const long double expected = (long double)(top64) / 0x1p63L;  // in [0.5, 1)
  const long double got = std::ldexp(mant, int(shift));
  CHECK(std::abs(got / expected - 1.0L) < 1e-13L);
}
