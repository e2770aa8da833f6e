#include <doctest.h>

#include <allroots/io.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "test_util.hpp"

using namespace allroots;

TEST_CASE("root list round trip is bitwise for the 53-bit tier") {
  RootSet<double> rs(1e-9);
  rs.register_root(Cx<double>(1.0 / 3.0, -std::sqrt(2.0)), Cx<double>(1e-13, 2e-13), 64);
  rs.register_root(Cx<double>(-0.7071067811865476, 0.125), Cx<double>(-3e-14, 0.0), 64);
  rs.register_root(Cx<double>(5e-300, -1e12), Cx<double>(0.0, 0.0), 64);
  std::ostringstream os;
  write_roots(os, rs);
  std::istringstream is(os.str());
  const auto rec = read_roots<double>(is);
  REQUIRE(rec.size() == rs.size());
  const auto& es = rs.entries();
  for (std::size_t i = 0; i < rec.size(); ++i) {
    CHECK(rec[i].z.real() == es[i].z.real());
    CHECK(rec[i].z.imag() == es[i].z.imag());
    CHECK(rec[i].inclusion_radius == es[i].inclusion_radius);
    CHECK(rec[i].hit_count == es[i].hit_count);
  }
}

TEST_CASE("root list round trip stays within an extended-tier print ulp") {
  RootSet<long double> rs(1e-12L);
  rs.register_root(Cx<long double>(1.0L / 3.0L, -std::sqrt(2.0L)), Cx<long double>(1e-17L, 0.0L),
                   256);
  rs.register_root(Cx<long double>(0.1L, 0.7L), Cx<long double>(2e-18L, -1e-18L), 256);
  std::ostringstream os;
  write_roots(os, rs);
  std::istringstream is(os.str());
  const auto rec = read_roots<long double>(is);
  REQUIRE(rec.size() == 2);
  const auto& es = rs.entries();
  for (std::size_t i = 0; i < rec.size(); ++i) {
    const long double scale = 1.0L + std::abs(es[i].z);
    CHECK(std::abs(rec[i].z - es[i].z) <= 1e-16L * scale);
    CHECK(rec[i].hit_count == es[i].hit_count);
  }
}

TEST_CASE("root list file round trip") {
  const std::string path = "allroots_io_roundtrip.tmp";
  RootSet<double> rs(1e-9);
  rs.register_root(Cx<double>(0.25, -0.5), Cx<double>(1e-13, 0.0), 8);
  write_roots_file(path, rs);
  const auto rec = read_roots_file<double>(path);
  std::remove(path.c_str());
  REQUIRE(rec.size() == 1);
  CHECK(rec[0].z == Cx<double>(0.25, -0.5));
  CHECK(rec[0].hit_count == 1);
}

TEST_CASE("root reader skips blanks and comments, reports malformed lines") {
  SUBCASE("comments and blank lines are invisible") {
    std::istringstream is(
        "# header comment\n"
        "\n"
        " \t \n"
        "1.0 2.0 1e-9 3\n"
        "# trailing note\n");
    const auto rec = read_roots<double>(is);
    REQUIRE(rec.size() == 1);
    CHECK(rec[0].z == Cx<double>(1.0, 2.0));
    CHECK(rec[0].inclusion_radius == 1e-9);
    CHECK(rec[0].hit_count == 3);
  }
  SUBCASE("a malformed field carries its line number") {
    std::istringstream is(
        "1.0 2.0 1e-9 3\n"
        "4.0 5.0 1e-9 2\n"
        "6.0 oops 1e-9 1\n");
    try {
      read_roots<double>(is);
      FAIL("expected parse_error");
    } catch (const parse_error& e) {
      CHECK(e.line() == 3);
      CHECK(std::string(e.what()).find("(line 3)") != std::string::npos);
    }
  }
  SUBCASE("a missing hit count is malformed") {
    std::istringstream is("1.0 2.0 1e-9\n");
    CHECK_THROWS_AS(read_roots<double>(is), parse_error);
  }
}

TEST_CASE("power-sum lines round trip and enforce contiguous orders") {
  SUBCASE("round trip is bitwise for the 53-bit tier") {
    const std::vector<Cx<double>> b = {Cx<double>(0.0, -256.0), Cx<double>(1.0 / 7.0, 2e-13),
                                       Cx<double>(-5376.0, 3328.0)};
    std::ostringstream os;
    write_sums(os, std::span<const Cx<double>>(b));
    std::istringstream is(os.str());
    const auto back = read_sums<double>(is);
    REQUIRE(back.size() == b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
      CHECK(back[i].real() == b[i].real());
      CHECK(back[i].imag() == b[i].imag());
    }
  }
  SUBCASE("an order gap is rejected") {
    std::istringstream is(
        "1 0.0 0.0\n"
        "3 1.0 1.0\n");
    CHECK_THROWS_AS(read_sums<double>(is), parse_error);
  }
  SUBCASE("orders must start at one") {
    std::istringstream is("2 1.0 1.0\n");
    try {
      read_sums<double>(is);
      FAIL("expected parse_error");
    } catch (const parse_error& e) {
      CHECK(e.line() == 1);
    }
  }
  SUBCASE("comments are allowed between sum lines") {
    std::istringstream is(
        "# sums\n"
        "1 3.0 0.0\n"
        "# midway\n"
        "2 5.0 0.0\n");
    const auto back = read_sums<double>(is);
    REQUIRE(back.size() == 2);
    CHECK(back[1] == Cx<double>(5.0, 0.0));
  }
}

TEST_CASE("verification report CSV shape") {
  PowerSumReport<double> rep;
  rep.m = 2;
  rep.degree = 2;
  rep.theoretical = {GaussianInt(3, 0), GaussianInt(-5, 2)};
  rep.empirical = {Cx<double>(3.0 + 1e-8, 0.0), Cx<double>(-5.0, 2.0)};
  rep.residuals = {1e-8, 0.0};
  rep.integer_part_consistent = {true, true};
  std::ostringstream os;
  write_report_csv(os, rep);
  std::istringstream is(os.str());
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line == "k,a_k,empirical_re,empirical_im,residual");
  REQUIRE(std::getline(is, line));
  CHECK(line.rfind("1,3+0i,", 0) == 0);
  REQUIRE(std::getline(is, line));
  CHECK(line.rfind("2,-5+2i,", 0) == 0);
  CHECK(!std::getline(is, line));
}
