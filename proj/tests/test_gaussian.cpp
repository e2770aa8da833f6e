#include <doctest.h>

#include <allroots/gaussian.hpp>

using namespace allroots;

TEST_CASE("gaussian integer arithmetic") {
  const GaussianInt a(2, 3);
  const GaussianInt b(4, -5);
  CHECK(a * b == GaussianInt(23, 2));
  CHECK(a + b == GaussianInt(6, -2));
  CHECK(a - b == GaussianInt(-2, 8));
  CHECK(-a == GaussianInt(-2, -3));
  CHECK(a * 7ll == GaussianInt(14, 21));
  CHECK(conj(a) == GaussianInt(2, -3));
  CHECK(norm(a) == 13);
  CHECK(GaussianInt(0, 0).is_zero());
  CHECK(!a.is_zero());
}

TEST_CASE("squaring a large purely imaginary value is exact") {
  const GaussianInt c(0, std::int64_t(1) << 26);
  const GaussianInt sq = c * c;
  CHECK(sq.re == -(BigInt(1) << 52));
  CHECK(sq.im == 0);
}

TEST_CASE("text round trip at thousands of digits") {
  GaussianInt g;
  g.re = (BigInt(1) << 10000) + 12345;
  g.im = -((BigInt(1) << 9999) + 7);
  const std::string s = to_string(g);
  CHECK(s.size() > 6000);  // two ~3000-digit decimal components
  CHECK(gaussian_from_string(s) == g);
}

TEST_CASE("canonical text keeps both components") {
  CHECK(to_string(GaussianInt(3, 5)) == "3+5i");
  CHECK(to_string(GaussianInt(-3, -2)) == "-3-2i");
  CHECK(to_string(GaussianInt(0, 0)) == "0+0i");
  CHECK(to_string(GaussianInt(7, 0)) == "7+0i");
  CHECK(gaussian_from_string("0-134217728i") == GaussianInt(0, -134217728));
}

TEST_CASE("malformed gaussian text is rejected") {
  CHECK_THROWS_AS(gaussian_from_string("12"), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_from_string("5i"), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_from_string(""), std::invalid_argument);
}

TEST_CASE("conversion to native complex") {
  const auto z = to_complex<double>(GaussianInt(3, -4));
  CHECK(z == Cx<double>(3.0, -4.0));
}

TEST_CASE("gaussian rational normalization and equality") {
  // Denominator sign moves to the numerator; common factors cancel.
  const GaussianRat q(GaussianInt(2, 4), BigInt(-2));
  CHECK(q == GaussianRat(GaussianInt(-1, -2), BigInt(1)));
  CHECK(q.is_integer());
  CHECK(GaussianRat(GaussianInt(3, 0), BigInt(6)) == GaussianRat(GaussianInt(1, 0), BigInt(2)));
  CHECK_THROWS_AS(GaussianRat(GaussianInt(1, 0), BigInt(0)), std::domain_error);
}

TEST_CASE("gaussian rational arithmetic") {
  const GaussianRat half(GaussianInt(1, 0), BigInt(2));
  const GaussianRat third(GaussianInt(1, 0), BigInt(3));
  CHECK(half + third == GaussianRat(GaussianInt(5, 0), BigInt(6)));
  CHECK(half - third == GaussianRat(GaussianInt(1, 0), BigInt(6)));
  const GaussianRat p(GaussianInt(1, 1), BigInt(2));
  const GaussianRat m(GaussianInt(1, -1), BigInt(3));
  CHECK(p * m == GaussianRat(GaussianInt(1, 0), BigInt(3)));  // (1+i)(1-i) = 2
  CHECK(div_int(half, 2) == GaussianRat(GaussianInt(1, 0), BigInt(4)));
  CHECK_THROWS_AS(div_int(half, 0), std::domain_error);
  CHECK(to_complex<double>(half) == Cx<double>(0.5, 0.0));
  CHECK(to_string(GaussianRat(GaussianInt(-3, 2), BigInt(4))) == "-3+2i/4");
  CHECK(to_string(GaussianRat(GaussianInt(5, 0))) == "5+0i");
}
