#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <utility>

#include "common.hpp"

namespace allroots {

using BigInt = boost::multiprecision::cpp_int;

/// @brief Exact Gaussian integer: the domain of leading coefficients and
/// theoretical power sums.
struct GaussianInt {
  BigInt re{0};
  BigInt im{0};

  GaussianInt() = default;
  GaussianInt(BigInt r, BigInt i) : re(std::move(r)), im(std::move(i)) {}
  GaussianInt(long long r, long long i) : re(r), im(i) {}

  bool is_zero() const { return re.is_zero() && im.is_zero(); }

  friend bool operator==(const GaussianInt& a, const GaussianInt& b) {
    return a.re == b.re && a.im == b.im;
  }
};

inline GaussianInt operator+(const GaussianInt& a, const GaussianInt& b) {
  return {a.re + b.re, a.im + b.im};
}
inline GaussianInt operator-(const GaussianInt& a, const GaussianInt& b) {
  return {a.re - b.re, a.im - b.im};
}
inline GaussianInt operator-(const GaussianInt& a) { return {-a.re, -a.im}; }
inline GaussianInt operator*(const GaussianInt& a, const GaussianInt& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline GaussianInt operator*(const GaussianInt& a, long long k) { return {a.re * k, a.im * k}; }
inline GaussianInt conj(const GaussianInt& a) { return {a.re, -a.im}; }

/// @brief Canonical decimal text "a+bi" / "a-bi"; both components always
/// present, arbitrary precision.
inline std::string to_string(const GaussianInt& g) {
  std::string s = g.re.str();
  if (g.im.sign() >= 0) s += '+';
  s += g.im.str();
  s += 'i';
  return s;
}

/// @brief Parse the canonical "a+bi" form back; inverse of to_string.
inline GaussianInt gaussian_from_string(const std::string& s) {
  if (s.empty() || s.back() != 'i')
    throw std::invalid_argument("gaussian integer text must end in 'i': " + s);
  // Split at the sign that starts the imaginary component; skip position 0
  // (sign of the real component).
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size() - 1; i > 0; --i) {
    if (s[i] == '+' || s[i] == '-') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos)
    throw std::invalid_argument("gaussian integer text lacks an imaginary component: " + s);
  GaussianInt g;
  g.re = BigInt(s.substr(0, split));
  g.im = BigInt(s.substr(split, s.size() - 1 - split));
  return g;
}

template <class Real>
inline Cx<Real> to_complex(const GaussianInt& g) {
  return {g.re.template convert_to<Real>(), g.im.template convert_to<Real>()};
}

/// @brief Magnitude squared as an exact integer.
inline BigInt norm(const GaussianInt& g) { return g.re * g.re + g.im * g.im; }

/// @brief Exact Gaussian rational: Gaussian-integer numerator over a positive
/// integer denominator. Value-based equality; kept reduced.
struct GaussianRat {
  GaussianInt num;
  BigInt den{1};

  GaussianRat() = default;
  GaussianRat(GaussianInt n, BigInt d) : num(std::move(n)), den(std::move(d)) {
    if (den.is_zero()) throw std::domain_error("gaussian rational: zero denominator");
    if (den.sign() < 0) {
      den = -den;
      num = -num;
    }
    reduce();
  }
  explicit GaussianRat(GaussianInt n) : num(std::move(n)) {}

  bool is_zero() const { return num.is_zero(); }
  bool is_integer() const { return den == 1; }

  void reduce() {
    using boost::multiprecision::gcd;
    if (num.is_zero()) {
      den = 1;
      return;
    }
    BigInt g = gcd(gcd(abs(num.re), abs(num.im)), den);
    if (g > 1) {
      num.re /= g;
      num.im /= g;
      den /= g;
    }
  }

  friend bool operator==(const GaussianRat& a, const GaussianRat& b) {
    return a.num.re * b.den == b.num.re * a.den && a.num.im * b.den == b.num.im * a.den;
  }
};

inline GaussianRat operator+(const GaussianRat& a, const GaussianRat& b) {
  return {{a.num.re * b.den + b.num.re * a.den, a.num.im * b.den + b.num.im * a.den},
          a.den * b.den};
}
inline GaussianRat operator-(const GaussianRat& a) { return GaussianRat{-a.num, a.den}; }
inline GaussianRat operator-(const GaussianRat& a, const GaussianRat& b) { return a + (-b); }
inline GaussianRat operator*(const GaussianRat& a, const GaussianRat& b) {
  return {a.num * b.num, a.den * b.den};
}
inline GaussianRat operator*(const GaussianRat& a, const GaussianInt& k) {
  return {a.num * k, a.den};
}

/// @brief Exact division by a nonzero rational integer.
inline GaussianRat div_int(const GaussianRat& a, long long k) {
  if (k == 0) throw std::domain_error("gaussian rational: division by zero");
  return {a.num, a.den * k};
}

template <class Real>
inline Cx<Real> to_complex(const GaussianRat& q) {
  Real d = q.den.convert_to<Real>();
  return {q.num.re.convert_to<Real>() / d, q.num.im.convert_to<Real>() / d};
}

inline std::string to_string(const GaussianRat& q) {
  std::string s = to_string(q.num);
  if (!q.is_integer()) s += "/" + q.den.str();
  return s;
}

}  // namespace allroots
