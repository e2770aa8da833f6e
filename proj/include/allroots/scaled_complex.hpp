#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

#include "common.hpp"

namespace allroots {

// Exponent budget for the scaled representation. Stored exponents stay within
// +-kScExpLimit; operations that would leave the window throw instead of
// wrapping.
inline constexpr std::int64_t kScExpLimit = std::int64_t(1) << 62;

namespace detail {

inline std::int64_t checked_exp(__int128 e) {
  if (e > kScExpLimit || e < -kScExpLimit)
    throw std::overflow_error("scaled complex: exponent range exhausted");
  return static_cast<std::int64_t>(e);
}

// Table of 2^-i for mantissa alignment in adds; exact powers of two.
template <class Real>
inline const Real* pow2_neg_table() {
  static const std::array<Real, 96> table = [] {
    std::array<Real, 96> t{};
    for (int i = 0; i < 96; ++i) t[std::size_t(i)] = std::ldexp(Real(1), -i);
    return t;
  }();
  return table.data();
}

}  // namespace detail

/// @brief Complex value mantissa * 2^exp2 with the mantissa held near unit
/// magnitude, so recursive polynomial evaluation survives magnitudes far
/// beyond the native exponent range.
///
/// Invariant: |mantissa|^2 in [0.25, 4), or mantissa == 0 with exp2 == 0.
template <class Real>
struct ScaledComplex {
  Real re{0};
  Real im{0};
  std::int64_t exp2{0};

  constexpr ScaledComplex() = default;
  ScaledComplex(Real r, Real i, std::int64_t e) : re(r), im(i), exp2(e) { normalize(); }
  explicit ScaledComplex(const Cx<Real>& z) : re(z.real()), im(z.imag()), exp2(0) { normalize(); }

  bool is_zero() const { return re == Real(0) && im == Real(0); }

  /// @brief Approximate native value; saturates to +-inf past the native
  /// exponent range. Diagnostic use only.
  Cx<Real> value() const {
    if (is_zero()) return {};
    int shift = int(std::clamp<std::int64_t>(exp2, -100000, 100000));
    return {std::ldexp(re, shift), std::ldexp(im, shift)};
  }

  /// @brief Restore the mantissa window after an arithmetic step. Stays on a
  /// short multiply loop for the couple of steps an add or multiply can
  /// drift; falls back to an ilogb jump for fresh conversions, deep
  /// cancellation, or component overflow.
  void normalize() {
    if (re == Real(0) && im == Real(0)) {
      exp2 = 0;
      return;
    }
    Real m2 = re * re + im * im;
    if (m2 >= Real(0.25) && m2 < Real(4)) return;
    if (m2 >= Real(4) && m2 < Real(1024)) {
      do {
        re *= Real(0.5);
        im *= Real(0.5);
        m2 *= Real(0.25);
        ++exp2;
      } while (m2 >= Real(4));
    } else if (m2 >= Real(0x1p-24) && m2 < Real(0.25)) {
      do {
        re *= Real(2);
        im *= Real(2);
        m2 *= Real(4);
        --exp2;
      } while (m2 < Real(0.25));
    } else {
      // ilogb handles subnormal components and components whose squares
      // overflow or underflow the native range.
      int k = std::ilogb(std::max(std::abs(re), std::abs(im))) + 1;
      re = std::ldexp(re, -k);
      im = std::ldexp(im, -k);
      exp2 += k;  // max component now in [0.5, 1): |m|^2 in [0.25, 2)
    }
    if (exp2 > kScExpLimit || exp2 < -kScExpLimit)
      throw std::overflow_error("scaled complex: exponent range exhausted");
  }

  friend bool operator==(const ScaledComplex&, const ScaledComplex&) = default;
};

template <class Real>
inline ScaledComplex<Real> sc_one() {
  ScaledComplex<Real> r;
  r.re = Real(1);
  return r;
}

template <class Real>
inline ScaledComplex<Real> sc_neg(ScaledComplex<Real> a) {
  a.re = -a.re;
  a.im = -a.im;
  return a;
}

/// @brief Exact doubling: bumps the exponent, no mantissa rounding.
template <class Real>
inline ScaledComplex<Real> sc_double(ScaledComplex<Real> a) {
  if (a.is_zero()) return a;
  a.exp2 = detail::checked_exp(__int128(a.exp2) + 1);
  return a;
}

template <class Real>
inline ScaledComplex<Real> sc_mul(const ScaledComplex<Real>& a, const ScaledComplex<Real>& b) {
  if (a.is_zero() || b.is_zero()) return {};
  ScaledComplex<Real> r;
  r.re = a.re * b.re - a.im * b.im;
  r.im = a.re * b.im + a.im * b.re;
  r.exp2 = detail::checked_exp(__int128(a.exp2) + b.exp2);
  r.normalize();
  return r;
}

/// @brief Squaring with one fewer mantissa multiply than sc_mul(a, a).
template <class Real>
inline ScaledComplex<Real> sc_sqr(const ScaledComplex<Real>& a) {
  if (a.is_zero()) return {};
  ScaledComplex<Real> r;
  r.re = (a.re - a.im) * (a.re + a.im);
  r.im = Real(2) * a.re * a.im;
  r.exp2 = detail::checked_exp(__int128(a.exp2) * 2);
  r.normalize();
  return r;
}

/// @brief Exponent-aligned add. When the exponent gap exceeds the mantissa
/// width plus guard bits the smaller operand cannot perturb the larger one
/// and the larger operand is returned unchanged.
template <class Real>
inline ScaledComplex<Real> sc_add(const ScaledComplex<Real>& a, const ScaledComplex<Real>& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const ScaledComplex<Real>* hi = &a;
  const ScaledComplex<Real>* lo = &b;
  if (a.exp2 < b.exp2) {
    hi = &b;
    lo = &a;
  }
  __int128 gap = __int128(hi->exp2) - lo->exp2;
  constexpr int kKeep = std::numeric_limits<Real>::digits + 3;
  if (gap > kKeep) return *hi;
  Real scale = detail::pow2_neg_table<Real>()[std::size_t(gap)];
  ScaledComplex<Real> r;
  r.re = hi->re + lo->re * scale;
  r.im = hi->im + lo->im * scale;
  r.exp2 = hi->exp2;
  r.normalize();
  return r;
}

template <class Real>
inline ScaledComplex<Real> sc_sub(const ScaledComplex<Real>& a, const ScaledComplex<Real>& b) {
  return sc_add(a, sc_neg(b));
}

/// @brief Collapse a quotient of scaled values to a native complex. Throws
/// std::domain_error when b == 0. Saturates to `saturation` magnitude when
/// the quotient exceeds the native exponent range, and flushes to zero when
/// it underflows it.
template <class Real>
inline Cx<Real> sc_ratio(const ScaledComplex<Real>& a, const ScaledComplex<Real>& b,
                         Real saturation = Real(1e30)) {
  if (b.is_zero()) throw std::domain_error("scaled complex ratio: division by zero");
  if (a.is_zero()) return {};
  Real den = b.re * b.re + b.im * b.im;
  Real qre = (a.re * b.re + a.im * b.im) / den;
  Real qim = (a.im * b.re - a.re * b.im) / den;
  __int128 s = __int128(a.exp2) - b.exp2;
  constexpr int kMaxShift = std::numeric_limits<Real>::max_exponent - 8;
  if (s > kMaxShift) {
    Real mag = std::hypot(qre, qim);
    return {qre / mag * saturation, qim / mag * saturation};
  }
  if (s < -kMaxShift) return {};
  return {std::ldexp(qre, int(s)), std::ldexp(qim, int(s))};
}

}  // namespace allroots
