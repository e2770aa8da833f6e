#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "gaussian.hpp"
#include "scaled_complex.hpp"

namespace allroots {

enum class FamilyKind { MandelbrotCenters, PeriodicPoints };

/// @brief A recursively evaluated polynomial family: hyperbolic-component
/// centers of the Mandelbrot set (p_{k+1} = p_k^2 + c in the variable c,
/// degree 2^(n-1)) or periodic points of z^2 + c for a fixed Gaussian-integer
/// c (degree 2^n).
struct PolyFamily {
  FamilyKind kind{FamilyKind::PeriodicPoints};
  int c_re{0};
  int c_im{0};
  int period{1};
  std::int64_t degree{1};
  double root_bound{2.0};

  static constexpr int kMaxPeriod = 40;

  static PolyFamily mandelbrot_centers(int n) {
    check_period(n);
    return {FamilyKind::MandelbrotCenters, 0, 0, n, std::int64_t(1) << (n - 1), 2.0};
  }

  /// @brief Periodic points of z^2 + c, generic escape-radius root bound.
  static PolyFamily periodic_points(int c_re, int c_im, int n) {
    check_period(n);
    double cmag = std::hypot(double(c_re), double(c_im));
    double bound = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * cmag));
    return {FamilyKind::PeriodicPoints, c_re, c_im, n, std::int64_t(1) << n, bound};
  }

  /// @brief Periodic points of z^2 + 2 with its sharper root bound.
  static PolyFamily per2(int n) {
    PolyFamily f = periodic_points(2, 0, n);
    f.root_bound = 1.74;
    return f;
  }

  /// @brief Periodic points of z^2 + i with its sharper root bound.
  static PolyFamily peri(int n) {
    PolyFamily f = periodic_points(0, 1, n);
    f.root_bound = 1.48;
    return f;
  }

 private:
  static void check_period(int n) {
    if (n < 1 || n > kMaxPeriod)
      throw std::invalid_argument("family period must be in [1, " +
                                  std::to_string(kMaxPeriod) + "]");
  }
};

/// @brief Radius for seeding starting points: a factor > 1 applied to the
/// family's root bound so every root lies strictly inside.
inline double starting_radius(const PolyFamily& fam, double factor) {
  if (!(factor > 1.0))
    throw std::invalid_argument("starting radius factor must exceed 1");
  return factor * fam.root_bound;
}

template <class Real>
struct EvalResult {
  ScaledComplex<Real> p;
  ScaledComplex<Real> dp;
};

/// @brief Evaluate p and p' at z by the defining recursion in scaled
/// arithmetic. Cost O(period) scaled operations; intermediate magnitudes may
/// exceed any native exponent range.
template <class Real>
inline EvalResult<Real> eval(const PolyFamily& fam, const Cx<Real>& z) {
  if (fam.kind == FamilyKind::MandelbrotCenters) {
    // p_0 = 0; per level p' <- 2 p p' + 1, p <- p^2 + c with c the variable.
    const ScaledComplex<Real> c(z);
    const ScaledComplex<Real> one = sc_one<Real>();
    ScaledComplex<Real> p, dp;
    for (int k = 0; k < fam.period; ++k) {
      dp = sc_add(sc_double(sc_mul(p, dp)), one);
      p = sc_add(sc_sqr(p), c);
    }
    return {p, dp};
  }
  // w_0 = z, w_0' = 1; per level w' <- 2 w w', w <- w^2 + c; then
  // p = w_n - z, p' = w_n' - 1.
  const ScaledComplex<Real> c(Cx<Real>(Real(fam.c_re), Real(fam.c_im)));
  const ScaledComplex<Real> zs(z);
  ScaledComplex<Real> w = zs;
  ScaledComplex<Real> dw = sc_one<Real>();
  for (int k = 0; k < fam.period; ++k) {
    dw = sc_double(sc_mul(w, dw));
    w = sc_add(sc_sqr(w), c);
  }
  return {sc_sub(w, zs), sc_sub(dw, sc_one<Real>())};
}

/// @brief Exact leading coefficients c_0 .. c_m (c_0 = 1) by truncated
/// squaring of the (m+1)-prefix per recursion level: O(m^2 log degree)
/// Gaussian-integer multiplies, never the full coefficient vector.
inline std::vector<GaussianInt> top_coefficients(const PolyFamily& fam, std::int64_t m) {
  if (m < 1 || m > fam.degree)
    throw std::invalid_argument("coefficient prefix length must be in [1, degree]");

  // prefix[j] = coefficient of x^(D-j) of the current level, D its degree.
  std::int64_t D = 1;
  const int steps = fam.kind == FamilyKind::MandelbrotCenters ? fam.period - 1 : fam.period;
  std::vector<GaussianInt> t(std::size_t(std::min(D, m)) + 1);
  t[0] = GaussianInt(1, 0);

  const GaussianInt cpar(fam.c_re, fam.c_im);
  for (int s = 0; s < steps; ++s) {
    const std::int64_t D2 = 2 * D;
    const std::size_t inLen = t.size();
    const std::size_t outLen = std::size_t(std::min(D2, m)) + 1;
    std::vector<GaussianInt> u(outLen);
    for (std::size_t k = 0; k < outLen; ++k) {
      GaussianInt acc(0, 0);
      const std::size_t iMax = std::min(k / 2, inLen - 1);
      const std::size_t iMin = k >= inLen ? k - (inLen - 1) : 0;
      for (std::size_t i = iMin; i <= iMax; ++i) {
        const std::size_t j = k - i;
        if (j >= inLen) continue;
        GaussianInt prod = t[i] * t[j];
        acc = i == j ? acc + prod : acc + prod + prod;
      }
      u[k] = acc;
    }
    if (fam.kind == FamilyKind::MandelbrotCenters) {
      // "+ c" adds the monomial c: coefficient 1 at prefix index D2 - 1.
      if (D2 - 1 < std::int64_t(outLen)) {
        auto& slot = u[std::size_t(D2 - 1)];
        slot = slot + GaussianInt(1, 0);
      }
    } else {
      // "+ c" adds the constant: prefix index D2.
      if (D2 < std::int64_t(outLen)) {
        auto& slot = u[std::size_t(D2)];
        slot = slot + cpar;
      }
    }
    t = std::move(u);
    D = D2;
  }
  if (fam.kind == FamilyKind::PeriodicPoints) {
    // Final "- z": prefix index degree - 1.
    if (fam.degree - 1 <= m) {
      auto& slot = t[std::size_t(fam.degree - 1)];
      slot = slot - GaussianInt(1, 0);
    }
  }
  return t;
}

}  // namespace allroots
