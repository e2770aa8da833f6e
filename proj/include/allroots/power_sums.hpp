#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "gaussian.hpp"
#include "poly_family.hpp"

namespace allroots {

/// @brief Power sums a_k = sum of k-th powers of all roots, k = 1..m, exact,
/// from the leading coefficients c_1..c_m of a monic polynomial via the
/// forward Newton identities: -a_k = sum_{j=1}^{k-1} c_j a_{k-j} + k c_k.
inline std::vector<GaussianInt> power_sums_from_coefficients(std::span<const GaussianInt> c) {
  const std::size_t m = c.size();
  std::vector<GaussianInt> a(m);
  for (std::size_t k = 1; k <= m; ++k) {
    GaussianInt acc = c[k - 1] * (long long)(k);
    for (std::size_t j = 1; j < k; ++j) acc = acc + c[j - 1] * a[k - 1 - j];
    a[k - 1] = -acc;
  }
  return a;
}

/// @brief Coefficients e_1..e_m of the monic polynomial whose power sums are
/// b_1..b_m, exact, via the backward Newton identities:
/// e_k = -(b_k + sum_{j=1}^{k-1} e_j b_{k-j}) / k.
inline std::vector<GaussianRat> coefficients_from_power_sums_exact(
    std::span<const GaussianInt> b) {
  const std::size_t m = b.size();
  std::vector<GaussianRat> e(m);
  for (std::size_t k = 1; k <= m; ++k) {
    GaussianRat acc{b[k - 1]};
    for (std::size_t j = 1; j < k; ++j) acc = acc + e[j - 1] * b[k - 1 - j];
    e[k - 1] = div_int(-acc, (long long)(k));
  }
  return e;
}

template <class Real>
inline Cx<Real> pow_int(Cx<Real> z, int k) {
  Cx<Real> r(Real(1));
  while (k > 0) {
    if (k & 1) r *= z;
    z *= z;
    k >>= 1;
  }
  return r;
}

enum class SumMode { Plain, Fractional };

namespace detail {

// Neumaier-compensated accumulator: the compensation picks up whichever
// addend lost bits.
template <class Real>
struct Compensated {
  Real sum{0};
  Real comp{0};

  void add(Real x) {
    Real t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  Real total() const { return sum + comp; }
};

}  // namespace detail

/// @brief Compensated plain sum of z^k over the points.
template <class Real>
inline Cx<Real> plain_power_sum(std::span<const Cx<Real>> roots, int k) {
  detail::Compensated<Real> re, im;
  for (const Cx<Real>& z : roots) {
    const Cx<Real> p = pow_int(z, k);
    re.add(p.real());
    im.add(p.imag());
  }
  return {re.total(), im.total()};
}

/// @brief Power sum split into an exact integer part and a fractional
/// remainder in (-1, 1) per component. Each term contributes its toward-zero
/// integer part to a 64-bit accumulator (exact) and its fractional part to a
/// compensated float sum that is renormalized into (-1, 1) after every add
/// (the renormalization subtracts an exact small integer). This keeps the
/// absolute error of huge sums at the fractional scale instead of the sum
/// scale.
template <class Real>
struct FractionalSum {
  std::int64_t int_re{0};
  std::int64_t int_im{0};
  Real frac_re{0};
  Real frac_im{0};

  Cx<Real> combined() const { return {Real(int_re) + frac_re, Real(int_im) + frac_im}; }
};

namespace detail {

template <class Real>
struct FractionalAccumulator {
  std::int64_t integer{0};
  Real frac{0};
  Real comp{0};

  static constexpr Real kGuard = Real(std::int64_t(1) << 62);

  void add(Real x) {
    const Real xi = std::trunc(x);
    if (std::abs(xi) >= kGuard)
      throw std::overflow_error("fractional power sum: term integer part exceeds 2^62");
    integer += std::int64_t(xi);
    const Real xf = x - xi;  // exact: same binade truncation
    Real t = frac + xf;
    comp += std::abs(frac) >= std::abs(xf) ? (frac - t) + xf : (xf - t) + frac;
    frac = t;
    const Real rn = std::trunc(frac);
    if (rn != Real(0)) {
      frac -= rn;  // exact: |frac| < 2, rn in {-1, 0, 1} almost always
      integer += std::int64_t(rn);
    }
    if (std::abs(integer) >= (std::int64_t(1) << 62))
      throw std::overflow_error("fractional power sum: accumulator exceeds 2^62");
  }

  void finish(std::int64_t& i, Real& f) {
    Real total = frac + comp;
    const Real rn = std::trunc(total);
    if (rn != Real(0)) {
      total -= rn;
      integer += std::int64_t(rn);
    }
    i = integer;
    f = total;
  }
};

}  // namespace detail

template <class Real>
inline FractionalSum<Real> fractional_power_sum(std::span<const Cx<Real>> roots, int k) {
  detail::FractionalAccumulator<Real> re, im;
  for (const Cx<Real>& z : roots) {
    const Cx<Real> p = pow_int(z, k);
    re.add(p.real());
    im.add(p.imag());
  }
  FractionalSum<Real> out;
  re.finish(out.int_re, out.frac_re);
  im.finish(out.int_im, out.frac_im);
  return out;
}

/// @brief Empirical power sum in the requested mode. Fractional mode returns
/// the combined integer-plus-fraction value; use fractional_power_sum for the
/// exact split.
template <class Real>
inline Cx<Real> empirical_power_sum(std::span<const Cx<Real>> roots, int k, SumMode mode) {
  if (mode == SumMode::Plain) return plain_power_sum(roots, k);
  return fractional_power_sum(roots, k).combined();
}

/// @brief A-posteriori verification report: theoretical vs empirical power
/// sums, the residuals r_k = |a_k - sum z^k| computed through the fractional
/// split (exact integer difference, so the residual is meaningful even when
/// a_k dwarfs the native range), and the per-root error estimate
/// delta = r_1 / sqrt(degree).
template <class Real>
struct PowerSumReport {
  int m{0};
  std::int64_t degree{0};
  std::int64_t count_deficit{0};
  std::vector<GaussianInt> theoretical;
  std::vector<Cx<Real>> empirical;
  std::vector<Real> residuals;
  std::vector<bool> integer_part_consistent;
  Real delta_estimate{0};

  Real max_residual() const {
    Real r = 0;
    for (Real x : residuals) r = std::max(r, x);
    return r;
  }
};

namespace detail {

inline bool rounds_to(const GaussianInt& target, double re, double im) {
  // Valid only while the plain sum fits comfortably in the 2^62 window.
  if (!(std::abs(re) < 0x1p62) || !(std::abs(im) < 0x1p62)) return false;
  return GaussianInt(std::llround(re), std::llround(im)) == target;
}

}  // namespace detail

/// @brief Verify a root set against the exact power sums of its family. The
/// root count may fall short of the degree; the report carries the deficit
/// and the residuals then reflect the missing mass.
template <class Real>
inline PowerSumReport<Real> verify_roots(const PolyFamily& fam, std::span<const Cx<Real>> roots,
                                         int m) {
  PowerSumReport<Real> rep;
  rep.m = m;
  rep.degree = fam.degree;
  rep.count_deficit = fam.degree - std::int64_t(roots.size());
  const std::vector<GaussianInt> c = top_coefficients(fam, m);
  rep.theoretical = power_sums_from_coefficients(std::span<const GaussianInt>(c).subspan(1));
  rep.empirical.resize(std::size_t(m));
  rep.residuals.resize(std::size_t(m));
  rep.integer_part_consistent.resize(std::size_t(m));
  for (int k = 1; k <= m; ++k) {
    const FractionalSum<Real> fs = fractional_power_sum(roots, k);
    const GaussianInt& a = rep.theoretical[std::size_t(k - 1)];
    const GaussianInt idiff = a - GaussianInt(fs.int_re, fs.int_im);
    const Real rre = idiff.re.template convert_to<Real>() - fs.frac_re;
    const Real rim = idiff.im.template convert_to<Real>() - fs.frac_im;
    rep.residuals[std::size_t(k - 1)] = std::hypot(rre, rim);
    rep.empirical[std::size_t(k - 1)] = fs.combined();
    const Cx<Real> plain = plain_power_sum(roots, k);
    rep.integer_part_consistent[std::size_t(k - 1)] =
        detail::rounds_to(a, double(plain.real()), double(plain.imag()));
  }
  rep.delta_estimate = rep.residuals[0] / std::sqrt(Real(fam.degree));
  return rep;
}

/// @brief Least-squares slope of log(r_k) against k, flooring residuals at
/// `floor_at` so exact zeros do not blow up the fit. Diagnostic for the
/// expected geometric residual growth.
template <class Real>
inline double residual_growth_slope(std::span<const Real> residuals, Real floor_at = Real(1e-22)) {
  const std::size_t n = residuals.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = double(i + 1);
    const double y = std::log(double(std::max(residuals[i], floor_at)));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = double(n) * sxx - sx * sx;
  return denom == 0 ? 0.0 : (double(n) * sxy - sx * sy) / denom;
}

}  // namespace allroots
