#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <type_traits>

namespace allroots {

template <class Real>
using Cx = std::complex<Real>;

/// @brief Next precision tier up, used for late-stage displacement re-evaluation.
/// void when the tier is already the highest available.
template <class Real>
struct PromotedReal {
  using type = void;
};
template <>
struct PromotedReal<float> {
  using type = double;
};
template <>
struct PromotedReal<double> {
  using type = long double;
};

template <class Real>
using promoted_real_t = typename PromotedReal<Real>::type;

template <class Real>
inline constexpr bool has_promoted_real = !std::is_void_v<promoted_real_t<Real>>;

/// @brief True for scalars with a 64-bit (or wider) mantissa: the extended tier.
template <class Real>
constexpr bool extended_tier() {
  return std::numeric_limits<Real>::digits >= 60;
}

// Tolerance defaults scale with the tier. The extended tier stops orbits at
// 1e-15 and deduplicates roots at 1e-14; the 53-bit tier relaxes both so that
// converged points still cluster well inside the dedup radius.
template <class Real>
constexpr Real default_eps_stop() {
  return extended_tier<Real>() ? Real(1e-15L) : Real(1e-13);
}
template <class Real>
constexpr Real default_eps_root() {
  return extended_tier<Real>() ? Real(1e-14L) : Real(1e-12);
}
template <class Real>
constexpr Real default_eps_cycle() {
  return Real(1000) * default_eps_stop<Real>();
}

template <class To, class From>
inline Cx<To> cx_cast(const Cx<From>& z) {
  return Cx<To>(static_cast<To>(z.real()), static_cast<To>(z.imag()));
}

/// @brief Thrown by the Newton step when p'(z) is exactly zero.
class critical_point_error : public std::domain_error {
 public:
  critical_point_error() : std::domain_error("newton step at a critical point: p'(z) = 0") {}
};

/// @brief Thrown by the deflated logarithmic derivative when z coincides with
/// a found root.
class pole_error : public std::domain_error {
 public:
  pole_error() : std::domain_error("deflated logarithmic derivative at a found root") {}
};

/// @brief Thrown by text readers on malformed input; carries the line number.
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& what, std::size_t line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace allroots
