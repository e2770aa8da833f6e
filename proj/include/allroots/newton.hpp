#pragma once

#include <cstdint>
#include <optional>

#include "poly_family.hpp"

namespace allroots {

enum class OrbitStatus : std::uint8_t { Running, Converged, CycleTrapped, Exhausted, Failed };

inline const char* to_string(OrbitStatus s) {
  switch (s) {
    case OrbitStatus::Running: return "Running";
    case OrbitStatus::Converged: return "Converged";
    case OrbitStatus::CycleTrapped: return "CycleTrapped";
    case OrbitStatus::Exhausted: return "Exhausted";
    case OrbitStatus::Failed: return "Failed";
  }
  return "?";
}

/// @brief One Newton orbit: current point, bookkeeping for refinement
/// triggers (baseline cross-ratio, generation) and for cycle detection
/// (sentinel snapshot at power-of-two iteration counts).
template <class Real>
struct Orbit {
  Cx<Real> z{};
  Cx<Real> last_displacement{};
  std::int64_t iterations{0};
  int generation{0};
  std::optional<Cx<Real>> baseline_cross_ratio{};
  OrbitStatus status{OrbitStatus::Running};
  Cx<Real> sentinel{};
  std::int64_t sentinel_iteration{-1};
  std::int64_t cycle_period{0};
  std::uint32_t id{0};
};

template <class Real>
struct EngineConfig {
  Real eps_stop = default_eps_stop<Real>();
  Real eps_cycle = default_eps_cycle<Real>();
  /// Displacements below this are re-evaluated in the next precision tier up
  /// (when one exists) before the convergence test.
  Real high_precision_threshold = Real(1e-13);
  /// Per-orbit iteration budget as a multiple of the degree.
  double max_iter_factor = 10.0;
  /// Magnitude cap for collapsed scaled ratios.
  Real ratio_saturation = Real(1e30);
  bool promote = true;

  std::int64_t max_iterations(std::int64_t degree) const {
    return std::int64_t(max_iter_factor * double(degree));
  }

  void validate() const {
    if (!(eps_stop > Real(0)) || !(eps_cycle >= eps_stop) || !(max_iter_factor > 0) ||
        !(ratio_saturation > Real(1)))
      throw std::invalid_argument(
          "engine config: need eps_stop > 0, eps_cycle >= eps_stop, "
          "max_iter_factor > 0, ratio_saturation > 1");
  }
};

template <class Real>
struct NewtonStep {
  Cx<Real> z_next{};
  Cx<Real> displacement{};
};

/// @brief One Newton step z - p(z)/p'(z) via the scaled ratio. Throws
/// critical_point_error when p'(z) is exactly zero.
template <class Real>
inline NewtonStep<Real> newton_step(const PolyFamily& fam, const Cx<Real>& z,
                                    Real saturation = Real(1e30)) {
  EvalResult<Real> ev = eval(fam, z);
  if (ev.dp.is_zero()) throw critical_point_error();
  Cx<Real> disp = sc_ratio(ev.p, ev.dp, saturation);
  return {z - disp, disp};
}

/// @brief Advance a Running orbit by one Newton iteration and settle its
/// status: Converged below eps_stop, CycleTrapped when the point returns to
/// the sentinel while still displacing, Exhausted past the iteration budget,
/// Failed after a critical-point retry also lands on a critical point.
///
/// Convergence is tested before the cycle test, so a point that happens to
/// near-revisit the sentinel on its way into a root is never mislabeled.
template <class Real>
inline Orbit<Real> advance(Orbit<Real> o, const PolyFamily& fam, const EngineConfig<Real>& cfg) {
  NewtonStep<Real> st;
  try {
    st = newton_step(fam, o.z, cfg.ratio_saturation);
  } catch (const critical_point_error&) {
    Cx<Real> nudged = o.z + cfg.eps_stop * Cx<Real>(Real(1), Real(1));
    try {
      st = newton_step(fam, nudged, cfg.ratio_saturation);
    } catch (const critical_point_error&) {
      o.status = OrbitStatus::Failed;
      return o;
    }
  }

  if constexpr (has_promoted_real<Real>) {
    if (cfg.promote && std::abs(st.displacement) < cfg.high_precision_threshold) {
      using P = promoted_real_t<Real>;
      const Cx<P> zp = cx_cast<P>(o.z);
      EvalResult<P> ev = eval(fam, zp);
      if (!ev.dp.is_zero()) {
        Cx<P> disp = sc_ratio(ev.p, ev.dp, P(cfg.ratio_saturation));
        st.displacement = cx_cast<Real>(disp);
        st.z_next = cx_cast<Real>(zp - disp);
      }
    }
  }

  o.z = st.z_next;
  o.last_displacement = st.displacement;
  ++o.iterations;

  if (std::abs(st.displacement) < cfg.eps_stop) {
    o.status = OrbitStatus::Converged;
    return o;
  }
  if (o.sentinel_iteration >= 0 && o.iterations - o.sentinel_iteration >= 2 &&
      std::abs(o.z - o.sentinel) < cfg.eps_cycle) {
    o.status = OrbitStatus::CycleTrapped;
    o.cycle_period = o.iterations - o.sentinel_iteration;
    return o;
  }
  if (o.iterations >= cfg.max_iterations(fam.degree)) {
    o.status = OrbitStatus::Exhausted;
    return o;
  }
  if ((o.iterations & (o.iterations - 1)) == 0) {
    // Power-of-two checkpoint: move the sentinel here.
    o.sentinel = o.z;
    o.sentinel_iteration = o.iterations;
  }
  return o;
}

}  // namespace allroots
