#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "newton.hpp"
#include "power_sums.hpp"
#include "root_set.hpp"

namespace allroots {

/// @brief Dense monic polynomial, coeff[j] multiplying z^(degree-j),
/// coeff[0] == 1. Degrees here stay tiny (the missing-root count), so native
/// complex arithmetic suffices.
template <class Real>
struct DensePoly {
  std::vector<Cx<Real>> coeff;

  int degree() const { return int(coeff.size()) - 1; }
};

template <class Real>
inline std::pair<Cx<Real>, Cx<Real>> eval_dense(const DensePoly<Real>& q, const Cx<Real>& z) {
  Cx<Real> p = q.coeff.empty() ? Cx<Real>(Real(1)) : q.coeff[0];
  Cx<Real> dp{};
  for (std::size_t j = 1; j < q.coeff.size(); ++j) {
    dp = dp * z + p;
    p = p * z + q.coeff[j];
  }
  return {p, dp};
}

/// @brief Backward Newton identities in floating point: the monic polynomial
/// whose power sums are b_1..b_m.
template <class Real>
inline DensePoly<Real> coefficients_from_power_sums(std::span<const Cx<Real>> b) {
  const std::size_t m = b.size();
  DensePoly<Real> q;
  q.coeff.assign(m + 1, Cx<Real>{});
  q.coeff[0] = Cx<Real>(Real(1));
  for (std::size_t k = 1; k <= m; ++k) {
    Cx<Real> acc = b[k - 1];
    for (std::size_t j = 1; j < k; ++j) acc += q.coeff[j] * b[k - 1 - j];
    q.coeff[k] = -acc / Real(k);
  }
  return q;
}

/// @brief Power sums of the missing roots: b_k = a_k - sum over found roots
/// of z^k, k = 1..|a|. The found-root sum enters through its exact integer /
/// fractional split, so the big cancellation against a_k happens in exact
/// integer arithmetic and the result keeps absolute accuracy at the
/// fractional scale.
template <class Real>
inline std::vector<Cx<Real>> missing_power_sums(std::span<const GaussianInt> a,
                                                std::span<const Cx<Real>> found) {
  std::vector<Cx<Real>> b(a.size());
  for (std::size_t k = 1; k <= a.size(); ++k) {
    const FractionalSum<Real> fs = fractional_power_sum(found, int(k));
    const GaussianInt idiff = a[k - 1] - GaussianInt(fs.int_re, fs.int_im);
    b[k - 1] = Cx<Real>(idiff.re.template convert_to<Real>() - fs.frac_re,
                        idiff.im.template convert_to<Real>() - fs.frac_im);
  }
  return b;
}

namespace detail {

// Generic Ehrlich-Aberth Jacobi sweep: every non-frozen coordinate moves by
// 1 / (p'/p - sum_{i != j} 1/(z_j - z_i)) computed from the previous sweep's
// coordinates. `logderiv` returns p'(z)/p(z), or nullopt when p(z) == 0
// (the coordinate already sits on a root and stays put).
template <class Real, class LogDeriv>
inline std::vector<Cx<Real>> ea_sweep_impl(LogDeriv&& logderiv,
                                           const std::vector<Cx<Real>>& approx,
                                           const std::vector<bool>& frozen, Real nudge) {
  std::vector<Cx<Real>> out = approx;
  const std::size_t n = approx.size();
  for (std::size_t j = 0; j < n; ++j) {
    if (frozen[j]) continue;
    Cx<Real> z = approx[j];
    for (int attempt = 0; attempt < 2; ++attempt) {
      bool coincident = false;
      for (std::size_t i = 0; i < n && !coincident; ++i)
        coincident = i != j && approx[i] == z;
      if (!coincident) break;
      z += nudge * Cx<Real>(Real(1), Real(1));
    }
    Compensated<Real> sre, sim;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) continue;
      const Cx<Real> d = z - approx[i];
      if (d == Cx<Real>{}) continue;  // unresolved coincidence after nudging
      const Cx<Real> inv = Real(1) / d;
      sre.add(inv.real());
      sim.add(inv.imag());
    }
    const std::optional<Cx<Real>> ld = logderiv(z);
    if (!ld) {
      out[j] = z;
      continue;
    }
    const Cx<Real> w = *ld - Cx<Real>(sre.total(), sim.total());
    out[j] = w == Cx<Real>{} ? z : z - Real(1) / w;
  }
  return out;
}

}  // namespace detail

/// @brief One Ehrlich-Aberth sweep against a recursive family. Frozen
/// coordinates (the already-found roots) only contribute their repulsion
/// terms. O(|approx|) per non-frozen coordinate.
template <class Real>
inline std::vector<Cx<Real>> ehrlich_aberth_sweep(const PolyFamily& fam,
                                                  const std::vector<Cx<Real>>& approx,
                                                  const std::vector<bool>& frozen,
                                                  const EngineConfig<Real>& ecfg) {
  return detail::ea_sweep_impl(
      [&](const Cx<Real>& z) -> std::optional<Cx<Real>> {
        const EvalResult<Real> ev = eval(fam, z);
        if (ev.p.is_zero()) return std::nullopt;
        return sc_ratio(ev.dp, ev.p, ecfg.ratio_saturation);
      },
      approx, frozen, ecfg.eps_stop);
}

/// @brief One Ehrlich-Aberth sweep against a dense polynomial.
template <class Real>
inline std::vector<Cx<Real>> ehrlich_aberth_sweep(const DensePoly<Real>& q,
                                                  const std::vector<Cx<Real>>& approx,
                                                  const std::vector<bool>& frozen, Real nudge) {
  return detail::ea_sweep_impl(
      [&](const Cx<Real>& z) -> std::optional<Cx<Real>> {
        const auto [p, dp] = eval_dense(q, z);
        if (p == Cx<Real>{}) return std::nullopt;
        return dp / p;
      },
      approx, frozen, nudge);
}

template <class Real>
struct DenseSolveResult {
  std::vector<Cx<Real>> roots;
  bool converged{false};
  int sweeps{0};
};

/// @brief All roots of a dense monic polynomial by Ehrlich-Aberth iteration
/// from a circle enclosing the root disk, with a phase offset so starts avoid
/// symmetry traps (e.g. real-axis starts for z^2 + 1). Non-convergence after
/// `max_sweeps` returns converged == false with the best approximations.
template <class Real>
inline DenseSolveResult<Real> solve_dense(const DensePoly<Real>& q, Real eps_stop,
                                          int max_sweeps = 200) {
  DenseSolveResult<Real> out;
  const int m = q.degree();
  if (m <= 0) {
    out.converged = true;
    return out;
  }
  Real radius = Real(1);
  for (int k = 1; k <= m; ++k) {
    const Real ck = std::abs(q.coeff[std::size_t(k)]);
    if (ck > Real(0)) radius = std::max(radius, Real(1) + std::pow(ck, Real(1) / Real(k)));
  }
  const Real tau = 2 * std::numbers::pi_v<Real>;
  std::vector<Cx<Real>> approx(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    const Real angle = tau * (Real(j) + Real(0.37L)) / Real(m);
    approx[std::size_t(j)] = radius * Cx<Real>(std::cos(angle), std::sin(angle));
  }
  const std::vector<bool> frozen(std::size_t(m), false);
  const Real nudge = std::max(eps_stop, std::numeric_limits<Real>::epsilon());
  while (out.sweeps < max_sweeps) {
    std::vector<Cx<Real>> next = ehrlich_aberth_sweep(q, approx, frozen, nudge);
    Real move = 0;
    for (std::size_t j = 0; j < approx.size(); ++j)
      move = std::max(move, std::abs(next[j] - approx[j]));
    approx = std::move(next);
    ++out.sweeps;
    if (move < eps_stop) {
      out.converged = true;
      break;
    }
  }
  out.roots = std::move(approx);
  return out;
}

/// @brief Logarithmic derivative of the implicitly deflated polynomial
/// q = p / prod (z - alpha_i): q'/q = p'/p - sum 1/(z - alpha_i). Throws
/// pole_error when z sits within 10 eps of a found root; an exact root of p
/// not among the found ones collapses the ratio to the saturation magnitude,
/// which downstream Newton reads as convergence.
template <class Real>
inline Cx<Real> deflated_log_derivative(const PolyFamily& fam, const Cx<Real>& z,
                                        std::span<const Cx<Real>> found,
                                        Real saturation = Real(1e30)) {
  const Real guard =
      Real(10) * std::numeric_limits<Real>::epsilon() * (Real(1) + std::abs(z));
  detail::Compensated<Real> sre, sim;
  for (const Cx<Real>& alpha : found) {
    const Cx<Real> d = z - alpha;
    if (std::abs(d) < guard) throw pole_error();
    const Cx<Real> inv = Real(1) / d;
    sre.add(inv.real());
    sim.add(inv.imag());
  }
  const EvalResult<Real> ev = eval(fam, z);
  const Cx<Real> ratio =
      ev.p.is_zero() ? Cx<Real>(saturation, Real(0)) : sc_ratio(ev.dp, ev.p, saturation);
  return ratio - Cx<Real>(sre.total(), sim.total());
}

/// @brief Dense-polynomial variant of the deflated logarithmic derivative.
template <class Real>
inline Cx<Real> deflated_log_derivative(const DensePoly<Real>& q, const Cx<Real>& z,
                                        std::span<const Cx<Real>> found,
                                        Real saturation = Real(1e30)) {
  const Real guard =
      Real(10) * std::numeric_limits<Real>::epsilon() * (Real(1) + std::abs(z));
  detail::Compensated<Real> sre, sim;
  for (const Cx<Real>& alpha : found) {
    const Cx<Real> d = z - alpha;
    if (std::abs(d) < guard) throw pole_error();
    const Cx<Real> inv = Real(1) / d;
    sre.add(inv.real());
    sim.add(inv.imag());
  }
  const auto [p, dp] = eval_dense(q, z);
  const Cx<Real> ratio = p == Cx<Real>{} ? Cx<Real>(saturation, Real(0)) : dp / p;
  return ratio - Cx<Real>(sre.total(), sim.total());
}

template <class Real>
struct RecoverOutcome {
  std::vector<Cx<Real>> roots;
  bool complete{false};
};

/// @brief Newton iteration on the implicitly deflated polynomial from
/// `starts_per_root * m` circle starts. Each start runs until its
/// displacement 1/(q'/q) drops below eps_stop; distinct limits collect in a
/// root set. Early exit once m distinct roots are in hand.
template <class Real>
inline RecoverOutcome<Real> implicit_deflation_solve(const PolyFamily& fam,
                                                     std::span<const Cx<Real>> found, int m,
                                                     const EngineConfig<Real>& ecfg,
                                                     Real eps_root, int starts_per_root = 4,
                                                     double phase = 0.0) {
  RecoverOutcome<Real> out;
  if (m <= 0) {
    out.complete = true;
    return out;
  }
  RootSet<Real> rs(eps_root);
  const int starts = starts_per_root * m;
  const Real radius = Real(starting_radius(fam, 1.5));
  const Real tau = 2 * std::numbers::pi_v<Real>;
  const std::int64_t budget = 500 + 100 * std::int64_t(m);
  for (int s = 0; s < starts && std::int64_t(rs.size()) < m; ++s) {
    const Real angle = tau * (Real(s) + Real(phase)) / Real(starts);
    Cx<Real> z = radius * Cx<Real>(std::cos(angle), std::sin(angle));
    for (std::int64_t it = 0; it < budget; ++it) {
      Cx<Real> L;
      try {
        L = deflated_log_derivative(fam, z, found, ecfg.ratio_saturation);
      } catch (const pole_error&) {
        z += ecfg.eps_stop * Cx<Real>(Real(1), Real(1));
        continue;
      }
      if (L == Cx<Real>{}) {
        z += ecfg.eps_stop * Cx<Real>(Real(1), Real(1));
        continue;
      }
      const Cx<Real> disp = Real(1) / L;
      z -= disp;
      if (std::abs(disp) < ecfg.eps_stop) {
        rs.register_root(z, disp, m);
        break;
      }
      if (std::abs(z) > Real(4) * radius) break;  // wandered off; abandon this start
    }
  }
  out.roots = rs.points();
  out.complete = std::int64_t(rs.size()) == m;
  return out;
}

/// @brief Ehrlich-Aberth recovery: found roots enter as frozen coordinates,
/// m free coordinates start on the deflation circle and sweep until the
/// largest move drops below eps_stop.
template <class Real>
inline RecoverOutcome<Real> ehrlich_aberth_recover(const PolyFamily& fam,
                                                   std::span<const Cx<Real>> found, int m,
                                                   const EngineConfig<Real>& ecfg,
                                                   int max_sweeps = 500) {
  RecoverOutcome<Real> out;
  if (m <= 0) {
    out.complete = true;
    return out;
  }
  std::vector<Cx<Real>> coords(found.begin(), found.end());
  std::vector<bool> frozen(coords.size(), true);
  const Real radius = Real(starting_radius(fam, 1.5));
  const Real tau = 2 * std::numbers::pi_v<Real>;
  for (int k = 0; k < m; ++k) {
    const Real angle = tau * (Real(k) + Real(0.37L)) / Real(m);
    coords.push_back(radius * Cx<Real>(std::cos(angle), std::sin(angle)));
    frozen.push_back(false);
  }
  const std::size_t base = found.size();
  bool converged = false;
  for (int sweeps = 0; sweeps < max_sweeps && !converged; ++sweeps) {
    std::vector<Cx<Real>> next = ehrlich_aberth_sweep(fam, coords, frozen, ecfg);
    Real move = 0;
    for (std::size_t j = base; j < coords.size(); ++j)
      move = std::max(move, std::abs(next[j] - coords[j]));
    coords = std::move(next);
    converged = move < ecfg.eps_stop;
  }
  out.roots.assign(coords.begin() + std::ptrdiff_t(base), coords.end());
  out.complete = converged;
  return out;
}

namespace detail {

// In-place Gaussian elimination with partial pivoting for the tiny complex
// systems of the odd-sum refinement. Returns false on a vanishing pivot.
template <class Real>
inline bool solve_small(std::vector<Cx<Real>>& A, std::vector<Cx<Real>>& rhs, int m) {
  for (int col = 0; col < m; ++col) {
    int pivot = col;
    Real best = std::abs(A[std::size_t(col) * m + col]);
    for (int r = col + 1; r < m; ++r) {
      const Real mag = std::abs(A[std::size_t(r) * m + col]);
      if (mag > best) {
        best = mag;
        pivot = r;
      }
    }
    if (!(best > std::numeric_limits<Real>::min())) return false;
    if (pivot != col) {
      for (int c = col; c < m; ++c)
        std::swap(A[std::size_t(pivot) * m + c], A[std::size_t(col) * m + c]);
      std::swap(rhs[std::size_t(pivot)], rhs[std::size_t(col)]);
    }
    const Cx<Real> inv = Real(1) / A[std::size_t(col) * m + col];
    for (int r = col + 1; r < m; ++r) {
      const Cx<Real> f = A[std::size_t(r) * m + col] * inv;
      if (f == Cx<Real>{}) continue;
      for (int c = col; c < m; ++c) A[std::size_t(r) * m + c] -= f * A[std::size_t(col) * m + c];
      rhs[std::size_t(r)] -= f * rhs[std::size_t(col)];
    }
  }
  for (int r = m - 1; r >= 0; --r) {
    Cx<Real> acc = rhs[std::size_t(r)];
    for (int c = r + 1; c < m; ++c) acc -= A[std::size_t(r) * m + c] * rhs[std::size_t(c)];
    rhs[std::size_t(r)] = acc / A[std::size_t(r) * m + r];
  }
  return true;
}

}  // namespace detail

/// @brief Multivariate Newton refinement of m roots against the odd power
/// sums b_1, b_3, ..., b_{2m-1}: F_j = sum_i beta_i^(2j+1) - b_(2j+1),
/// Jacobian k beta^(k-1). Restores the input and returns false if the system
/// goes singular or a step diverges past the scale guard.
template <class Real>
inline bool refine_against_odd_power_sums(std::vector<Cx<Real>>& beta,
                                          std::span<const Cx<Real>> b_odd, Real tol,
                                          Real scale_guard, int max_iters = 30) {
  const int m = int(beta.size());
  if (m == 0) return true;
  if (int(b_odd.size()) != m)
    throw std::invalid_argument("odd-sum refinement: need exactly one sum per root");
  const std::vector<Cx<Real>> saved = beta;
  std::vector<Cx<Real>> J(std::size_t(m) * std::size_t(m));
  std::vector<Cx<Real>> F(static_cast<std::size_t>(m));
  for (int iter = 0; iter < max_iters; ++iter) {
    for (int j = 0; j < m; ++j) {
      const int k = 2 * j + 1;
      Cx<Real> s{};
      for (int i = 0; i < m; ++i) {
        J[std::size_t(j) * m + i] = Real(k) * pow_int(beta[std::size_t(i)], k - 1);
        s += pow_int(beta[std::size_t(i)], k);
      }
      F[std::size_t(j)] = s - b_odd[std::size_t(j)];
    }
    if (!detail::solve_small(J, F, m)) {
      beta = saved;
      return false;
    }
    Real step = 0;
    for (int i = 0; i < m; ++i) {
      beta[std::size_t(i)] -= F[std::size_t(i)];
      step = std::max(step, std::abs(F[std::size_t(i)]));
    }
    if (step > scale_guard) {
      beta = saved;
      return false;
    }
    if (step < tol) break;
  }
  return true;
}

/// @brief Newton-polish a root candidate on the full recursive polynomial.
template <class Real>
inline Cx<Real> polish_root(const PolyFamily& fam, Cx<Real> z, const EngineConfig<Real>& ecfg,
                            int steps = 5) {
  for (int s = 0; s < steps; ++s) {
    try {
      const NewtonStep<Real> st = newton_step(fam, z, ecfg.ratio_saturation);
      z = st.z_next;
      if (st.displacement == Cx<Real>{}) break;
    } catch (const critical_point_error&) {
      break;
    }
  }
  return z;
}

enum class RecoverMethod { ImplicitDeflation, EhrlichAberth, NewtonIdentities };

inline const char* to_string(RecoverMethod m) {
  switch (m) {
    case RecoverMethod::ImplicitDeflation: return "deflate";
    case RecoverMethod::EhrlichAberth: return "aberth";
    case RecoverMethod::NewtonIdentities: return "identities";
  }
  return "?";
}

template <class Real>
struct MissingRootJob {
  PolyFamily fam;
  std::vector<Cx<Real>> found;
  int m{0};
  RecoverMethod method{RecoverMethod::NewtonIdentities};
};

template <class Real>
struct RecoverResult {
  std::vector<Cx<Real>> roots;
  /// Per recovered root: distance to the nearest other recovered root
  /// (condition estimate; infinity when there is only one).
  std::vector<Real> condition;
  PowerSumReport<Real> report;
  bool complete{false};
};

/// @brief True when the odd-order theoretical sums up to 2m-1 are
/// structurally tiny (the stock z^2 + c families, whose odd coefficients
/// vanish), making the odd sums immune to the even-k cancellation.
inline bool odd_sums_structurally_small(std::span<const GaussianInt> a, int m) {
  for (std::size_t k = 1; k <= a.size() && int(k) <= 2 * m - 1; k += 2)
    if (norm(a[k - 1]) > 64) return false;
  return true;
}

/// @brief Recover m missing roots by the requested method, polish them with
/// full-polynomial Newton steps, and re-verify the completed set against
/// extra power sums.
template <class Real>
inline RecoverResult<Real> recover_missing(const MissingRootJob<Real>& job,
                                           const EngineConfig<Real>& ecfg, Real eps_root) {
  if (job.m < 0) throw std::invalid_argument("recover: missing-root count must be >= 0");
  RecoverResult<Real> res;
  const int m = job.m;
  const std::span<const Cx<Real>> found(job.found);
  if (m == 0) {
    res.complete = true;
  } else {
    switch (job.method) {
      case RecoverMethod::ImplicitDeflation: {
        RecoverOutcome<Real> o =
            implicit_deflation_solve(job.fam, found, m, ecfg, eps_root, 4, 0.0);
        if (!o.complete)
          o = implicit_deflation_solve(job.fam, found, m, ecfg, eps_root, 8, 0.37);
        res.roots = std::move(o.roots);
        res.complete = o.complete;
        break;
      }
      case RecoverMethod::EhrlichAberth: {
        RecoverOutcome<Real> o = ehrlich_aberth_recover(job.fam, found, m, ecfg);
        res.roots = std::move(o.roots);
        res.complete = o.complete;
        break;
      }
      case RecoverMethod::NewtonIdentities: {
        const std::int64_t K = std::min<std::int64_t>(2 * m - 1, job.fam.degree);
        const std::vector<GaussianInt> c = top_coefficients(job.fam, K);
        const std::vector<GaussianInt> a =
            power_sums_from_coefficients(std::span<const GaussianInt>(c).subspan(1));
        const std::vector<Cx<Real>> b = missing_power_sums<Real>(a, found);
        const DensePoly<Real> q =
            coefficients_from_power_sums(std::span<const Cx<Real>>(b).first(std::size_t(m)));
        DenseSolveResult<Real> sol = solve_dense(q, ecfg.eps_stop);
        res.roots = std::move(sol.roots);
        if (std::int64_t(2 * m - 1) <= K && odd_sums_structurally_small(a, m)) {
          std::vector<Cx<Real>> bodd(static_cast<std::size_t>(m));
          for (int j = 0; j < m; ++j) bodd[std::size_t(j)] = b[std::size_t(2 * j)];
          refine_against_odd_power_sums(res.roots, std::span<const Cx<Real>>(bodd),
                                        ecfg.eps_stop,
                                        Real(4) * Real(starting_radius(job.fam, 1.5)));
        }
        res.complete = sol.converged && int(res.roots.size()) == m;
        break;
      }
    }
    for (Cx<Real>& z : res.roots) z = polish_root(job.fam, z, ecfg);
  }

  res.condition.assign(res.roots.size(), std::numeric_limits<Real>::infinity());
  for (std::size_t i = 0; i < res.roots.size(); ++i)
    for (std::size_t j = 0; j < res.roots.size(); ++j)
      if (i != j)
        res.condition[i] = std::min(res.condition[i], std::abs(res.roots[i] - res.roots[j]));

  std::vector<Cx<Real>> all(job.found);
  all.insert(all.end(), res.roots.begin(), res.roots.end());
  const int kv = int(std::min<std::int64_t>(std::max(2 * m + 5, 11), job.fam.degree));
  res.report = verify_roots(job.fam, std::span<const Cx<Real>>(all), kv);
  return res;
}

}  // namespace allroots
