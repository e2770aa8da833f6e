#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

#include "newton.hpp"
#include "parallel.hpp"
#include "root_set.hpp"

namespace allroots {

/// @brief Cross-ratio of the neighbor triple (z_prev, z_cur, z_next):
/// (z_prev - z_cur) / (z_next - z_cur). Invariant under z -> a z + b, so the
/// bulk similarity a contracting ring undergoes keeps it constant; genuine
/// shape change moves it. Throws std::domain_error when z_next == z_cur.
template <class Real>
inline Cx<Real> cross_ratio(const Cx<Real>& z_prev, const Cx<Real>& z_cur,
                            const Cx<Real>& z_next) {
  if (z_next == z_cur) throw std::domain_error("cross ratio: degenerate triple");
  return (z_prev - z_cur) / (z_next - z_cur);
}

/// @brief Deformation of the current cross-ratio against its baseline:
/// |log(t / t0)|, zero exactly when the triple moved by a similarity.
/// Returns +inf when either value is zero (collapsed triple).
template <class Real>
inline Real deformation(const Cx<Real>& t_now, const Cx<Real>& t_baseline) {
  if (t_now == Cx<Real>{} || t_baseline == Cx<Real>{})
    return std::numeric_limits<Real>::infinity();
  return std::abs(std::log(t_now / t_baseline));
}

template <class Real>
struct RingConfig {
  /// Seed orbit count on the starting circle.
  int n0 = 64;
  /// Deformation threshold above which an orbit requests refinement.
  Real refinement_threshold = Real(0.05);
  /// Starting circle radius as a multiple of the family root bound.
  double radius_factor = 2.0;
  /// Angular offset of the seeds, in units of the seed spacing.
  double phase = 0.0;
  /// Refinement generation cap; negative derives the cap that bounds the
  /// ring at ~4x degree orbits.
  int max_generation = -1;

  void validate() const {
    if (n0 < 3) throw std::invalid_argument("ring config: need at least 3 seed orbits");
    if (!(refinement_threshold > Real(0)))
      throw std::invalid_argument("ring config: refinement threshold must be positive");
    if (!(radius_factor > 1.0))
      throw std::invalid_argument("ring config: radius factor must exceed 1");
  }
};

struct SweepOutcome {
  std::int64_t advanced{0};
  std::int64_t inserted{0};
  std::int64_t newly_converged{0};
};

/// @brief The ring of Newton orbits: lockstep sweeps, deformation-triggered
/// midpoint insertion, and frozen converged anchors.
///
/// An orbit pool gives stable ids; `ring_` holds the circular order and is
/// rebuilt on insertion sweeps. Generation bookkeeping bounds the ring at
/// roughly 4x degree orbits: an insertion needs both the trigger's generation
/// and max(parent generations) + 1 within the cap.
template <class Real>
class OrbitRing {
 public:
  using TraceFn = std::function<void(std::int64_t sweep, std::uint32_t id, const Cx<Real>& z)>;

  OrbitRing(const PolyFamily& fam, const RingConfig<Real>& rc) : fam_(fam), rc_(rc) {
    rc_.validate();
    gmax_ = rc_.max_generation;
    if (gmax_ < 0) {
      gmax_ = 0;
      while ((std::int64_t(rc_.n0) << gmax_) < 4 * fam_.degree) ++gmax_;
    }
    const double radius = starting_radius(fam_, rc_.radius_factor);
    const Real tau = 2 * std::numbers::pi_v<Real>;
    pool_.reserve(std::size_t(rc_.n0));
    ring_.reserve(std::size_t(rc_.n0));
    for (int k = 0; k < rc_.n0; ++k) {
      Orbit<Real> o;
      const Real angle = tau * (Real(k) + Real(rc_.phase)) / Real(rc_.n0);
      o.z = Cx<Real>(Real(radius) * std::cos(angle), Real(radius) * std::sin(angle));
      o.id = std::uint32_t(k);
      pool_.push_back(o);
      ring_.push_back(std::uint32_t(k));
      running_.push_back(std::uint32_t(k));
    }
  }

  int max_generation() const { return gmax_; }
  std::int64_t sweep_count() const { return sweeps_; }
  bool done() const { return running_.empty(); }
  const std::vector<Orbit<Real>>& pool() const { return pool_; }
  const std::vector<std::uint32_t>& ring() const { return ring_; }
  /// Ids of orbits that converged during the last sweep, in ring order.
  const std::vector<std::uint32_t>& drained() const { return drained_; }

  void set_trace(TraceFn fn, std::int64_t every) {
    trace_ = std::move(fn);
    trace_every_ = every;
    if (trace_ && trace_every_ > 0)
      for (std::uint32_t pos : running_) trace_(0, ring_[pos], pool_[ring_[pos]].z);
  }

  /// @brief One lockstep sweep: (a) advance every Running orbit once (data
  /// parallel, pure per orbit), (b) evaluate deformation triggers in ring
  /// order, (c) insert midpoints for triggered orbits, skipping gaps already
  /// split this sweep, (d) collect newly converged orbits. Phases b-d are
  /// serial, so results are identical for any thread count.
  SweepOutcome sweep(const EngineConfig<Real>& cfg, int threads = 1) {
    SweepOutcome out;
    if (running_.empty()) return out;
    out.advanced = std::int64_t(running_.size());

    parallel_for(running_.size(), threads, [&](std::size_t i) {
      Orbit<Real>& o = pool_[ring_[running_[i]]];
      o = advance(std::move(o), fam_, cfg);
    });

    drained_.clear();
    for (std::uint32_t pos : running_)
      if (pool_[ring_[pos]].status == OrbitStatus::Converged) drained_.push_back(ring_[pos]);
    out.newly_converged = std::int64_t(drained_.size());

    const std::size_t L = ring_.size();
    refine_.clear();
    for (std::uint32_t pos : running_) {
      Orbit<Real>& cur = pool_[ring_[pos]];
      if (cur.status != OrbitStatus::Running) continue;
      const Orbit<Real>& prev = pool_[ring_[pos == 0 ? L - 1 : pos - 1]];
      const Orbit<Real>& next = pool_[ring_[pos + 1 == L ? 0 : pos + 1]];
      const bool anchored = (prev.status == OrbitStatus::Running ||
                             prev.status == OrbitStatus::Converged) &&
                            (next.status == OrbitStatus::Running ||
                             next.status == OrbitStatus::Converged);
      if (!anchored) continue;
      if (next.z == cur.z || prev.z == cur.z) {
        // Collapsed triple: maximal deformation by convention.
        if (cur.generation < gmax_) refine_.push_back(pos);
        continue;
      }
      const Cx<Real> t = cross_ratio(prev.z, cur.z, next.z);
      if (!cur.baseline_cross_ratio) {
        cur.baseline_cross_ratio = t;
        continue;
      }
      if (deformation(t, *cur.baseline_cross_ratio) > rc_.refinement_threshold &&
          cur.generation < gmax_)
        refine_.push_back(pos);
    }

    ++sweeps_;
    // Trace before any insertion: running_ holds positions into the
    // pre-insertion ring.
    if (trace_ && trace_every_ > 0 && sweeps_ % trace_every_ == 0)
      for (std::uint32_t pos : running_) trace_(sweeps_, ring_[pos], pool_[ring_[pos]].z);

    if (!refine_.empty()) out.inserted = apply_refinements();

    if (out.inserted > 0) {
      running_.clear();
      for (std::uint32_t pos = 0; pos < ring_.size(); ++pos)
        if (pool_[ring_[pos]].status == OrbitStatus::Running) running_.push_back(pos);
    } else {
      std::erase_if(running_,
                    [&](std::uint32_t pos) { return pool_[ring_[pos]].status != OrbitStatus::Running; });
    }
    return out;
  }

 private:
  // Insert midpoints around each triggered orbit. Gap g sits between ring
  // positions g and g+1 (mod L); each gap splits at most once per sweep, the
  // first trigger in ring order winning. The inserted orbit inherits the
  // trigger's iteration count (budget fairness), starts a fresh cross-ratio
  // baseline and cycle sentinel, and both old gap endpoints drop their
  // baselines because their neighbor geometry just changed.
  std::int64_t apply_refinements() {
    const std::size_t L = ring_.size();
    splits_.clear();
    gap_used_.assign(L, 0);
    for (std::uint32_t pos : refine_) {
      const std::uint32_t gaps[2] = {pos == 0 ? std::uint32_t(L - 1) : pos - 1, pos};
      for (std::uint32_t gap : gaps) {
        if (gap_used_[gap]) continue;
        const std::uint32_t leftId = ring_[gap];
        const std::uint32_t rightId = ring_[gap + 1 == L ? 0 : gap + 1];
        const int gen =
            std::max(pool_[leftId].generation, pool_[rightId].generation) + 1;
        if (gen > gmax_) continue;
        gap_used_[gap] = 1;
        Orbit<Real> inserted;
        inserted.z = (pool_[leftId].z + pool_[rightId].z) * Real(0.5);
        inserted.generation = gen;
        inserted.iterations = pool_[ring_[pos]].iterations;
        inserted.id = std::uint32_t(pool_.size());
        pool_.push_back(inserted);
        splits_.emplace_back(gap, inserted.id);
        pool_[leftId].baseline_cross_ratio.reset();
        pool_[rightId].baseline_cross_ratio.reset();
      }
    }
    if (splits_.empty()) return 0;
    std::sort(splits_.begin(), splits_.end());
    std::vector<std::uint32_t> next;
    next.reserve(L + splits_.size());
    std::size_t si = 0;
    for (std::uint32_t g = 0; g < L; ++g) {
      next.push_back(ring_[g]);
      while (si < splits_.size() && splits_[si].first == g) next.push_back(splits_[si++].second);
    }
    ring_ = std::move(next);
    return std::int64_t(splits_.size());
  }

  PolyFamily fam_;
  RingConfig<Real> rc_;
  int gmax_{0};
  std::vector<Orbit<Real>> pool_;
  std::vector<std::uint32_t> ring_;      // circular order, ids into pool_
  std::vector<std::uint32_t> running_;   // ring positions of Running orbits
  std::vector<std::uint32_t> drained_;
  std::vector<std::uint32_t> refine_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> splits_;
  std::vector<char> gap_used_;
  std::int64_t sweeps_{0};
  TraceFn trace_;
  std::int64_t trace_every_{0};
};

struct RunStatsCore {
  std::int64_t total_iterations{0};
  std::int64_t sweeps{0};
  std::int64_t refinements{0};
  std::int64_t final_ring_size{0};
  std::int64_t converged{0};
  std::int64_t cycle_trapped{0};
  std::int64_t exhausted{0};
  std::int64_t failed{0};
  std::int64_t distinct_roots{0};
  double wall_seconds{0};
};

template <class Real>
struct RunResult {
  RootSet<Real> roots;
  RunStatsCore stats;

  explicit RunResult(Real eps_root) : roots(eps_root) {}
};

/// @brief Drive the ring until no orbit is Running, draining converged
/// orbits into a deduplicated root set. Deterministic for a fixed config and
/// scalar type, independent of `threads`.
template <class Real>
inline RunResult<Real> run(const PolyFamily& fam, const EngineConfig<Real>& ecfg,
                           const RingConfig<Real>& rcfg, Real eps_root, int threads = 1,
                           typename OrbitRing<Real>::TraceFn trace = nullptr,
                           std::int64_t trace_every = 0) {
  ecfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  OrbitRing<Real> ring(fam, rcfg);
  if (trace) ring.set_trace(std::move(trace), trace_every);
  RunResult<Real> result(eps_root);
  while (!ring.done()) {
    const SweepOutcome out = ring.sweep(ecfg, threads);
    result.stats.total_iterations += out.advanced;
    result.stats.refinements += out.inserted;
    for (std::uint32_t id : ring.drained()) {
      const Orbit<Real>& o = ring.pool()[id];
      result.roots.register_root(o.z, o.last_displacement, fam.degree);
    }
  }
  result.stats.sweeps = ring.sweep_count();
  result.stats.final_ring_size = std::int64_t(ring.ring().size());
  for (const Orbit<Real>& o : ring.pool()) {
    switch (o.status) {
      case OrbitStatus::Converged: ++result.stats.converged; break;
      case OrbitStatus::CycleTrapped: ++result.stats.cycle_trapped; break;
      case OrbitStatus::Exhausted: ++result.stats.exhausted; break;
      case OrbitStatus::Failed: ++result.stats.failed; break;
      case OrbitStatus::Running: break;
    }
  }
  result.stats.distinct_roots = std::int64_t(result.roots.size());
  result.stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace allroots
