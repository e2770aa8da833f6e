#pragma once

#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "common.hpp"

namespace allroots {

namespace detail {

struct CellIndex {
  std::int64_t re{0};
  std::int64_t im{0};
};

// Mixes both 64-bit cell coordinates into one map key. A key collision
// between far-apart cells only adds distance-checked candidates; it cannot
// produce a wrong merge.
inline std::uint64_t hash_cell(std::int64_t re, std::int64_t im) {
  std::uint64_t a = std::uint64_t(re) * 0x9E3779B97F4A7C15ull;
  std::uint64_t b = std::uint64_t(im) * 0xC2B2AE3D27D4EB4Full;
  a ^= (b << 23) | (b >> 41);
  a ^= a >> 29;
  return a * 0xD6E8FEB86659FD93ull;
}

template <class Real>
inline CellIndex cell_of(const Cx<Real>& z, Real cell) {
  return {std::int64_t(std::floor(z.real() / cell)), std::int64_t(std::floor(z.imag() / cell))};
}

}  // namespace detail

/// @brief Inclusion disk radius centered on an approximate root: degree times
/// the final Newton displacement magnitude.
template <class Real>
inline Real inclusion_radius(std::int64_t degree, const Cx<Real>& displacement) {
  return Real(degree) * std::abs(displacement);
}

/// @brief Deduplicated set of converged points backed by a spatial hash grid.
///
/// Cell size equals eps_root and candidate lookup scans the 3x3 neighborhood,
/// so any pair within eps_root shares a neighborhood. Merging keeps the
/// representative with the smaller final displacement. Merge decisions for
/// pairs right at the eps_root boundary depend on arrival order; for point
/// sets whose pairwise distances stay outside [eps_root/2, 2*eps_root] the
/// final set is order-independent.
template <class Real>
class RootSet {
 public:
  struct Entry {
    Cx<Real> z{};
    Real inclusion_radius{0};
    Real best_displacement{0};
    std::int64_t hit_count{0};
  };

  struct RegisterResult {
    bool is_new{false};
    std::size_t index{0};
  };

  explicit RootSet(Real eps_root) : eps_(eps_root) {
    if (!(eps_ > Real(0))) throw std::invalid_argument("root set: eps_root must be positive");
  }

  Real eps_root() const { return eps_; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }

  /// @brief Register a converged point. Merges into the nearest existing root
  /// within eps_root (possibly relocating the representative to the
  /// smaller-displacement point), otherwise records a new root.
  RegisterResult register_root(const Cx<Real>& z, const Cx<Real>& displacement,
                               std::int64_t degree) {
    const Real dmag = std::abs(displacement);
    std::size_t best = npos;
    Real bestDist = eps_;
    const detail::CellIndex center = detail::cell_of(z, eps_);
    for (int dre = -1; dre <= 1; ++dre) {
      for (int dim = -1; dim <= 1; ++dim) {
        auto it = grid_.find(detail::hash_cell(center.re + dre, center.im + dim));
        if (it == grid_.end()) continue;
        for (std::uint32_t idx : it->second) {
          Real dist = std::abs(entries_[idx].z - z);
          if (dist < bestDist) {
            bestDist = dist;
            best = idx;
          }
        }
      }
    }
    if (best != npos) {
      Entry& e = entries_[best];
      ++e.hit_count;
      if (dmag < e.best_displacement) {
        relocate(std::uint32_t(best), e.z, z);
        e.z = z;
        e.best_displacement = dmag;
        e.inclusion_radius = allroots::inclusion_radius(degree, displacement);
      }
      return {false, best};
    }
    Entry e;
    e.z = z;
    e.best_displacement = dmag;
    e.inclusion_radius = allroots::inclusion_radius(degree, displacement);
    e.hit_count = 1;
    entries_.push_back(e);
    grid_[detail::hash_cell(center.re, center.im)].push_back(std::uint32_t(entries_.size() - 1));
    return {true, entries_.size() - 1};
  }

  std::vector<Cx<Real>> points() const {
    std::vector<Cx<Real>> p;
    p.reserve(entries_.size());
    for (const Entry& e : entries_) p.push_back(e.z);
    return p;
  }

 private:
  static constexpr std::size_t npos = std::size_t(-1);

  void relocate(std::uint32_t idx, const Cx<Real>& from, const Cx<Real>& to) {
    const detail::CellIndex a = detail::cell_of(from, eps_);
    const detail::CellIndex b = detail::cell_of(to, eps_);
    if (a.re == b.re && a.im == b.im) return;
    auto& bucket = grid_[detail::hash_cell(a.re, a.im)];
    for (std::size_t i = 0; i < bucket.size(); ++i) {
      if (bucket[i] == idx) {
        bucket.erase(bucket.begin() + std::ptrdiff_t(i));
        break;
      }
    }
    grid_[detail::hash_cell(b.re, b.im)].push_back(idx);
  }

  Real eps_;
  std::vector<Entry> entries_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> grid_;
};

struct CertifyResult {
  bool certified{false};
  std::int64_t count_deficit{0};
  /// Index pairs whose inclusion disks touch or intersect (capped sample).
  std::vector<std::pair<std::uint32_t, std::uint32_t>> overlaps;
};

/// @brief Certify that the set holds exactly `degree` roots with pairwise
/// disjoint inclusion disks. Near-pair search uses a coarse grid whose cell
/// is twice the largest radius: points in non-adjacent cells are farther
/// apart than any two radii combined, so the scan is linear for the
/// well-separated sets the engine produces.
template <class Real>
inline CertifyResult certify_disjoint(const RootSet<Real>& rs, std::int64_t degree) {
  CertifyResult out;
  const auto& es = rs.entries();
  out.count_deficit = degree - std::int64_t(es.size());

  Real rmax = 0;
  for (const auto& e : es) rmax = std::max(rmax, e.inclusion_radius);
  const Real cell = std::max(Real(2) * rmax, rs.eps_root());

  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> grid;
  for (std::uint32_t i = 0; i < es.size(); ++i) {
    const detail::CellIndex c = detail::cell_of(es[i].z, cell);
    grid[detail::hash_cell(c.re, c.im)].push_back(i);
  }

  constexpr std::size_t kMaxListed = 32;
  for (std::uint32_t i = 0; i < es.size(); ++i) {
    const detail::CellIndex c = detail::cell_of(es[i].z, cell);
    for (std::int64_t dre = -1; dre <= 1; ++dre) {
      for (std::int64_t dim = -1; dim <= 1; ++dim) {
        auto it = grid.find(detail::hash_cell(c.re + dre, c.im + dim));
        if (it == grid.end()) continue;
        for (std::uint32_t j : it->second) {
          if (j <= i) continue;
          Real dist = std::abs(es[i].z - es[j].z);
          if (dist <= es[i].inclusion_radius + es[j].inclusion_radius &&
              out.overlaps.size() < kMaxListed)
            out.overlaps.emplace_back(i, j);
        }
      }
    }
  }
  out.certified = out.count_deficit == 0 && out.overlaps.empty();
  return out;
}

}  // namespace allroots
