#pragma once

#include <atomic>
#include <limits>

#include <submet/parallel.hpp>
#include <submet/spatial.hpp>

namespace submet {
namespace detail {

inline void atomic_max(std::atomic<double>& slot, double value) {
  double cur = slot.load(std::memory_order_relaxed);
  while (value > cur && !slot.compare_exchange_weak(cur, value, std::memory_order_relaxed)) {
  }
}

// One side of a Hausdorff evaluation: index over positions plus the data the
// per-point minimum needs (minimum gauge over finite points, infinity flag).
struct HausdorffSide {
  const ClosedSetSample* set = nullptr;
  KdTree tree;
  double min_gauge = std::numeric_limits<double>::infinity();

  explicit HausdorffSide(const ClosedSetSample& s) : set(&s) {
    const Eigen::Index m = static_cast<Eigen::Index>(s.points.size());
    if (m > 0) {
      Eigen::MatrixXd pos(s.points.front().position.size(), m);
      for (Eigen::Index j = 0; j < m; ++j) pos.col(j) = s.points[static_cast<std::size_t>(j)].position;
      tree = KdTree(pos);
      for (const auto& p : s.points) min_gauge = std::min(min_gauge, gauge(p));
    }
  }

  // min over this side of the compactified distance to finite point a.
  // cmax lets the search stop once a cannot raise the running maximum.
  double min_to(const GaussPoint& a, double cmax) const {
    const double ga = gauge(a);
    double cap = std::numeric_limits<double>::infinity();
    if (!set->points.empty()) cap = ga + min_gauge;
    if (set->contains_infinity) cap = std::min(cap, ga);
    if (cap <= cmax) return cap;  // cannot exceed the running maximum
    double best = cap;
    if (!set->points.empty()) {
      const auto hit = tree.min_cost(
          a.position,
          [&](Eigen::Index j) { return gauss_distance(a, set->points[static_cast<std::size_t>(j)]); }, cmax);
      best = std::min(best, hit.cost);
    }
    return best;
  }

  // min over this side of the compactified distance to the point at infinity.
  double min_to_infinity() const {
    if (set->contains_infinity) return 0.0;
    return min_gauge;
  }
};

inline double directed_hausdorff(const ClosedSetSample& a, const HausdorffSide& b, std::atomic<double>& cmax) {
  if (a.contains_infinity) atomic_max(cmax, b.min_to_infinity());
  parallel_for(a.points.size(), [&](std::size_t i) {
    const double bound = cmax.load(std::memory_order_relaxed);
    const double m = b.min_to(a.points[i], bound);
    atomic_max(cmax, m);
  });
  return cmax.load(std::memory_order_relaxed);
}

}  // namespace detail

/// Hausdorff distance between two sampled closed subsets of the compactified
/// R^n x Gr_d(R^n). Index-accelerated with early break; returns exactly the
/// value a full pairwise scan would produce.
inline double hausdorff_distance(const ClosedSetSample& a, const ClosedSetSample& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("empty closed-set sample");
  detail::HausdorffSide sa(a);
  detail::HausdorffSide sb(b);
  std::atomic<double> cmax{0.0};
  detail::directed_hausdorff(a, sb, cmax);
  detail::directed_hausdorff(b, sa, cmax);
  return cmax.load(std::memory_order_relaxed);
}

}  // namespace submet
