#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace submet {

/// Exact nearest-neighbour index over a fixed set of points in R^n.
///
/// Queries take the candidate cost as a callable so callers control the exact
/// floating-point evaluation path (needed for bit-reproducible reductions);
/// the tree itself only prunes, using box lower bounds on the Euclidean
/// distance with a small relative slack so rounding can never prune a point a
/// linear scan would have picked. Ties are broken toward the lowest index.
class KdTree {
 public:
  struct Hit {
    Eigen::Index index = -1;
    double cost = std::numeric_limits<double>::infinity();
  };

  KdTree() = default;

  explicit KdTree(const Eigen::MatrixXd& positions) : pts_(positions) {
    const Eigen::Index m = pts_.cols();
    order_.resize(static_cast<std::size_t>(m));
    std::iota(order_.begin(), order_.end(), Eigen::Index{0});
    if (m > 0) {
      nodes_.reserve(static_cast<std::size_t>(2 * m / kLeafSize + 2));
      build(0, m);
    }
  }

  bool empty() const { return pts_.cols() == 0; }
  Eigen::Index size() const { return pts_.cols(); }
  const Eigen::MatrixXd& points() const { return pts_; }

  /// Minimizes cost(j) over all points, where cost(j) >= |q - x_j| is assumed.
  /// If the running best ever drops below stop_below the search may return
  /// early with that (still achieved) value.
  template <typename CostFn>
  Hit min_cost(const Eigen::VectorXd& q, CostFn&& cost, double stop_below = -1.0) const {
    Hit best;
    if (!nodes_.empty()) search(0, q, cost, stop_below, best);
    return best;
  }

  /// Nearest point by Euclidean distance; ties go to the lowest index.
  Hit nearest(const Eigen::VectorXd& q) const {
    return min_cost(q, [&](Eigen::Index j) { return (q - pts_.col(j)).norm(); });
  }

  /// Indices of all points with |q - x_j| <= radius, ascending.
  std::vector<Eigen::Index> within_radius(const Eigen::VectorXd& q, double radius) const {
    std::vector<Eigen::Index> hits;
    if (!nodes_.empty()) collect(0, q, radius, hits);
    std::sort(hits.begin(), hits.end());
    return hits;
  }

 private:
  static constexpr Eigen::Index kLeafSize = 8;

  struct Node {
    Eigen::VectorXd lo, hi;  // bounding box of the points below
    Eigen::Index begin = 0, end = 0;
    int left = -1, right = -1;
  };

  int build(Eigen::Index begin, Eigen::Index end) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    Eigen::VectorXd lo = pts_.col(order_[static_cast<std::size_t>(begin)]);
    Eigen::VectorXd hi = lo;
    for (Eigen::Index k = begin + 1; k < end; ++k) {
      const auto& p = pts_.col(order_[static_cast<std::size_t>(k)]);
      lo = lo.cwiseMin(p.eval());
      hi = hi.cwiseMax(p.eval());
    }
    nodes_[static_cast<std::size_t>(id)].lo = lo;
    nodes_[static_cast<std::size_t>(id)].hi = hi;
    nodes_[static_cast<std::size_t>(id)].begin = begin;
    nodes_[static_cast<std::size_t>(id)].end = end;
    if (end - begin > kLeafSize) {
      Eigen::Index dim;
      (hi - lo).maxCoeff(&dim);
      const Eigen::Index mid = begin + (end - begin) / 2;
      std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                       [&](Eigen::Index a, Eigen::Index b) {
                         const double xa = pts_(dim, a), xb = pts_(dim, b);
                         return xa < xb || (xa == xb && a < b);
                       });
      const int l = build(begin, mid);
      const int r = build(mid, end);
      nodes_[static_cast<std::size_t>(id)].left = l;
      nodes_[static_cast<std::size_t>(id)].right = r;
    }
    return id;
  }

  // Lower bound on |q - x| over the node's box. Never exceeds the true
  // distance by more than a few ulps, which the pruning slack absorbs.
  double box_bound(const Node& node, const Eigen::VectorXd& q) const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < q.size(); ++i) {
      double d = 0.0;
      if (q[i] < node.lo[i]) d = node.lo[i] - q[i];
      else if (q[i] > node.hi[i]) d = q[i] - node.hi[i];
      s += d * d;
    }
    return std::sqrt(s);
  }

  static bool prune(double bound, double best) { return bound > best + 1e-12 * (1.0 + best); }

  template <typename CostFn>
  void search(int id, const Eigen::VectorXd& q, CostFn& cost, double stop_below, Hit& best) const {
    const Node& node = nodes_[static_cast<std::size_t>(id)];
    if (best.cost < stop_below) return;
    if (prune(box_bound(node, q), best.cost)) return;
    if (node.left < 0) {
      for (Eigen::Index k = node.begin; k < node.end; ++k) {
        const Eigen::Index j = order_[static_cast<std::size_t>(k)];
        const double c = cost(j);
        if (c < best.cost || (c == best.cost && j < best.index)) {
          best.cost = c;
          best.index = j;
          if (best.cost < stop_below) return;
        }
      }
      return;
    }
    const Node& lchild = nodes_[static_cast<std::size_t>(node.left)];
    const Node& rchild = nodes_[static_cast<std::size_t>(node.right)];
    const double bl = box_bound(lchild, q);
    const double br = box_bound(rchild, q);
    if (bl <= br) {
      search(node.left, q, cost, stop_below, best);
      search(node.right, q, cost, stop_below, best);
    } else {
      search(node.right, q, cost, stop_below, best);
      search(node.left, q, cost, stop_below, best);
    }
  }

  void collect(int id, const Eigen::VectorXd& q, double radius, std::vector<Eigen::Index>& hits) const {
    const Node& node = nodes_[static_cast<std::size_t>(id)];
    if (prune(box_bound(node, q), radius)) return;
    if (node.left < 0) {
      for (Eigen::Index k = node.begin; k < node.end; ++k) {
        const Eigen::Index j = order_[static_cast<std::size_t>(k)];
        if ((q - pts_.col(j)).norm() <= radius) hits.push_back(j);
      }
      return;
    }
    collect(node.left, q, radius, hits);
    collect(node.right, q, radius, hits);
  }

  Eigen::MatrixXd pts_;
  std::vector<Eigen::Index> order_;
  std::vector<Node> nodes_;
};

}  // namespace submet
