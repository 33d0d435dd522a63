#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <submet/format.hpp>
#include <submet/geometry.hpp>
#include <submet/manifold.hpp>
#include <submet/parallel.hpp>

namespace submet {

/// Gauss lift of every sample, with the point at infinity adjoined (so the
/// empty manifold lifts to {infinity}).
inline ClosedSetSample gauss_map(const DiscretizedSubmanifold& w) {
  ClosedSetSample s;
  s.points.reserve(static_cast<std::size_t>(w.sample_count()));
  for (Eigen::Index i = 0; i < w.sample_count(); ++i) s.points.push_back(w.gauss_point(i));
  s.contains_infinity = true;
  return s;
}

inline double fell_hausdorff(const DiscretizedSubmanifold& a, const DiscretizedSubmanifold& b) {
  if (a.ambient_dim() != b.ambient_dim() || a.intrinsic_dim() != b.intrinsic_dim())
    throw std::invalid_argument("manifolds have different ambient or intrinsic dimensions");
  return hausdorff_distance(gauss_map(a), gauss_map(b));
}

// ---------------------------------------------------------------------------
// volume graphs
// ---------------------------------------------------------------------------

struct RadialGrid {
  Eigen::VectorXd radii;

  double r_max() const { return radii.size() > 0 ? radii[radii.size() - 1] : 0.0; }

  static RadialGrid uniform(double r_max, Eigen::Index count) {
    if (count < 2 || r_max <= 0.0) throw std::invalid_argument("radial grid needs r_max > 0 and at least 2 points");
    RadialGrid g;
    g.radii.resize(count);
    for (Eigen::Index i = 0; i < count; ++i)
      g.radii[i] = r_max * static_cast<double>(i) / static_cast<double>(count - 1);
    return g;
  }

  bool same_as(const RadialGrid& o) const {
    return radii.size() == o.radii.size() && (radii.array() == o.radii.array()).all();
  }
};

inline RadialGrid default_radial_grid(const DiscretizedSubmanifold& a, const DiscretizedSubmanifold& b,
                                      Eigen::Index grid_points = 512, double r_max_override = 0.0) {
  const double r_max = r_max_override > 0.0
                           ? r_max_override
                           : std::max(1.0, 1.5 * std::max(a.max_position_norm(), b.max_position_norm()));
  return RadialGrid::uniform(r_max, grid_points);
}

/// Volume of the radius-r restriction on a shared grid, with the grid steps
/// where the growth jumps (a compact component entering the ball).
struct VolumeGraph {
  Eigen::VectorXd radii;
  Eigen::VectorXd values;                 // nondecreasing
  std::vector<Eigen::Index> jump_steps;   // step i: the jump sits between radii[i] and radii[i+1]
  bool initial_jump = false;              // positive volume already at radii[0]

  double total() const { return values.size() > 0 ? values[values.size() - 1] : 0.0; }

  struct Breakpoint {
    double r;
    double value_left, value_right;
  };

  std::vector<Breakpoint> breakpoints() const {
    std::vector<Breakpoint> out;
    if (initial_jump) out.push_back({radii[0], 0.0, values[0]});
    for (Eigen::Index i : jump_steps) out.push_back({radii[i + 1], values[i], values[i + 1]});
    return out;
  }
};

inline VolumeGraph volume_function(const DiscretizedSubmanifold& w, const RadialGrid& grid) {
  const Eigen::Index g = grid.radii.size();
  if (g < 1 || grid.radii[0] != 0.0) throw std::invalid_argument("r_grid must start at 0");
  for (Eigen::Index i = 0; i + 1 < g; ++i)
    if (!(grid.radii[i] < grid.radii[i + 1])) throw std::invalid_argument("r_grid must be strictly increasing");

  // Same membership rule and summation order as restrict_to_radius, so the
  // grid values agree with it bitwise.
  const bool domain_aware = !w.domain().is_all();
  Eigen::VectorXd keys(w.sample_count());
  for (Eigen::Index j = 0; j < w.sample_count(); ++j) {
    double key = w.positions().col(j).norm();
    if (domain_aware) {
      const double margin = w.domain().distance_to_complement(w.position(j));
      key = margin <= 0.0 ? std::numeric_limits<double>::infinity() : std::max(key, 1.0 / margin);
    }
    keys[j] = key;
  }

  VolumeGraph out;
  out.radii = grid.radii;
  out.values.resize(g);
  double* values = out.values.data();
  parallel_for(g, [&](Eigen::Index i) {
    const double r = grid.radii[i];
    const double cut = r + kRadiusSlack * std::max(1.0, std::abs(r));
    double acc = 0.0;
    for (Eigen::Index j = 0; j < keys.size(); ++j)
      if (keys[j] <= cut) acc += w.weight(j);
    values[i] = acc;
  });
  for (Eigen::Index i = 0; i + 1 < g; ++i)
    if (out.values[i + 1] < out.values[i]) throw std::logic_error("volume function not monotone");

  // A step is a jump when it exceeds 3x the median step: genuine jumps stand
  // out against smooth growth without assuming smoothness bounds.
  if (g > 1) {
    std::vector<double> steps(static_cast<std::size_t>(g - 1));
    for (Eigen::Index i = 0; i + 1 < g; ++i) steps[static_cast<std::size_t>(i)] = out.values[i + 1] - out.values[i];
    std::vector<double> sorted = steps;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>((sorted.size() - 1) / 2),
                     sorted.end());
    const double median = sorted[(sorted.size() - 1) / 2];
    for (Eigen::Index i = 0; i + 1 < g; ++i)
      if (steps[static_cast<std::size_t>(i)] > 3.0 * median) out.jump_steps.push_back(i);
  }
  out.initial_jump = out.values.size() > 0 && out.values[0] > 0.0;
  return out;
}

namespace detail {

// Dense sampling of the completed graph: every grid vertex, plus verticals
// across each jump at the given value resolution.
inline Eigen::Matrix2Xd completed_graph_samples(const VolumeGraph& graph, double value_resolution) {
  std::vector<Eigen::Vector2d> pts;
  const Eigen::Index g = graph.radii.size();
  pts.reserve(static_cast<std::size_t>(g));
  for (Eigen::Index i = 0; i < g; ++i) pts.emplace_back(graph.radii[i], graph.values[i]);

  auto add_vertical = [&](double r, double lo, double hi) {
    if (hi <= lo) return;
    Eigen::Index segs = 1;
    if (value_resolution > 0.0)
      segs = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::ceil((hi - lo) / value_resolution)));
    for (Eigen::Index k = 0; k <= segs; ++k)
      pts.emplace_back(r, lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(segs));
  };
  for (const auto& bp : graph.breakpoints()) add_vertical(bp.r, bp.value_left, bp.value_right);

  Eigen::Matrix2Xd out(2, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = pts[i];
  return out;
}

inline double directed_euclidean_hausdorff(const Eigen::Matrix2Xd& a, const Eigen::Matrix2Xd& b, double seed_max) {
  double cmax = seed_max;
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      const double d = (a.col(i) - b.col(j)).norm();
      if (d < best) best = d;
      if (best < cmax) break;  // this point cannot raise the max
    }
    if (best > cmax) cmax = best;
  }
  return cmax;
}

}  // namespace detail

/// Hausdorff distance between dense samplings of the completed volume graphs
/// on the shared window [0, r_max] x [0, v_max].
inline double volume_pseudodistance(const VolumeGraph& a, const VolumeGraph& b) {
  if (a.radii.size() != b.radii.size() || (a.radii.array() != b.radii.array()).any())
    throw std::invalid_argument("volume graphs computed on different grids");
  // each graph is sampled at its own value resolution, so the sampling is a
  // function of the graph alone and the Hausdorff stays an exact metric on
  // the sampled sets (symmetry and triangle inequality hold to the bit)
  const Eigen::Index g = std::max<Eigen::Index>(a.radii.size(), 1);
  const Eigen::Matrix2Xd pa = detail::completed_graph_samples(a, a.total() / static_cast<double>(g));
  const Eigen::Matrix2Xd pb = detail::completed_graph_samples(b, b.total() / static_cast<double>(g));
  const double forward = detail::directed_euclidean_hausdorff(pa, pb, 0.0);
  return detail::directed_euclidean_hausdorff(pb, pa, forward);
}

inline double volume_pseudodistance(const DiscretizedSubmanifold& a, const DiscretizedSubmanifold& b,
                                    const RadialGrid& grid) {
  return volume_pseudodistance(volume_function(a, grid), volume_function(b, grid));
}

// ---------------------------------------------------------------------------
// combined report
// ---------------------------------------------------------------------------

struct DistanceReport {
  double d_h = 0.0;
  double d_nu = 0.0;
  double d_psi = 0.0;
  double truncation_bound = 0.0;
  Eigen::Index count_a = 0;
  Eigen::Index count_b = 0;

  std::string csv_row() const {
    return format_double(d_h) + "," + format_double(d_nu) + "," + format_double(d_psi) + "," +
           format_double(truncation_bound) + "," + std::to_string(count_a) + "," + std::to_string(count_b);
  }

  static std::string csv_header() { return "d_H,d_nu,d_psi,truncation_bound,n_A,n_B"; }
};

struct GrWOptions {
  Eigen::Index grid_points = 512;
  double r_max = 0.0;  // 0: auto, 1.5 x max sample norm (min 1.0)
};

inline DistanceReport gr_w_distance(const DiscretizedSubmanifold& a, const DiscretizedSubmanifold& b,
                                    const GrWOptions& opts = {}) {
  if (a.ambient_dim() != b.ambient_dim() || a.intrinsic_dim() != b.intrinsic_dim())
    throw std::invalid_argument("manifolds have different ambient or intrinsic dimensions");
  const RadialGrid grid = default_radial_grid(a, b, opts.grid_points, opts.r_max);
  DistanceReport rep;
  rep.d_h = fell_hausdorff(a, b);
  rep.d_nu = volume_pseudodistance(a, b, grid);
  rep.d_psi = rep.d_h + rep.d_nu;
  rep.truncation_bound = 2.0 / (1.0 + grid.r_max());
  rep.count_a = a.sample_count();
  rep.count_b = b.sample_count();
  return rep;
}

}  // namespace submet
