#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <submet/format.hpp>
#include <submet/geometry.hpp>
#include <submet/manifold.hpp>
#include <submet/parallel.hpp>
#include <submet/spatial.hpp>

namespace submet {

inline constexpr Eigen::Index kScanGridCap = 1000000;

/// Value of a scan at one basepoint: the affine tangent plane seen from p
/// (offset = normal component of the nearest-sample displacement), or the
/// point at infinity when nothing is close or the nearest point is ambiguous.
struct AffinePlaneOrInfinity {
  bool finite = false;
  Eigen::VectorXd offset;  // orthogonal to the plane
  GrassPlane plane;

  static AffinePlaneOrInfinity infinity() { return {}; }

  static AffinePlaneOrInfinity at(Eigen::VectorXd offset, GrassPlane plane) {
    AffinePlaneOrInfinity v;
    v.finite = true;
    v.offset = std::move(offset);
    v.plane = std::move(plane);
    return v;
  }
};

namespace detail {

inline AffinePlaneOrInfinity scan_at_with_tree(const DiscretizedSubmanifold& w, const KdTree& tree,
                                               const Eigen::VectorXd& p, double rho) {
  const auto hit = tree.nearest(p);
  if (hit.index < 0 || hit.cost >= rho) return AffinePlaneOrInfinity::infinity();

  // Ambiguity cutoff: a competing near-minimizer away from the winner's
  // 3h-neighbourhood means p sits near a focal/equidistant locus.
  const Eigen::VectorXd star = w.position(hit.index);
  for (Eigen::Index j : tree.within_radius(p, 1.05 * hit.cost)) {
    if ((w.position(j) - star).norm() > 3.0 * w.resolution()) return AffinePlaneOrInfinity::infinity();
  }

  const Eigen::MatrixXd& f = w.tangent_frame(hit.index);
  const Eigen::VectorXd v = star - p;
  Eigen::VectorXd offset = v - f * (f.transpose() * v);
  return AffinePlaneOrInfinity::at(std::move(offset), w.tangent_plane(hit.index));
}

}  // namespace detail

inline AffinePlaneOrInfinity scan_at(const DiscretizedSubmanifold& w, const Eigen::VectorXd& p, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("scan radius must be positive");
  if (p.size() != w.ambient_dim()) throw std::invalid_argument("basepoint has the wrong ambient dimension");
  if (w.empty()) return AffinePlaneOrInfinity::infinity();

  const KdTree tree(w.positions());
  return detail::scan_at_with_tree(w, tree, p, rho);
}

// ---------------------------------------------------------------------------
// grids and sections
// ---------------------------------------------------------------------------

struct AxisSpec {
  double lo = 0.0, hi = 0.0, step = 0.0;

  Eigen::Index count() const {
    if (!(step > 0.0) || hi < lo) throw std::invalid_argument("axis needs lo <= hi and step > 0");
    return static_cast<Eigen::Index>(std::floor((hi - lo) / step + 1e-9)) + 1;
  }
};

struct GridSpec {
  std::vector<AxisSpec> axes;

  Eigen::Index point_count() const {
    Eigen::Index total = 1;
    for (const auto& a : axes) {
      const Eigen::Index c = a.count();
      if (total > kScanGridCap / std::max<Eigen::Index>(c, 1)) return kScanGridCap + 1;
      total *= c;
    }
    return total;
  }

  /// Row-major flattening: the first axis varies slowest.
  Eigen::VectorXd point(Eigen::Index flat) const {
    Eigen::VectorXd p(static_cast<Eigen::Index>(axes.size()));
    for (Eigen::Index a = static_cast<Eigen::Index>(axes.size()) - 1; a >= 0; --a) {
      const Eigen::Index c = axes[static_cast<std::size_t>(a)].count();
      const Eigen::Index i = flat % c;
      flat /= c;
      p[a] = axes[static_cast<std::size_t>(a)].lo + static_cast<double>(i) * axes[static_cast<std::size_t>(a)].step;
    }
    return p;
  }

  bool same_as(const GridSpec& o) const {
    if (axes.size() != o.axes.size()) return false;
    for (std::size_t a = 0; a < axes.size(); ++a)
      if (axes[a].lo != o.axes[a].lo || axes[a].hi != o.axes[a].hi || axes[a].step != o.axes[a].step) return false;
    return true;
  }
};

/// Symmetric cube grid around the origin sized to contain the manifolds with
/// margin, capped under the grid size limit.
inline GridSpec default_scan_grid(Eigen::Index ambient, double max_norm) {
  const double half = std::max(1.0, std::ceil(max_norm + 0.5));
  Eigen::Index per_axis = 17;
  while (per_axis > 3) {
    double total = 1.0;
    for (Eigen::Index a = 0; a < ambient; ++a) total *= static_cast<double>(per_axis);
    if (total <= static_cast<double>(kScanGridCap)) break;
    per_axis = (per_axis - 1) / 2 + 1;  // halve the resolution, keep endpoints
  }
  GridSpec g;
  g.axes.assign(static_cast<std::size_t>(ambient),
                AxisSpec{-half, half, 2.0 * half / static_cast<double>(per_axis - 1)});
  return g;
}

struct ScanSection {
  GridSpec grid;
  double scan_radius = 0.0;
  std::vector<AffinePlaneOrInfinity> values;
};

inline ScanSection scan_section(const DiscretizedSubmanifold& w, const GridSpec& grid, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("scan radius must be positive");
  if (grid.axes.size() != static_cast<std::size_t>(w.ambient_dim()))
    throw std::invalid_argument("grid has the wrong ambient dimension");
  const Eigen::Index total = grid.point_count();
  if (total > kScanGridCap) throw std::invalid_argument("scan grid exceeds the size cap");

  ScanSection s;
  s.grid = grid;
  s.scan_radius = rho;
  s.values.assign(static_cast<std::size_t>(total), AffinePlaneOrInfinity::infinity());
  if (w.empty()) return s;

  const KdTree tree(w.positions());
  auto* values = s.values.data();
  parallel_for(total, [&](Eigen::Index i) {
    values[static_cast<std::size_t>(i)] = detail::scan_at_with_tree(w, tree, grid.point(i), rho);
  });
  return s;
}

/// Compactified fiber distance between two scan values.
inline double fiber_distance(const AffinePlaneOrInfinity& a, const AffinePlaneOrInfinity& b) {
  if (!a.finite && !b.finite) return 0.0;
  if (!a.finite) return gauge(b.offset);
  if (!b.finite) return gauge(a.offset);
  const double direct = (a.offset - b.offset).norm() + grassmann_distance(a.plane, b.plane);
  return std::min(direct, gauge(a.offset) + gauge(b.offset));
}

/// Weighted sup of the fiber distances over the shared grid: w(p) = 1/(1+|p|).
inline double section_distance(const ScanSection& a, const ScanSection& b) {
  if (!a.grid.same_as(b.grid) || a.scan_radius != b.scan_radius)
    throw std::invalid_argument("scan sections use different grids");
  const Eigen::Index total = static_cast<Eigen::Index>(a.values.size());
  Eigen::VectorXd contrib(total);
  double* c = contrib.data();
  parallel_for(total, [&](Eigen::Index i) {
    c[i] = gauge(a.grid.point(i)) *
           fiber_distance(a.values[static_cast<std::size_t>(i)], b.values[static_cast<std::size_t>(i)]);
  });
  double worst = 0.0;
  for (Eigen::Index i = 0; i < total; ++i) worst = std::max(worst, contrib[i]);
  return worst;
}

inline double scan_metric(const DiscretizedSubmanifold& w, const DiscretizedSubmanifold& wp, const GridSpec& grid,
                          double rho) {
  if (w.ambient_dim() != wp.ambient_dim() || w.intrinsic_dim() != wp.intrinsic_dim())
    throw std::invalid_argument("manifolds have different ambient or intrinsic dimensions");
  return section_distance(scan_section(w, grid, rho), scan_section(wp, grid, rho));
}

/// One CSV row per grid point: basepoint, finite flag, offset, frame entries
/// (rows of the tangent basis); zeros for infinite values.
inline std::string scan_section_csv(const ScanSection& s, Eigen::Index ambient, Eigen::Index intrinsic) {
  std::string out;
  for (Eigen::Index a = 0; a < ambient; ++a) out += "p" + std::to_string(a + 1) + ",";
  out += "finite";
  for (Eigen::Index a = 0; a < ambient; ++a) out += ",o" + std::to_string(a + 1);
  for (Eigen::Index j = 0; j < intrinsic; ++j)
    for (Eigen::Index a = 0; a < ambient; ++a) out += ",f" + std::to_string(j + 1) + std::to_string(a + 1);
  out += "\n";

  for (std::size_t i = 0; i < s.values.size(); ++i) {
    const Eigen::VectorXd p = s.grid.point(static_cast<Eigen::Index>(i));
    for (Eigen::Index a = 0; a < ambient; ++a) out += format_double(p[a]) + ",";
    const auto& v = s.values[i];
    out += v.finite ? "1" : "0";
    for (Eigen::Index a = 0; a < ambient; ++a)
      out += "," + format_double(v.finite ? v.offset[a] : 0.0);
    for (Eigen::Index j = 0; j < intrinsic; ++j)
      for (Eigen::Index a = 0; a < ambient; ++a)
        out += "," + format_double(v.finite ? v.plane.frame()(a, j) : 0.0);
    out += "\n";
  }
  return out;
}

}  // namespace submet
