#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <submet/geometry.hpp>
#include <submet/spatial.hpp>

namespace submet {

inline constexpr double kRadiusSlack = 1e-12;  // absorbs one-ulp norm jitter in radius cuts

/// Open subset U of R^n a submanifold is proper in.
struct Domain {
  enum class Kind { AllSpace, Ball, Box };

  Kind kind = Kind::AllSpace;
  Eigen::VectorXd center;
  double radius = 0.0;
  Eigen::VectorXd lo, hi;

  static Domain all() { return Domain{}; }

  static Domain ball(Eigen::VectorXd c, double r) {
    if (r <= 0.0) throw std::invalid_argument("domain ball radius must be positive");
    Domain d;
    d.kind = Kind::Ball;
    d.center = std::move(c);
    d.radius = r;
    return d;
  }

  static Domain box(Eigen::VectorXd lo, Eigen::VectorXd hi) {
    if (lo.size() != hi.size() || ((hi - lo).array() <= 0.0).any())
      throw std::invalid_argument("domain box must have positive extents");
    Domain d;
    d.kind = Kind::Box;
    d.lo = std::move(lo);
    d.hi = std::move(hi);
    return d;
  }

  bool is_all() const { return kind == Kind::AllSpace; }

  /// Distance from x to the complement of the domain; 0 outside, +inf for all of R^n.
  double distance_to_complement(const Eigen::VectorXd& x) const {
    switch (kind) {
      case Kind::AllSpace:
        return std::numeric_limits<double>::infinity();
      case Kind::Ball:
        return std::max(0.0, radius - (x - center).norm());
      case Kind::Box: {
        double m = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < x.size(); ++i) m = std::min({m, x[i] - lo[i], hi[i] - x[i]});
        return std::max(0.0, m);
      }
    }
    return 0.0;
  }
};

/// Compact region K of R^n that membership predicates are evaluated over.
struct CompactRegion {
  enum class Kind { Ball, Box };

  Kind kind = Kind::Ball;
  Eigen::VectorXd center;
  double radius = 0.0;
  Eigen::VectorXd lo, hi;

  static CompactRegion ball(Eigen::VectorXd c, double r) {
    if (r <= 0.0) throw std::invalid_argument("region ball radius must be positive");
    CompactRegion k;
    k.kind = Kind::Ball;
    k.center = std::move(c);
    k.radius = r;
    return k;
  }

  static CompactRegion box(Eigen::VectorXd lo, Eigen::VectorXd hi) {
    if (lo.size() != hi.size() || ((hi - lo).array() < 0.0).any())
      throw std::invalid_argument("region box must have nonnegative extents");
    CompactRegion k;
    k.kind = Kind::Box;
    k.lo = std::move(lo);
    k.hi = std::move(hi);
    return k;
  }

  Eigen::Index ambient_dim() const { return kind == Kind::Ball ? center.size() : lo.size(); }

  bool contains(const Eigen::VectorXd& x) const {
    if (kind == Kind::Ball) return (x - center).norm() <= radius;
    return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
  }

  CompactRegion dilated(double pad) const {
    CompactRegion k = *this;
    if (kind == Kind::Ball) {
      k.radius += pad;
    } else {
      k.lo.array() -= pad;
      k.hi.array() += pad;
    }
    return k;
  }
};

/// Exact normal data attached to generator-backed manifolds; lets normal
/// perturbations move samples along true normals with exact weight scaling.
struct NormalShiftField {
  Eigen::MatrixXd normals;       // n x m unit normals, orthogonal to the tangent frames
  Eigen::MatrixXd shift_coeffs;  // d x m: shifting by delta scales the weight by prod_j (1 + delta * coeff)
  double injectivity_radius = std::numeric_limits<double>::infinity();
  bool has_curve_order = false;  // d == 1 and samples are consecutive along the curve
  bool closed_curve = false;
};

/// Weighted tangent-framed point sample of a d-submanifold of R^n.
class DiscretizedSubmanifold {
 public:
  DiscretizedSubmanifold() = default;

  DiscretizedSubmanifold(Eigen::Index ambient, Eigen::Index intrinsic) {
    check_dims(ambient, intrinsic);
    ambient_ = ambient;
    intrinsic_ = intrinsic;
    positions_.resize(ambient, 0);
    weights_.resize(0);
  }

  static DiscretizedSubmanifold from_samples(Eigen::Index intrinsic, Eigen::MatrixXd positions,
                                             std::vector<Eigen::MatrixXd> frames, Eigen::VectorXd weights,
                                             double resolution, Domain domain = Domain::all()) {
    const Eigen::Index n = positions.rows();
    const Eigen::Index m = positions.cols();
    check_dims(n, intrinsic);
    if (static_cast<Eigen::Index>(frames.size()) != m || weights.size() != m)
      throw std::invalid_argument("sample arrays must agree in length");
    DiscretizedSubmanifold w(n, intrinsic);
    w.positions_ = std::move(positions);
    w.tangents_.reserve(frames.size());
    for (auto& f : frames) {
      if (f.rows() != n || f.cols() != intrinsic) throw std::invalid_argument("tangent frame has wrong shape");
      w.tangents_.emplace_back(std::move(f));
    }
    if ((weights.array() <= 0.0).any()) throw std::invalid_argument("weights must be positive");
    w.weights_ = std::move(weights);
    w.resolution_ = resolution;
    w.domain_ = std::move(domain);
    return w;
  }

  Eigen::Index ambient_dim() const { return ambient_; }
  Eigen::Index intrinsic_dim() const { return intrinsic_; }
  Eigen::Index sample_count() const { return positions_.cols(); }
  bool empty() const { return sample_count() == 0; }

  const Eigen::MatrixXd& positions() const { return positions_; }
  Eigen::VectorXd position(Eigen::Index i) const { return positions_.col(i); }
  const GrassPlane& tangent_plane(Eigen::Index i) const { return tangents_[static_cast<std::size_t>(i)]; }
  const Eigen::MatrixXd& tangent_frame(Eigen::Index i) const { return tangent_plane(i).frame(); }
  double weight(Eigen::Index i) const { return weights_[i]; }
  const Eigen::VectorXd& weights() const { return weights_; }

  GaussPoint gauss_point(Eigen::Index i) const { return GaussPoint{position(i), tangent_plane(i)}; }

  double resolution() const { return resolution_; }
  void set_resolution(double h) { resolution_ = h; }

  const Domain& domain() const { return domain_; }
  void set_domain(Domain d) { domain_ = std::move(d); }

  const std::optional<NormalShiftField>& shift_field() const { return shift_field_; }
  void set_shift_field(std::optional<NormalShiftField> f) { shift_field_ = std::move(f); }

  Eigen::Index label_count() const { return labels_.rows(); }
  bool has_labels() const { return labels_.rows() > 0; }
  const Eigen::MatrixXd& labels() const { return labels_; }
  double label(Eigen::Index i) const {
    if (!has_labels()) throw std::logic_error("missing labels");
    return labels_(0, i);
  }

  void set_labels(Eigen::MatrixXd labels) {
    if (labels.size() > 0 && labels.cols() != sample_count())
      throw std::invalid_argument("label count must match sample count");
    labels_ = std::move(labels);
  }

  double total_weight() const { return weights_.size() == 0 ? 0.0 : weights_.sum(); }

  double max_position_norm() const {
    double m = 0.0;
    for (Eigen::Index i = 0; i < sample_count(); ++i) m = std::max(m, positions_.col(i).norm());
    return m;
  }

 private:
  static void check_dims(Eigen::Index ambient, Eigen::Index intrinsic) {
    if (ambient < 1 || intrinsic < 0 || intrinsic >= ambient)
      throw std::invalid_argument("need 0 <= intrinsic dim < ambient dim");
  }

  Eigen::Index ambient_ = 0;
  Eigen::Index intrinsic_ = 0;
  Eigen::MatrixXd positions_;          // n x m, one column per sample
  std::vector<GrassPlane> tangents_;   // m frames
  Eigen::VectorXd weights_;            // m positive local d-volume elements
  Eigen::MatrixXd labels_;             // k x m, k == 0 when unlabeled
  double resolution_ = 0.0;            // h: sampling scale
  Domain domain_ = Domain::all();
  std::optional<NormalShiftField> shift_field_;
};

/// A submanifold carrying one real label per sample (label row 0).
using LabeledSubmanifold = DiscretizedSubmanifold;

// ---------------------------------------------------------------------------
// generators
// ---------------------------------------------------------------------------

inline DiscretizedSubmanifold empty_manifold(Eigen::Index ambient, Eigen::Index intrinsic) {
  return DiscretizedSubmanifold(ambient, intrinsic);
}

inline DiscretizedSubmanifold circle_manifold(double radius, const Eigen::Vector2d& center, Eigen::Index count) {
  if (radius <= 0.0) throw std::invalid_argument("circle radius must be positive");
  if (count < 3) throw std::invalid_argument("circle needs at least 3 samples");
  Eigen::MatrixXd pos(2, count);
  std::vector<Eigen::MatrixXd> frames(static_cast<std::size_t>(count));
  Eigen::VectorXd weights = Eigen::VectorXd::Constant(count, 2.0 * M_PI * radius / static_cast<double>(count));
  Eigen::MatrixXd normals(2, count);
  for (Eigen::Index i = 0; i < count; ++i) {
    const double t = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(count);
    const double c = std::cos(t), s = std::sin(t);
    pos.col(i) = center + radius * Eigen::Vector2d(c, s);
    frames[static_cast<std::size_t>(i)] = Eigen::Vector2d(-s, c);
    normals.col(i) = Eigen::Vector2d(c, s);
  }
  auto w = DiscretizedSubmanifold::from_samples(1, std::move(pos), std::move(frames), std::move(weights),
                                                2.0 * M_PI * radius / static_cast<double>(count));
  NormalShiftField field;
  field.normals = std::move(normals);
  field.shift_coeffs = Eigen::MatrixXd::Constant(1, count, 1.0 / radius);
  field.injectivity_radius = radius;
  field.has_curve_order = true;
  field.closed_curve = true;
  w.set_shift_field(std::move(field));
  return w;
}

namespace detail {

// Orthonormal basis of the complement of unit vector u, via full QR.
inline Eigen::MatrixXd complement_basis(const Eigen::VectorXd& u) {
  const Eigen::Index n = u.size();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(u);
  Eigen::MatrixXd q = qr.householderQ();
  return q.rightCols(n - 1);
}

// Deterministic uniform doubles in [0,1) from raw 64-bit draws.
inline double canonical_unit(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

}  // namespace detail

DiscretizedSubmanifold sphere_manifold(Eigen::Index ambient, double radius, Eigen::Index count,
                                       std::uint64_t seed = 0);

inline DiscretizedSubmanifold affine_plane_manifold(Eigen::Index ambient, Eigen::Index dim,
                                                    const Eigen::VectorXd& base, const Eigen::MatrixXd& frame,
                                                    double extent, Eigen::Index count);

inline DiscretizedSubmanifold linear_graph_manifold(Eigen::Index ambient, Eigen::Index dim,
                                                    const Eigen::MatrixXd& coeffs, const Eigen::VectorXd& offset,
                                                    double extent, Eigen::Index count);

inline DiscretizedSubmanifold torus_manifold(double major, double minor, Eigen::Index count_major,
                                             Eigen::Index count_minor);

// ---------------------------------------------------------------------------
// perturbations
// ---------------------------------------------------------------------------

enum class PerturbMode { ConstantShift, SmoothBump };

NormalShiftField reconstruct_shift_field(const DiscretizedSubmanifold& w);
DiscretizedSubmanifold perturb_normal(const DiscretizedSubmanifold& w, double delta,
                                      PerturbMode mode = PerturbMode::ConstantShift);
DiscretizedSubmanifold parallel_copies(const DiscretizedSubmanifold& w, double delta);
DiscretizedSubmanifold rotated(const DiscretizedSubmanifold& w, const Eigen::MatrixXd& rot);
DiscretizedSubmanifold linear_image(const DiscretizedSubmanifold& w, const Eigen::MatrixXd& map);

// ---------------------------------------------------------------------------
// restriction
// ---------------------------------------------------------------------------

enum class RestrictMode { OriginBall, DomainAware };

struct Restriction {
  std::vector<Eigen::Index> kept;
  double volume = 0.0;
};

/// Samples surviving the radius-r cut, plus their total weight. OriginBall
/// keeps |x| <= r; DomainAware keeps max(|x|, 1/dist(x, R^n \ U)) <= r.
inline Restriction restrict_to_radius(const DiscretizedSubmanifold& w, double r,
                                      RestrictMode mode = RestrictMode::OriginBall) {
  if (mode == RestrictMode::DomainAware && w.domain().is_all())
    throw std::invalid_argument("domain-aware restriction requires a proper domain");
  Restriction out;
  const double cut = r + kRadiusSlack * std::max(1.0, std::abs(r));
  for (Eigen::Index i = 0; i < w.sample_count(); ++i) {
    double key = w.positions().col(i).norm();
    if (mode == RestrictMode::DomainAware) {
      const double margin = w.domain().distance_to_complement(w.position(i));
      if (margin <= 0.0) continue;
      key = std::max(key, 1.0 / margin);
    }
    if (key <= cut) {
      out.kept.push_back(i);
      out.volume += w.weight(i);
    }
  }
  return out;
}

inline DiscretizedSubmanifold submanifold_subset(const DiscretizedSubmanifold& w,
                                                 const std::vector<Eigen::Index>& kept) {
  const Eigen::Index m = static_cast<Eigen::Index>(kept.size());
  Eigen::MatrixXd pos(w.ambient_dim(), m);
  std::vector<Eigen::MatrixXd> frames(kept.size());
  Eigen::VectorXd weights(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    pos.col(k) = w.position(kept[static_cast<std::size_t>(k)]);
    frames[static_cast<std::size_t>(k)] = w.tangent_frame(kept[static_cast<std::size_t>(k)]);
    weights[k] = w.weight(kept[static_cast<std::size_t>(k)]);
  }
  auto out = DiscretizedSubmanifold::from_samples(w.intrinsic_dim(), std::move(pos), std::move(frames),
                                                  std::move(weights), w.resolution(), w.domain());
  if (w.has_labels()) {
    Eigen::MatrixXd labels(w.label_count(), m);
    for (Eigen::Index k = 0; k < m; ++k) labels.col(k) = w.labels().col(kept[static_cast<std::size_t>(k)]);
    out.set_labels(std::move(labels));
  }
  return out;
}

/// Largest nearest-neighbour gap between samples; the resolution estimate for
/// manifolds whose generator metadata is gone (file round trips, meshes).
inline double estimate_resolution(const DiscretizedSubmanifold& w) {
  if (w.sample_count() < 2) return 0.0;
  KdTree tree(w.positions());
  double h = 0.0;
  for (Eigen::Index i = 0; i < w.sample_count(); ++i) {
    const Eigen::VectorXd q = w.position(i);
    const auto hit = tree.min_cost(q, [&](Eigen::Index j) {
      return j == i ? std::numeric_limits<double>::infinity() : (q - tree.points().col(j)).norm();
    });
    if (hit.index >= 0) h = std::max(h, hit.cost);
  }
  return h;
}

}  // namespace submet

#include <submet/detail/manifold_impl.hpp>
