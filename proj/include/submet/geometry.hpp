#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace submet {

inline constexpr double kFrameOrthonormalityTol = 1e-6;

namespace detail {

inline double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

// Deterministic total order on equally-sized matrices, used to canonicalize
// argument order so angle evaluation is bitwise symmetric.
inline bool lex_before(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double* pa = a.data();
  const double* pb = b.data();
  return std::lexicographical_compare(pa, pa + a.size(), pb, pb + b.size());
}

// Largest principal angle for column-orthonormal a, b of equal shape.
// Cosine route (acos of the smallest singular value of a^T b) is accurate for
// wide angles; for angles below pi/4 the sine route asin(sigma_max((I-aa^T)b))
// avoids the cancellation that makes acos useless near zero.
inline double principal_angle_ordered(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const Eigen::Index d = a.cols();
  if (d == 0) return 0.0;
  const Eigen::MatrixXd m = a.transpose() * b;
  double smin;
  if (d == 1) {
    smin = std::abs(m(0, 0));
  } else {
    smin = Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues().minCoeff();
  }
  smin = clamp01(smin);
  static const double kInvSqrt2 = std::sqrt(0.5);
  if (smin < kInvSqrt2) return std::acos(smin);
  const Eigen::MatrixXd r = b - a * m;
  double smax;
  if (d == 1) {
    smax = r.norm();
  } else {
    smax = Eigen::JacobiSVD<Eigen::MatrixXd>(r).singularValues().maxCoeff();
  }
  return std::asin(clamp01(smax));
}

}  // namespace detail

/// Largest principal angle between two equal-dimension subspaces of R^n, given
/// as column-orthonormal frames. Equals max over unit v in the first plane of
/// the angle to its best approximation in the second; lies in [0, pi/2].
template <typename DerivedA, typename DerivedB>
double largest_principal_angle(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("incompatible planes");
  Eigen::MatrixXd fa = a;
  Eigen::MatrixXd fb = b;
  if (detail::lex_before(fb, fa)) fa.swap(fb);
  // identical frames give exactly zero, so self-distances vanish instead of
  // picking up the ~1e-16 residual of the sine route
  if ((fa.array() == fb.array()).all()) return 0.0;
  return detail::principal_angle_ordered(fa, fb);
}

/// A d-plane through the origin in R^n, held as an n x d column-orthonormal frame.
class GrassPlane {
 public:
  GrassPlane() = default;

  explicit GrassPlane(Eigen::MatrixXd frame, double tol = kFrameOrthonormalityTol) : frame_(std::move(frame)) {
    if (frame_.rows() < 1 || frame_.cols() > frame_.rows()) throw std::invalid_argument("invalid plane dimensions");
    if (orthonormality_defect() > tol) throw std::invalid_argument("frame columns are not orthonormal");
  }

  /// Max absolute entry of frame^T frame - I.
  double orthonormality_defect() const {
    if (frame_.cols() == 0) return 0.0;
    Eigen::MatrixXd gram = frame_.transpose() * frame_;
    gram.diagonal().array() -= 1.0;
    return gram.cwiseAbs().maxCoeff();
  }

  Eigen::Index ambient_dim() const { return frame_.rows(); }
  Eigen::Index plane_dim() const { return frame_.cols(); }
  const Eigen::MatrixXd& frame() const { return frame_; }

 private:
  Eigen::MatrixXd frame_;
};

inline double grassmann_distance(const GrassPlane& a, const GrassPlane& b) {
  if (a.ambient_dim() != b.ambient_dim() || a.plane_dim() != b.plane_dim())
    throw std::invalid_argument("incompatible planes");
  return largest_principal_angle(a.frame(), b.frame());
}

/// A point of R^n x Gr_d(R^n): a position together with a tangent plane.
struct GaussPoint {
  Eigen::VectorXd position;
  GrassPlane plane;
};

/// Product distance d0 + d1: Euclidean offset plus largest principal angle.
inline double gauss_distance(const GaussPoint& a, const GaussPoint& b) {
  if (a.position.size() != b.position.size()) throw std::invalid_argument("incompatible ambient dimensions");
  return (a.position - b.position).norm() + grassmann_distance(a.plane, b.plane);
}

/// Damping gauge for the one-point compactification; 1-Lipschitz for d0.
inline double gauge(const Eigen::VectorXd& position) { return 1.0 / (1.0 + position.norm()); }
inline double gauge(const GaussPoint& p) { return gauge(p.position); }

/// A point of the one-point compactification of R^n x Gr_d(R^n).
class CompactifiedPoint {
 public:
  static CompactifiedPoint infinity() { return CompactifiedPoint(); }
  static CompactifiedPoint at(GaussPoint p) {
    CompactifiedPoint c;
    c.infinite_ = false;
    c.point_ = std::move(p);
    return c;
  }

  bool is_infinity() const { return infinite_; }
  const GaussPoint& point() const {
    if (infinite_) throw std::logic_error("point at infinity has no coordinates");
    return point_;
  }

 private:
  bool infinite_ = true;
  GaussPoint point_;
};

/// Metric on the compactification: min(d, g(a)+g(b)) between finite points,
/// g(a) to infinity, 0 between two copies of infinity.
inline double compactified_distance(const CompactifiedPoint& a, const CompactifiedPoint& b) {
  if (a.is_infinity() && b.is_infinity()) return 0.0;
  if (a.is_infinity()) return gauge(b.point());
  if (b.is_infinity()) return gauge(a.point());
  return std::min(gauss_distance(a.point(), b.point()), gauge(a.point()) + gauge(b.point()));
}

/// Finite sample of a closed subset of the compactified R^n x Gr_d(R^n).
/// contains_infinity marks sets of the form A u {infinity}.
struct ClosedSetSample {
  std::vector<GaussPoint> points;
  bool contains_infinity = false;

  bool empty() const { return points.empty() && !contains_infinity; }
};

double hausdorff_distance(const ClosedSetSample& a, const ClosedSetSample& b);

}  // namespace submet

#include <submet/detail/hausdorff_impl.hpp>
