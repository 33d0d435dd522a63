#pragma once

// Implementation for manifold.hpp. Include that header, not this one.

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>

namespace submet {

inline DiscretizedSubmanifold sphere_manifold(Eigen::Index ambient, double radius, Eigen::Index count,
                                              std::uint64_t seed) {
  if (ambient < 2) throw std::invalid_argument("sphere needs ambient dimension at least 2");
  if (radius <= 0.0) throw std::invalid_argument("sphere radius must be positive");
  if (count < 3) throw std::invalid_argument("sphere needs at least 3 samples");
  const Eigen::Index n = ambient, d = n - 1, m = count;

  if (n == 2) return circle_manifold(radius, Eigen::Vector2d::Zero(), m);

  Eigen::MatrixXd pos(n, m);
  std::vector<Eigen::MatrixXd> frames(static_cast<std::size_t>(m));
  Eigen::MatrixXd normals(n, m);

  double area;
  if (n == 3) {
    // Fibonacci lattice: near-uniform, fully deterministic.
    area = 4.0 * M_PI * radius * radius;
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (Eigen::Index i = 0; i < m; ++i) {
      const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(m);
      const double rxy = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * static_cast<double>(i);
      Eigen::Vector3d u(rxy * std::cos(phi), rxy * std::sin(phi), z);
      pos.col(i) = radius * u;
      frames[static_cast<std::size_t>(i)] = detail::complement_basis(u);
      normals.col(i) = u;
    }
  } else {
    // Uniform directions from normalized Gaussians; the engine output is
    // pinned by the standard, so runs are reproducible everywhere.
    area = 2.0 * std::pow(M_PI, 0.5 * static_cast<double>(n)) / std::tgamma(0.5 * static_cast<double>(n)) *
           std::pow(radius, static_cast<double>(d));
    std::mt19937_64 gen(seed ^ 0x9e3779b97f4a7c15ULL);
    auto gaussian = [&]() {
      double u1 = detail::canonical_unit(gen());
      const double u2 = detail::canonical_unit(gen());
      if (u1 <= 0.0) u1 = 0x1.0p-53;
      return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    };
    for (Eigen::Index i = 0; i < m; ++i) {
      Eigen::VectorXd g(n);
      do {
        for (Eigen::Index k = 0; k < n; ++k) g[k] = gaussian();
      } while (g.norm() < 1e-12);
      const Eigen::VectorXd u = g / g.norm();
      pos.col(i) = radius * u;
      frames[static_cast<std::size_t>(i)] = detail::complement_basis(u);
      normals.col(i) = u;
    }
  }

  Eigen::VectorXd weights = Eigen::VectorXd::Constant(m, area / static_cast<double>(m));
  auto w = DiscretizedSubmanifold::from_samples(d, std::move(pos), std::move(frames), std::move(weights), 0.0);
  w.set_resolution(estimate_resolution(w));
  NormalShiftField field;
  field.normals = std::move(normals);
  field.shift_coeffs = Eigen::MatrixXd::Constant(d, m, 1.0 / radius);
  field.injectivity_radius = radius;
  w.set_shift_field(std::move(field));
  return w;
}

namespace detail {

struct ParamCells {
  Eigen::MatrixXd coords;    // d x m parameter points
  Eigen::VectorXd measures;  // exact cell d-volumes, summing to the disc/segment measure
  double spacing = 0.0;      // max cell diameter
};

// Centered partition of the segment [-extent, extent] (d = 1) or of the disc
// of that radius (d = 2, concentric rings with exact areas).
inline ParamCells disc_cells(Eigen::Index dim, double extent, Eigen::Index count) {
  if (extent <= 0.0) throw std::invalid_argument("extent must be positive");
  if (count < 1) throw std::invalid_argument("need at least one sample");
  ParamCells out;
  if (dim == 1) {
    const double step = 2.0 * extent / static_cast<double>(count);
    out.coords.resize(1, count);
    for (Eigen::Index i = 0; i < count; ++i)
      out.coords(0, i) = -extent + (static_cast<double>(i) + 0.5) * step;
    out.measures = Eigen::VectorXd::Constant(count, step);
    out.spacing = step;
    return out;
  }
  if (dim != 2) throw std::invalid_argument("parameter sampling supports intrinsic dimension 1 or 2");

  const Eigen::Index rings = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::sqrt(static_cast<double>(count))));
  // Cumulative sample targets proportional to ring areas; differences stay
  // nonnegative and telescope to exactly `count`.
  std::vector<Eigen::Index> per_ring(static_cast<std::size_t>(rings));
  Eigen::Index prev = 0;
  for (Eigen::Index k = 1; k <= rings; ++k) {
    const double frac = static_cast<double>(k * k) / static_cast<double>(rings * rings);
    const Eigen::Index cum = (k == rings) ? count : static_cast<Eigen::Index>(std::llround(frac * static_cast<double>(count)));
    per_ring[static_cast<std::size_t>(k - 1)] = cum - prev;
    prev = cum;
  }

  out.coords.resize(2, count);
  out.measures.resize(count);
  Eigen::Index at = 0;
  for (Eigen::Index k = 1; k <= rings; ++k) {
    const Eigen::Index mk = per_ring[static_cast<std::size_t>(k - 1)];
    if (mk == 0) continue;
    const double r_lo = extent * static_cast<double>(k - 1) / static_cast<double>(rings);
    const double r_hi = extent * static_cast<double>(k) / static_cast<double>(rings);
    const double rho = 0.5 * (r_lo + r_hi);
    const double ring_area = M_PI * (r_hi * r_hi - r_lo * r_lo);
    for (Eigen::Index j = 0; j < mk; ++j, ++at) {
      const double th = 2.0 * M_PI * (static_cast<double>(j) + 0.5) / static_cast<double>(mk);
      out.coords.col(at) = rho * Eigen::Vector2d(std::cos(th), std::sin(th));
      out.measures[at] = ring_area / static_cast<double>(mk);
    }
    out.spacing = std::max({out.spacing, r_hi - r_lo, 2.0 * M_PI * rho / static_cast<double>(mk)});
  }
  return out;
}

// Unit normal spanning the complement of a frame's column span (codim 1),
// oriented so its first clearly nonzero component is positive.
inline Eigen::VectorXd codim1_normal(const Eigen::MatrixXd& frame) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(frame);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::VectorXd nrm = q.col(frame.rows() - 1);
  for (Eigen::Index i = 0; i < nrm.size(); ++i) {
    if (std::abs(nrm[i]) > 1e-9) {
      if (nrm[i] < 0.0) nrm = -nrm;
      break;
    }
  }
  return nrm;
}

}  // namespace detail

inline DiscretizedSubmanifold affine_plane_manifold(Eigen::Index ambient, Eigen::Index dim,
                                                    const Eigen::VectorXd& base, const Eigen::MatrixXd& frame,
                                                    double extent, Eigen::Index count) {
  if (base.size() != ambient || frame.rows() != ambient || frame.cols() != dim)
    throw std::invalid_argument("affine plane base/frame shapes do not match the ambient dimension");
  GrassPlane plane(frame);  // validates orthonormality
  auto cells = detail::disc_cells(dim, extent, count);

  const Eigen::Index m = cells.coords.cols();
  Eigen::MatrixXd pos(ambient, m);
  for (Eigen::Index i = 0; i < m; ++i) pos.col(i) = base + frame * cells.coords.col(i);
  std::vector<Eigen::MatrixXd> frames(static_cast<std::size_t>(m), frame);

  auto w = DiscretizedSubmanifold::from_samples(dim, std::move(pos), std::move(frames), std::move(cells.measures),
                                                cells.spacing);
  if (ambient - dim == 1) {
    NormalShiftField field;
    const Eigen::VectorXd nrm = detail::codim1_normal(frame);
    field.normals = nrm.replicate(1, m);
    field.shift_coeffs = Eigen::MatrixXd::Zero(dim, m);
    field.has_curve_order = (dim == 1);
    w.set_shift_field(std::move(field));
  }
  return w;
}

inline DiscretizedSubmanifold linear_graph_manifold(Eigen::Index ambient, Eigen::Index dim,
                                                    const Eigen::MatrixXd& coeffs, const Eigen::VectorXd& offset,
                                                    double extent, Eigen::Index count) {
  const Eigen::Index codim = ambient - dim;
  if (coeffs.rows() != codim || coeffs.cols() != dim || offset.size() != codim)
    throw std::invalid_argument("graph coefficient shapes do not match the ambient dimension");
  auto cells = detail::disc_cells(dim, extent, count);

  Eigen::MatrixXd span(ambient, dim);
  span.topRows(dim) = Eigen::MatrixXd::Identity(dim, dim);
  span.bottomRows(codim) = coeffs;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(span);
  const Eigen::MatrixXd frame = qr.householderQ() * Eigen::MatrixXd::Identity(ambient, dim);

  const double gram = (Eigen::MatrixXd::Identity(dim, dim) + coeffs.transpose() * coeffs).determinant();
  const double scale = std::sqrt(gram);
  const double stretch = std::sqrt(1.0 + Eigen::JacobiSVD<Eigen::MatrixXd>(coeffs).singularValues()[0] *
                                             Eigen::JacobiSVD<Eigen::MatrixXd>(coeffs).singularValues()[0]);

  const Eigen::Index m = cells.coords.cols();
  Eigen::MatrixXd pos(ambient, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    pos.col(i).head(dim) = cells.coords.col(i);
    pos.col(i).tail(codim) = coeffs * cells.coords.col(i) + offset;
  }
  std::vector<Eigen::MatrixXd> frames(static_cast<std::size_t>(m), frame);
  Eigen::VectorXd weights = cells.measures * scale;

  auto w = DiscretizedSubmanifold::from_samples(dim, std::move(pos), std::move(frames), std::move(weights),
                                                cells.spacing * stretch);
  if (codim == 1) {
    NormalShiftField field;
    Eigen::VectorXd nrm(ambient);
    nrm.head(dim) = -coeffs.transpose();
    nrm[ambient - 1] = 1.0;
    nrm /= nrm.norm();
    field.normals = nrm.replicate(1, m);
    field.shift_coeffs = Eigen::MatrixXd::Zero(dim, m);
    field.has_curve_order = (dim == 1);
    w.set_shift_field(std::move(field));
  }
  return w;
}

inline DiscretizedSubmanifold torus_manifold(double major, double minor, Eigen::Index count_major,
                                             Eigen::Index count_minor) {
  if (!(major > minor && minor > 0.0)) throw std::invalid_argument("torus needs major radius > minor radius > 0");
  if (count_major < 3 || count_minor < 3) throw std::invalid_argument("torus needs at least 3 samples per circle");
  const Eigen::Index m = count_major * count_minor;
  const double dth = 2.0 * M_PI / static_cast<double>(count_major);
  const double dph = 2.0 * M_PI / static_cast<double>(count_minor);

  Eigen::MatrixXd pos(3, m);
  std::vector<Eigen::MatrixXd> frames(static_cast<std::size_t>(m));
  Eigen::VectorXd weights(m);
  Eigen::MatrixXd normals(3, m);
  Eigen::MatrixXd coeffs(2, m);

  Eigen::Index at = 0;
  for (Eigen::Index i = 0; i < count_major; ++i) {
    const double th = dth * (static_cast<double>(i) + 0.5);
    const double ct = std::cos(th), st = std::sin(th);
    for (Eigen::Index j = 0; j < count_minor; ++j, ++at) {
      const double ph = dph * (static_cast<double>(j) + 0.5);
      const double cp = std::cos(ph), sp = std::sin(ph);
      pos.col(at) = Eigen::Vector3d((major + minor * cp) * ct, (major + minor * cp) * st, minor * sp);
      Eigen::MatrixXd f(3, 2);
      f.col(0) = Eigen::Vector3d(-st, ct, 0.0);
      f.col(1) = Eigen::Vector3d(-ct * sp, -st * sp, cp);
      frames[static_cast<std::size_t>(at)] = std::move(f);
      // Exact integral of the area element over the (theta, phi) cell.
      weights[at] = minor * dth * (major * dph + minor * (std::sin(ph + 0.5 * dph) - std::sin(ph - 0.5 * dph)));
      normals.col(at) = Eigen::Vector3d(ct * cp, st * cp, sp);
      coeffs.col(at) = Eigen::Vector2d(cp / (major + minor * cp), 1.0 / minor);
    }
  }

  auto w = DiscretizedSubmanifold::from_samples(2, std::move(pos), std::move(frames), std::move(weights),
                                                std::max(dth * (major + minor), dph * minor));
  NormalShiftField field;
  field.normals = std::move(normals);
  field.shift_coeffs = std::move(coeffs);
  field.injectivity_radius = std::min(minor, major - minor);
  w.set_shift_field(std::move(field));
  return w;
}

// ---------------------------------------------------------------------------
// normal-field reconstruction and perturbations
// ---------------------------------------------------------------------------

inline NormalShiftField reconstruct_shift_field(const DiscretizedSubmanifold& w) {
  if (w.intrinsic_dim() != 1 || w.ambient_dim() != 2)
    throw std::invalid_argument(
        "normal field reconstruction requires a plane curve (intrinsic dimension 1, codimension 1)");
  const Eigen::Index m = w.sample_count();
  if (m == 0) throw std::invalid_argument("cannot reconstruct a normal field without samples");

  NormalShiftField field;
  field.normals.resize(2, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Vector2d t = w.tangent_frame(i).col(0);
    field.normals.col(i) = Eigen::Vector2d(-t[1], t[0]);
  }

  const double h = w.resolution() > 0.0 ? w.resolution() : estimate_resolution(w);
  KdTree tree(w.positions());
  std::vector<std::vector<Eigen::Index>> adj(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j : tree.within_radius(w.position(i), 3.0 * h))
      if (j != i) adj[static_cast<std::size_t>(i)].push_back(j);
  }

  const Eigen::VectorXd centroid =
      w.sample_count() > 0 ? Eigen::VectorXd(w.positions() * w.weights() / w.total_weight())
                           : Eigen::VectorXd::Zero(2);

  auto lex_orient = [&](Eigen::Index i) {
    Eigen::Vector2d nrm = field.normals.col(i);
    for (Eigen::Index k = 0; k < 2; ++k) {
      if (std::abs(nrm[k]) > 1e-9) {
        if (nrm[k] < 0.0) field.normals.col(i) = -nrm;
        return;
      }
    }
  };

  std::vector<char> visited(static_cast<std::size_t>(m), 0);
  for (;;) {
    Eigen::Index seed = -1;
    double best = -1.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (visited[static_cast<std::size_t>(i)]) continue;
      const double nn = w.position(i).norm();
      if (nn > best) {
        best = nn;
        seed = i;
      }
    }
    if (seed < 0) break;

    const Eigen::VectorXd v = w.position(seed) - centroid;
    const double vn = v.norm();
    bool oriented = false;
    if (vn > 1e-9 * (1.0 + w.position(seed).norm())) {
      const double s = field.normals.col(seed).dot(v / vn);
      if (std::abs(s) > 1e-9) {
        if (s < 0.0) field.normals.col(seed) *= -1.0;
        oriented = true;
      }
    }
    if (!oriented) lex_orient(seed);

    std::deque<Eigen::Index> queue{seed};
    visited[static_cast<std::size_t>(seed)] = 1;
    while (!queue.empty()) {
      const Eigen::Index i = queue.front();
      queue.pop_front();
      for (Eigen::Index j : adj[static_cast<std::size_t>(i)]) {
        if (visited[static_cast<std::size_t>(j)]) continue;
        visited[static_cast<std::size_t>(j)] = 1;
        if (field.normals.col(i).dot(field.normals.col(j)) < 0.0) field.normals.col(j) *= -1.0;
        queue.push_back(j);
      }
    }
  }

  // Signed curvature from the circumcircle through each sample and its two
  // nearest neighbours; exact on circles, zero on lines.
  field.shift_coeffs = Eigen::MatrixXd::Zero(1, m);
  double inj = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < m; ++i) {
    auto& nb = adj[static_cast<std::size_t>(i)];
    std::sort(nb.begin(), nb.end(), [&](Eigen::Index a, Eigen::Index b) {
      const double da = (w.position(a) - w.position(i)).norm();
      const double db = (w.position(b) - w.position(i)).norm();
      return da != db ? da < db : a < b;
    });
    if (nb.size() < 2) continue;
    const Eigen::Vector2d a = w.position(nb[0]) - w.position(i);
    const Eigen::Vector2d b = w.position(nb[1]) - w.position(i);
    const double area2 = std::abs(a[0] * b[1] - a[1] * b[0]);
    const double abc = a.norm() * b.norm() * (a - b).norm();
    if (abc <= 0.0) continue;
    double kappa = 2.0 * area2 / abc;
    const double side = (a + b).dot(field.normals.col(i));
    if (side > 0.0) kappa = -kappa;
    field.shift_coeffs(0, i) = kappa;
    if (std::abs(kappa) > 1e-12) inj = std::min(inj, 1.0 / std::abs(kappa));
  }
  field.injectivity_radius = inj;
  return field;
}

namespace detail {

inline DiscretizedSubmanifold constant_shift(const DiscretizedSubmanifold& w, const NormalShiftField& field,
                                             double delta) {
  const Eigen::Index m = w.sample_count();
  Eigen::MatrixXd pos = w.positions() + delta * field.normals;
  std::vector<Eigen::MatrixXd> frames(static_cast<std::size_t>(m));
  Eigen::VectorXd weights(m);
  double stretch = 1.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    frames[static_cast<std::size_t>(i)] = w.tangent_frame(i);
    double factor = 1.0;
    for (Eigen::Index j = 0; j < field.shift_coeffs.rows(); ++j) {
      const double f = 1.0 + delta * field.shift_coeffs(j, i);
      if (f <= 0.0) throw std::invalid_argument("normal shift exceeds tube radius");
      factor *= f;
      stretch = std::max(stretch, f);
    }
    weights[i] = w.weight(i) * factor;
  }
  auto out = DiscretizedSubmanifold::from_samples(w.intrinsic_dim(), std::move(pos), std::move(frames),
                                                  std::move(weights), w.resolution() * stretch, w.domain());
  if (w.has_labels()) out.set_labels(w.labels());

  NormalShiftField next;
  next.normals = field.normals;
  next.shift_coeffs = field.shift_coeffs.array() / (1.0 + delta * field.shift_coeffs.array());
  double inj = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < next.shift_coeffs.size(); ++i) {
    const double k = std::abs(next.shift_coeffs.data()[i]);
    if (k > 1e-12) inj = std::min(inj, 1.0 / k);
  }
  next.injectivity_radius = inj;
  next.has_curve_order = field.has_curve_order;
  next.closed_curve = field.closed_curve;
  out.set_shift_field(std::move(next));
  return out;
}

inline const NormalShiftField& require_field(const DiscretizedSubmanifold& w,
                                             std::optional<NormalShiftField>& storage) {
  if (w.shift_field()) return *w.shift_field();
  storage = reconstruct_shift_field(w);
  return *storage;
}

}  // namespace detail

inline DiscretizedSubmanifold perturb_normal(const DiscretizedSubmanifold& w, double delta, PerturbMode mode) {
  std::optional<NormalShiftField> storage;
  const NormalShiftField& field = detail::require_field(w, storage);
  if (std::abs(delta) >= field.injectivity_radius)
    throw std::invalid_argument("normal shift exceeds tube radius");

  if (mode == PerturbMode::ConstantShift) return detail::constant_shift(w, field, delta);

  if (w.intrinsic_dim() != 1 || !field.has_curve_order)
    throw std::invalid_argument("smooth bump perturbation needs an ordered curve (intrinsic dimension 1)");
  const Eigen::Index m = w.sample_count();
  if (m < 3) throw std::invalid_argument("smooth bump perturbation needs at least 3 samples");

  Eigen::MatrixXd pos(w.ambient_dim(), m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double z = (static_cast<double>(i) + 0.5) / static_cast<double>(m);
    const double bump = std::exp(1.0 - 1.0 / (4.0 * z * (1.0 - z)));
    pos.col(i) = w.position(i) + delta * bump * field.normals.col(i);
  }

  const bool closed = field.closed_curve;
  auto wrap = [&](Eigen::Index i) { return (i % m + m) % m; };
  std::vector<Eigen::MatrixXd> frames(static_cast<std::size_t>(m));
  Eigen::VectorXd weights(m);
  double hmax = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    Eigen::Index lo = i - 1, hi = i + 1;
    if (!closed) {
      lo = std::max<Eigen::Index>(0, lo);
      hi = std::min<Eigen::Index>(m - 1, hi);
    }
    Eigen::VectorXd t = pos.col(wrap(hi)) - pos.col(wrap(lo));
    const double tn = t.norm();
    if (tn <= 0.0) throw std::invalid_argument("smooth bump perturbation produced a degenerate tangent");
    frames[static_cast<std::size_t>(i)] = t / tn;

    const double fwd = closed || i + 1 < m ? (pos.col(wrap(i + 1)) - pos.col(i)).norm() : 0.0;
    const double bwd = closed || i > 0 ? (pos.col(i) - pos.col(wrap(i - 1))).norm() : 0.0;
    weights[i] = 0.5 * (fwd + bwd);
    hmax = std::max({hmax, fwd, bwd});
  }

  auto out = DiscretizedSubmanifold::from_samples(1, std::move(pos), std::move(frames), std::move(weights), hmax,
                                                  w.domain());
  if (w.has_labels()) out.set_labels(w.labels());
  return out;
}

inline DiscretizedSubmanifold parallel_copies(const DiscretizedSubmanifold& w, double delta) {
  if (delta <= 0.0) throw std::invalid_argument("parallel copies need a positive offset");
  std::optional<NormalShiftField> storage;
  const NormalShiftField& field = detail::require_field(w, storage);
  if (delta >= field.injectivity_radius) throw std::invalid_argument("normal shift exceeds tube radius");

  const DiscretizedSubmanifold plus = detail::constant_shift(w, field, delta);
  const DiscretizedSubmanifold minus = detail::constant_shift(w, field, -delta);

  const Eigen::Index m = w.sample_count();
  Eigen::MatrixXd pos(w.ambient_dim(), 2 * m);
  pos.leftCols(m) = plus.positions();
  pos.rightCols(m) = minus.positions();
  std::vector<Eigen::MatrixXd> frames;
  frames.reserve(static_cast<std::size_t>(2 * m));
  for (Eigen::Index i = 0; i < m; ++i) frames.push_back(plus.tangent_frame(i));
  for (Eigen::Index i = 0; i < m; ++i) frames.push_back(minus.tangent_frame(i));
  Eigen::VectorXd weights(2 * m);
  weights.head(m) = plus.weights();
  weights.tail(m) = minus.weights();

  auto out = DiscretizedSubmanifold::from_samples(w.intrinsic_dim(), std::move(pos), std::move(frames),
                                                  std::move(weights),
                                                  std::max(plus.resolution(), minus.resolution()), w.domain());
  if (w.has_labels()) {
    Eigen::MatrixXd labels(w.label_count(), 2 * m);
    labels.leftCols(m) = w.labels();
    labels.rightCols(m) = w.labels();
    out.set_labels(std::move(labels));
  }
  return out;
}

inline DiscretizedSubmanifold rotated(const DiscretizedSubmanifold& w, const Eigen::MatrixXd& rot) {
  const Eigen::Index n = w.ambient_dim();
  if (rot.rows() != n || rot.cols() != n ||
      (rot.transpose() * rot - Eigen::MatrixXd::Identity(n, n)).norm() > 1e-9 * static_cast<double>(n))
    throw std::invalid_argument("rotation matrix must be orthogonal");

  Eigen::MatrixXd pos = rot * w.positions();
  std::vector<Eigen::MatrixXd> frames(static_cast<std::size_t>(w.sample_count()));
  for (Eigen::Index i = 0; i < w.sample_count(); ++i)
    frames[static_cast<std::size_t>(i)] = rot * w.tangent_frame(i);

  Domain dom = w.domain();
  if (dom.kind == Domain::Kind::Ball) {
    dom.center = rot * dom.center;
  } else if (dom.kind == Domain::Kind::Box) {
    throw std::invalid_argument("cannot rotate a box domain");
  }

  auto out = DiscretizedSubmanifold::from_samples(w.intrinsic_dim(), std::move(pos), std::move(frames),
                                                  w.weights(), w.resolution(), std::move(dom));
  if (w.has_labels()) out.set_labels(w.labels());
  if (w.shift_field()) {
    NormalShiftField field = *w.shift_field();
    field.normals = rot * field.normals;
    out.set_shift_field(std::move(field));
  }
  return out;
}

/// Image under an invertible linear map: positions mapped, tangent frames
/// re-orthonormalized, weights rescaled by the tangent-plane volume stretch.
inline DiscretizedSubmanifold linear_image(const DiscretizedSubmanifold& w, const Eigen::MatrixXd& map) {
  const Eigen::Index n = w.ambient_dim();
  if (map.rows() != n || map.cols() != n) throw std::invalid_argument("linear map must be square ambient x ambient");
  if (std::abs(map.determinant()) < 1e-12) throw std::invalid_argument("linear map must be invertible");
  if (w.domain().kind != Domain::Kind::AllSpace)
    throw std::invalid_argument("cannot map a restricted domain through a general linear map");

  const Eigen::Index m = w.sample_count();
  Eigen::MatrixXd pos = map * w.positions();
  std::vector<Eigen::MatrixXd> frames(static_cast<std::size_t>(m));
  Eigen::VectorXd weights = w.weights();
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::MatrixXd image = map * w.tangent_frame(i);
    weights[i] *= std::sqrt((image.transpose() * image).determinant());
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(image);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, w.intrinsic_dim());
    // keep the basis aligned with the mapped frame so exact inputs stay exact
    for (Eigen::Index c = 0; c < q.cols(); ++c)
      if (q.col(c).dot(image.col(c)) < 0.0) q.col(c) = -q.col(c);
    frames[static_cast<std::size_t>(i)] = std::move(q);
  }

  auto out = DiscretizedSubmanifold::from_samples(w.intrinsic_dim(), std::move(pos), std::move(frames),
                                                  std::move(weights), 0.0);
  out.set_resolution(estimate_resolution(out));
  if (w.has_labels()) out.set_labels(w.labels());
  return out;
}

}  // namespace submet
