#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <deque>
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

struct Displacement {
  double norm = 0.0;
  double slope = 0.0;
};

/// Nearest-point displacement split into the offset length and the tangent
/// slope tan(d1); the slope saturates to +inf for orthogonal tangents.
inline Displacement displacement(const GaussPoint& x, const GaussPoint& y) {
  Displacement d;
  d.norm = (x.position - y.position).norm();
  const double angle = grassmann_distance(x.plane, y.plane);
  d.slope = angle >= 0.5 * M_PI - 1e-12 ? std::numeric_limits<double>::infinity() : std::tan(angle);
  return d;
}

struct NeighborhoodSpec {
  CompactRegion region;
  double eps = 0.0;
  double label_eps = 0.0;  // ms: tolerance on sheet label sums; ss: sup-norm ball radius
};

struct PairRecord {
  Eigen::Index source = -1;  // sample index into the candidate manifold
  Eigen::Index target = -1;  // index of its nearest base sample
  double norm = 0.0;
  double slope = 0.0;
  bool source_in_region = false;  // candidate sample inside K itself
};

struct SheetDecomposition {
  double tube_radius = 0.0;
  std::vector<PairRecord> pairs;                // one per candidate sample inside the tube
  Eigen::VectorXi sheet_count;                  // per base sample
  std::vector<Eigen::Index> orphans;            // candidate samples in K outside every tube fiber
  std::vector<Eigen::Index> region_samples;     // base samples in K dilated by h
  std::vector<int> component;                   // adjacency component per base sample, -1 outside
  bool coverage_ok = false;
  bool local_diffeo_ok = false;
};

/// Pair every candidate sample with its nearest base sample within the tube,
/// count sheets over the base, and check covering-map style consistency.
inline SheetDecomposition tubular_projection(const DiscretizedSubmanifold& w, const DiscretizedSubmanifold& wp,
                                             const CompactRegion& region, double tube_radius) {
  if (w.ambient_dim() != wp.ambient_dim())
    throw std::invalid_argument("manifolds have different ambient dimensions");
  if (region.ambient_dim() != w.ambient_dim()) throw std::invalid_argument("region has the wrong ambient dimension");
  if (!(tube_radius > 0.0)) throw std::invalid_argument("tube radius must be positive");
  if (w.shift_field() && tube_radius >= w.shift_field()->injectivity_radius)
    throw std::invalid_argument("tube radius exceeds the injectivity radius");

  SheetDecomposition out;
  out.tube_radius = tube_radius;
  const Eigen::Index m = w.sample_count();
  const Eigen::Index mp = wp.sample_count();
  out.sheet_count = Eigen::VectorXi::Zero(m);
  const CompactRegion dilated = region.dilated(w.resolution());

  std::optional<KdTree> tree;
  if (m > 0) tree.emplace(w.positions());

  std::vector<std::optional<PairRecord>> candidate(static_cast<std::size_t>(mp));
  parallel_for(mp, [&](Eigen::Index y) {
    const Eigen::VectorXd pos = wp.position(y);
    const bool in_region = region.contains(pos);
    if (!tree) {
      if (in_region) {
        PairRecord pr;
        pr.source = y;
        pr.source_in_region = true;
        candidate[static_cast<std::size_t>(y)] = pr;  // recorded as an orphan below
      }
      return;
    }
    const auto hit = tree->nearest(pos);
    PairRecord pr;
    pr.source = y;
    pr.source_in_region = in_region;
    if (hit.index >= 0 && hit.cost <= tube_radius && dilated.contains(w.position(hit.index))) {
      pr.target = hit.index;
      const Displacement d = displacement(w.gauss_point(hit.index), wp.gauss_point(y));
      pr.norm = d.norm;
      pr.slope = d.slope;
      candidate[static_cast<std::size_t>(y)] = pr;
    } else if (in_region) {
      candidate[static_cast<std::size_t>(y)] = pr;  // unpaired but inside K: orphan
    }
  });

  for (Eigen::Index y = 0; y < mp; ++y) {
    const auto& pr = candidate[static_cast<std::size_t>(y)];
    if (!pr) continue;
    if (pr->target < 0) {
      out.orphans.push_back(y);
    } else {
      out.pairs.push_back(*pr);
      out.sheet_count[pr->target] += 1;
    }
  }

  for (Eigen::Index i = 0; i < m; ++i)
    if (dilated.contains(w.position(i))) out.region_samples.push_back(i);

  out.coverage_ok = true;
  for (Eigen::Index i : out.region_samples)
    if (out.sheet_count[i] < 1) out.coverage_ok = false;

  // Adjacency components of the base samples inside the dilated region, linked
  // at scale 3h; the sheet count must be constant on each component.
  out.component.assign(static_cast<std::size_t>(m), -1);
  if (!out.region_samples.empty()) {
    const double link = 3.0 * w.resolution();
    int comp = 0;
    for (Eigen::Index seed : out.region_samples) {
      if (out.component[static_cast<std::size_t>(seed)] >= 0) continue;
      out.component[static_cast<std::size_t>(seed)] = comp;
      std::deque<Eigen::Index> queue{seed};
      while (!queue.empty()) {
        const Eigen::Index i = queue.front();
        queue.pop_front();
        for (Eigen::Index j : tree->within_radius(w.position(i), link)) {
          if (out.component[static_cast<std::size_t>(j)] >= 0) continue;
          if (!dilated.contains(w.position(j))) continue;
          out.component[static_cast<std::size_t>(j)] = comp;
          queue.push_back(j);
        }
      }
      ++comp;
    }
  }
  out.local_diffeo_ok = true;
  {
    std::vector<int> comp_count;
    for (Eigen::Index i : out.region_samples) {
      const int c = out.component[static_cast<std::size_t>(i)];
      if (c >= static_cast<int>(comp_count.size())) comp_count.resize(static_cast<std::size_t>(c) + 1, -1);
      if (comp_count[static_cast<std::size_t>(c)] < 0) {
        comp_count[static_cast<std::size_t>(c)] = out.sheet_count[i];
      } else if (comp_count[static_cast<std::size_t>(c)] != out.sheet_count[i]) {
        out.local_diffeo_ok = false;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// membership predicates
// ---------------------------------------------------------------------------

struct MembershipClause {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct MembershipReport {
  bool member = false;
  std::vector<MembershipClause> clauses;
  SheetDecomposition decomposition;

  std::string text() const {
    std::string out;
    for (const auto& c : clauses) {
      out += c.pass ? "PASS " : "FAIL ";
      out += c.name;
      if (!c.pass && !c.detail.empty()) out += ": " + c.detail;
      out += "\n";
    }
    return out;
  }
};

namespace detail {

enum class SheetRule { SingleSheet, LocallyConstant };

inline MembershipReport membership_core(const DiscretizedSubmanifold& w, const DiscretizedSubmanifold& wp,
                                        const NeighborhoodSpec& spec, SheetRule rule) {
  if (!(spec.eps > 0.0)) throw std::invalid_argument("membership tolerance must be positive");
  const double rho = std::max(spec.eps, 2.0 * w.resolution());
  MembershipReport rep;
  rep.decomposition = tubular_projection(w, wp, spec.region, rho);
  const SheetDecomposition& dec = rep.decomposition;

  {
    MembershipClause c{"no orphans", dec.orphans.empty(), ""};
    if (!c.pass)
      c.detail = std::to_string(dec.orphans.size()) + " candidate sample(s) in K unmatched by the tube";
    rep.clauses.push_back(std::move(c));
  }
  {
    Eigen::Index uncovered = 0;
    for (Eigen::Index i : dec.region_samples)
      if (dec.sheet_count[i] < 1) ++uncovered;
    MembershipClause c{"coverage", uncovered == 0, ""};
    if (!c.pass) c.detail = std::to_string(uncovered) + " base sample(s) in K not hit";
    rep.clauses.push_back(std::move(c));
  }
  if (rule == SheetRule::SingleSheet) {
    Eigen::Index bad = 0;
    int worst = 1;
    for (Eigen::Index i : dec.region_samples)
      if (dec.sheet_count[i] != 1) {
        ++bad;
        worst = std::max(worst, dec.sheet_count[i]);
      }
    MembershipClause c{"single sheet", bad == 0, ""};
    if (!c.pass)
      c.detail = std::to_string(bad) + " base sample(s) with sheet count != 1 (max " + std::to_string(worst) + ")";
    rep.clauses.push_back(std::move(c));
  } else {
    MembershipClause c{"covering sheets", dec.local_diffeo_ok, ""};
    if (!c.pass) c.detail = "sheet count varies within an adjacency component";
    rep.clauses.push_back(std::move(c));
  }
  {
    double worst = 0.0;
    Eigen::Index bad = 0;
    for (const auto& pr : dec.pairs) {
      if (!pr.source_in_region) continue;
      const double total = pr.norm + pr.slope;
      if (!(total < spec.eps)) {
        ++bad;
        worst = std::max(worst, total);
      }
    }
    MembershipClause c{"displacement bound", bad == 0, ""};
    if (!c.pass)
      c.detail = std::to_string(bad) + " pair(s) with norm + slope >= eps (worst " + format_double(worst) + ")";
    rep.clauses.push_back(std::move(c));
  }

  rep.member = true;
  for (const auto& c : rep.clauses) rep.member = rep.member && c.pass;
  return rep;
}

inline void require_labels(const DiscretizedSubmanifold& w, const DiscretizedSubmanifold& wp) {
  if (!w.has_labels() || !wp.has_labels()) throw std::invalid_argument("missing labels");
}

}  // namespace detail

/// Global-section neighborhood: candidate equals a single graph over the base
/// within K, with norm + slope < eps.
inline MembershipReport in_gs_neighborhood(const DiscretizedSubmanifold& w, const DiscretizedSubmanifold& wp,
                                           const NeighborhoodSpec& spec) {
  return detail::membership_core(w, wp, spec, detail::SheetRule::SingleSheet);
}

/// Local-section neighborhood: as gs but any covering with locally constant
/// sheet count is allowed.
inline MembershipReport in_ls_neighborhood(const DiscretizedSubmanifold& w, const DiscretizedSubmanifold& wp,
                                           const NeighborhoodSpec& spec) {
  return detail::membership_core(w, wp, spec, detail::SheetRule::LocallyConstant);
}

/// Measured-section neighborhood: ls clauses plus sheet label sums matching
/// the base labels within label_eps.
inline MembershipReport in_ms_neighborhood(const LabeledSubmanifold& w, const LabeledSubmanifold& wp,
                                           const NeighborhoodSpec& spec) {
  detail::require_labels(w, wp);
  if (!(spec.label_eps > 0.0)) throw std::invalid_argument("label tolerance must be positive");
  MembershipReport rep = detail::membership_core(w, wp, spec, detail::SheetRule::LocallyConstant);

  Eigen::VectorXd sums = Eigen::VectorXd::Zero(w.sample_count());
  for (const auto& pr : rep.decomposition.pairs) sums[pr.target] += wp.label(pr.source);
  double worst = 0.0;
  Eigen::Index bad = 0;
  for (Eigen::Index i : rep.decomposition.region_samples) {
    if (rep.decomposition.sheet_count[i] < 1) continue;
    const double dev = std::abs(w.label(i) - sums[i]);
    if (!(dev < spec.label_eps)) {
      ++bad;
      worst = std::max(worst, dev);
    }
  }
  MembershipClause c{"label sums", bad == 0, ""};
  if (!c.pass)
    c.detail = std::to_string(bad) + " base sample(s) with |label - sheet sum| >= tolerance (worst " +
               format_double(worst) + ")";
  rep.member = rep.member && c.pass;
  rep.clauses.push_back(std::move(c));
  return rep;
}

/// Sup-norm labeled neighborhood: gs clauses plus per-pair label agreement
/// within label_eps.
inline MembershipReport in_ss_neighborhood(const LabeledSubmanifold& w, const LabeledSubmanifold& wp,
                                           const NeighborhoodSpec& spec) {
  detail::require_labels(w, wp);
  if (!(spec.label_eps > 0.0)) throw std::invalid_argument("label tolerance must be positive");
  MembershipReport rep = detail::membership_core(w, wp, spec, detail::SheetRule::SingleSheet);

  double worst = 0.0;
  Eigen::Index bad = 0;
  for (const auto& pr : rep.decomposition.pairs) {
    if (!pr.source_in_region) continue;
    const double dev = std::abs(wp.label(pr.source) - w.label(pr.target));
    if (!(dev < spec.label_eps)) {
      ++bad;
      worst = std::max(worst, dev);
    }
  }
  MembershipClause c{"label sup", bad == 0, ""};
  if (!c.pass)
    c.detail = std::to_string(bad) + " pair(s) with label deviation >= tolerance (worst " + format_double(worst) + ")";
  rep.member = rep.member && c.pass;
  rep.clauses.push_back(std::move(c));
  return rep;
}

}  // namespace submet
