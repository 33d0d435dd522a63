#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <submet/format.hpp>
#include <submet/manifold.hpp>

namespace submet {

// Text format, one sample per line after the two header lines:
//
//   MFD 1
//   dim <d> ambient <n> count <m> labels <k>
//   <n floats position> <d rows of n floats: tangent basis> <weight> <k floats labels>
//
// '#' starts a comment, blank lines are ignored.

inline void save_mfd(const DiscretizedSubmanifold& w, std::ostream& os) {
  os << "MFD 1\n";
  os << "dim " << w.intrinsic_dim() << " ambient " << w.ambient_dim() << " count " << w.sample_count()
     << " labels " << w.label_count() << "\n";
  for (Eigen::Index i = 0; i < w.sample_count(); ++i) {
    std::string line;
    auto put = [&](double v) {
      if (!line.empty()) line += ' ';
      line += format_double(v);
    };
    for (Eigen::Index a = 0; a < w.ambient_dim(); ++a) put(w.positions()(a, i));
    const Eigen::MatrixXd& f = w.tangent_frame(i);
    for (Eigen::Index j = 0; j < w.intrinsic_dim(); ++j)
      for (Eigen::Index a = 0; a < w.ambient_dim(); ++a) put(f(a, j));
    put(w.weight(i));
    for (Eigen::Index l = 0; l < w.label_count(); ++l) put(w.labels()(l, i));
    os << line << "\n";
  }
}

inline void save_mfd(const DiscretizedSubmanifold& w, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error(path + ": cannot open for writing");
  save_mfd(w, os);
  if (!os) throw std::runtime_error(path + ": write failed");
}

namespace detail {

struct TokenLine {
  long long number = 0;
  std::vector<std::string> tokens;
};

inline std::vector<TokenLine> tokenize_lines(std::istream& is) {
  std::vector<TokenLine> out;
  std::string raw;
  long long line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ss(raw);
    TokenLine tl;
    tl.number = line_no;
    std::string tok;
    while (ss >> tok) tl.tokens.push_back(tok);
    if (!tl.tokens.empty()) out.push_back(std::move(tl));
  }
  return out;
}

[[noreturn]] inline void parse_fail(const std::string& name, long long line, const std::string& what) {
  throw std::runtime_error(name + ":" + std::to_string(line) + ": " + what);
}

inline double need_double(const std::string& name, const TokenLine& tl, std::size_t idx) {
  double v = 0.0;
  if (!parse_double(tl.tokens[idx], v)) parse_fail(name, tl.number, "invalid number '" + tl.tokens[idx] + "'");
  return v;
}

inline long long need_count(const std::string& name, const TokenLine& tl, std::size_t idx) {
  long long v = 0;
  if (!parse_index(tl.tokens[idx], v) || v < 0)
    parse_fail(name, tl.number, "invalid count '" + tl.tokens[idx] + "'");
  return v;
}

}  // namespace detail

inline DiscretizedSubmanifold load_mfd(std::istream& is, const std::string& name = "<stream>") {
  using detail::parse_fail;
  auto lines = detail::tokenize_lines(is);
  if (lines.empty()) throw std::runtime_error(name + ": empty file, expected header 'MFD 1'");

  std::size_t at = 0;
  {
    const auto& tl = lines[at++];
    if (tl.tokens.size() != 2 || tl.tokens[0] != "MFD" || tl.tokens[1] != "1")
      parse_fail(name, tl.number, "expected header 'MFD 1'");
  }
  if (at >= lines.size()) throw std::runtime_error(name + ": missing dimension header");
  long long d = 0, n = 0, m = 0, k = 0;
  {
    const auto& tl = lines[at++];
    const bool shape_ok = tl.tokens.size() == 8 && tl.tokens[0] == "dim" && tl.tokens[2] == "ambient" &&
                          tl.tokens[4] == "count" && tl.tokens[6] == "labels";
    if (!shape_ok) parse_fail(name, tl.number, "malformed dimension header, expected 'dim D ambient N count M labels K'");
    d = detail::need_count(name, tl, 1);
    n = detail::need_count(name, tl, 3);
    m = detail::need_count(name, tl, 5);
    k = detail::need_count(name, tl, 7);
    if (n < 1 || d < 0 || d >= n) parse_fail(name, tl.number, "need 0 <= dim < ambient");
    if (k > 1) parse_fail(name, tl.number, "labels must be 0 or 1");
  }

  const std::size_t per_line = static_cast<std::size_t>(n + d * n + 1 + k);
  Eigen::MatrixXd pos(n, m);
  std::vector<Eigen::MatrixXd> frames(static_cast<std::size_t>(m));
  Eigen::VectorXd weights(m);
  Eigen::MatrixXd labels(k, m);

  for (long long i = 0; i < m; ++i) {
    if (at >= lines.size())
      throw std::runtime_error(name + ": unexpected end of file, expected " + std::to_string(m) + " sample lines");
    const auto& tl = lines[at++];
    if (tl.tokens.size() != per_line)
      parse_fail(name, tl.number,
                 "expected " + std::to_string(per_line) + " values, got " + std::to_string(tl.tokens.size()));
    std::size_t c = 0;
    for (long long a = 0; a < n; ++a) pos(a, i) = detail::need_double(name, tl, c++);
    Eigen::MatrixXd f(n, d);
    for (long long j = 0; j < d; ++j)
      for (long long a = 0; a < n; ++a) f(a, j) = detail::need_double(name, tl, c++);
    const double defect = (f.transpose() * f - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff();
    if (d > 0 && defect > kFrameOrthonormalityTol)
      parse_fail(name, tl.number, "tangent frame not orthonormal (defect " + format_double(defect) + ")");
    frames[static_cast<std::size_t>(i)] = std::move(f);
    weights[i] = detail::need_double(name, tl, c++);
    if (!(weights[i] > 0.0)) parse_fail(name, tl.number, "weights must be positive");
    for (long long l = 0; l < k; ++l) labels(l, i) = detail::need_double(name, tl, c++);
  }
  if (at < lines.size()) parse_fail(name, lines[at].number, "unexpected trailing content");

  auto w = DiscretizedSubmanifold::from_samples(d, std::move(pos), std::move(frames), std::move(weights), 0.0);
  if (k > 0) w.set_labels(std::move(labels));
  w.set_resolution(estimate_resolution(w));
  return w;
}

inline DiscretizedSubmanifold load_mfd(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error(path + ": cannot open");
  return load_mfd(is, path);
}

// ---------------------------------------------------------------------------
// mesh ingestion
// ---------------------------------------------------------------------------

// Plain-text mesh:
//
//   PTS <m> <n>     followed by m lines of n floats
//   EDG <e>         followed by e lines "i j"        (required when dim == 1)
//   TRI <t>         followed by t lines "i j k"      (required when dim == 2)
//
// Vertex indices are 0-based. Tangent planes come from a PCA of each vertex's
// 1-ring, weights from evenly split incident cell measures.

inline DiscretizedSubmanifold ingest_mesh(std::istream& is, Eigen::Index dim, const std::string& name = "<stream>") {
  using detail::parse_fail;
  if (dim != 1 && dim != 2) throw std::invalid_argument("mesh ingestion supports intrinsic dimension 1 or 2");
  auto lines = detail::tokenize_lines(is);
  std::size_t at = 0;

  if (at >= lines.size() || lines[at].tokens.size() != 3 || lines[at].tokens[0] != "PTS")
    throw std::runtime_error(name + ": expected 'PTS <count> <ambient>' section");
  const long long m = detail::need_count(name, lines[at], 1);
  const long long n = detail::need_count(name, lines[at], 2);
  if (n <= dim) parse_fail(name, lines[at].number, "ambient dimension must exceed the intrinsic dimension");
  ++at;

  Eigen::MatrixXd pos(n, m);
  for (long long i = 0; i < m; ++i) {
    if (at >= lines.size()) throw std::runtime_error(name + ": unexpected end of file in PTS section");
    const auto& tl = lines[at++];
    if (tl.tokens.size() != static_cast<std::size_t>(n))
      parse_fail(name, tl.number, "expected " + std::to_string(n) + " coordinates");
    for (long long a = 0; a < n; ++a) pos(a, i) = detail::need_double(name, tl, static_cast<std::size_t>(a));
  }

  const char* section = dim == 1 ? "EDG" : "TRI";
  const std::size_t arity = dim == 1 ? 2 : 3;
  if (at >= lines.size() || lines[at].tokens.size() != 2 || lines[at].tokens[0] != section)
    throw std::runtime_error(name + ": expected '" + section + " <count>' section");
  const long long cells = detail::need_count(name, lines[at], 1);
  ++at;

  std::vector<std::array<long long, 3>> cell_idx(static_cast<std::size_t>(cells), {0, 0, 0});
  for (long long c = 0; c < cells; ++c) {
    if (at >= lines.size())
      throw std::runtime_error(name + ": unexpected end of file in " + std::string(section) + " section");
    const auto& tl = lines[at++];
    if (tl.tokens.size() != arity)
      parse_fail(name, tl.number, "expected " + std::to_string(arity) + " vertex indices");
    for (std::size_t s = 0; s < arity; ++s) {
      long long v = 0;
      if (!parse_index(tl.tokens[s], v) || v < 0 || v >= m)
        parse_fail(name, tl.number, "vertex index out of range '" + tl.tokens[s] + "'");
      cell_idx[static_cast<std::size_t>(c)][s] = v;
    }
  }
  if (at < lines.size()) parse_fail(name, lines[at].number, "unexpected trailing content");

  std::vector<std::vector<long long>> ring(static_cast<std::size_t>(m));
  Eigen::VectorXd weights = Eigen::VectorXd::Zero(m);
  double h = 0.0;
  auto link = [&](long long a, long long b) {
    auto& r = ring[static_cast<std::size_t>(a)];
    if (std::find(r.begin(), r.end(), b) == r.end()) r.push_back(b);
  };
  for (long long c = 0; c < cells; ++c) {
    const auto& v = cell_idx[static_cast<std::size_t>(c)];
    if (dim == 1) {
      const double len = (pos.col(v[0]) - pos.col(v[1])).norm();
      h = std::max(h, len);
      weights[v[0]] += 0.5 * len;
      weights[v[1]] += 0.5 * len;
      link(v[0], v[1]);
      link(v[1], v[0]);
    } else {
      const Eigen::VectorXd u = pos.col(v[1]) - pos.col(v[0]);
      const Eigen::VectorXd q = pos.col(v[2]) - pos.col(v[0]);
      const double area =
          0.5 * std::sqrt(std::max(0.0, u.squaredNorm() * q.squaredNorm() - u.dot(q) * u.dot(q)));
      for (int s = 0; s < 3; ++s) {
        weights[v[s]] += area / 3.0;
        h = std::max(h, (pos.col(v[s]) - pos.col(v[(s + 1) % 3])).norm());
        link(v[s], v[(s + 1) % 3]);
        link(v[s], v[(s + 2) % 3]);
      }
    }
  }

  std::vector<Eigen::MatrixXd> frames(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    const auto& r = ring[static_cast<std::size_t>(i)];
    if (r.empty()) throw std::runtime_error(name + ": vertex " + std::to_string(i) + " has a degenerate neighborhood");
    Eigen::MatrixXd cloud(n, static_cast<long long>(r.size()) + 1);
    cloud.col(0) = pos.col(i);
    for (std::size_t s = 0; s < r.size(); ++s) cloud.col(static_cast<long long>(s) + 1) = pos.col(r[s]);
    const Eigen::VectorXd mean = cloud.rowwise().mean();
    const Eigen::MatrixXd centered = cloud.colwise() - mean;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(centered * centered.transpose());
    const Eigen::VectorXd ev = es.eigenvalues();  // ascending
    const double scale = std::max(ev[n - 1], 1e-300);
    if (ev[n - dim] <= 1e-12 * scale)
      throw std::runtime_error(name + ": vertex " + std::to_string(i) + " has a degenerate neighborhood");
    Eigen::MatrixXd f(n, dim);
    for (Eigen::Index j = 0; j < dim; ++j) f.col(j) = es.eigenvectors().col(n - 1 - j);
    frames[static_cast<std::size_t>(i)] = std::move(f);
    if (!(weights[i] > 0.0)) throw std::runtime_error(name + ": vertex " + std::to_string(i) + " has zero weight");
  }

  return DiscretizedSubmanifold::from_samples(dim, std::move(pos), std::move(frames), std::move(weights), h);
}

inline DiscretizedSubmanifold ingest_mesh(const std::string& path, Eigen::Index dim) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error(path + ": cannot open");
  return ingest_mesh(is, dim, path);
}

}  // namespace submet
