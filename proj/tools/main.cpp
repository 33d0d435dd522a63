#include <CLI11.hpp>

#include <clocale>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <submet/submet.hpp>

namespace {

using namespace submet;

std::vector<double> parse_csv_doubles(const std::string& text, const char* what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string tok = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    double v = 0.0;
    if (!parse_double(tok, v)) throw std::runtime_error(std::string(what) + ": invalid number '" + tok + "'");
    out.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw std::runtime_error(std::string(what) + ": no values given");
  return out;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

AxisSpec parse_axis(const std::string& text) {
  const std::size_t c1 = text.find(':');
  const std::size_t c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
  AxisSpec axis;
  if (c2 == std::string::npos || !parse_double(text.substr(0, c1), axis.lo) ||
      !parse_double(text.substr(c1 + 1, c2 - c1 - 1), axis.hi) || !parse_double(text.substr(c2 + 1), axis.step))
    throw std::runtime_error("--grid expects lo:hi:step, got '" + text + "'");
  return axis;
}

CompactRegion parse_region(Eigen::Index ambient, const std::string& kbox, const std::string& center_text,
                           double kradius) {
  if (!kbox.empty()) {
    std::vector<double> lo, hi;
    std::size_t start = 0;
    while (start <= kbox.size()) {
      const std::size_t comma = kbox.find(',', start);
      const std::string tok = kbox.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      const std::size_t colon = tok.find(':');
      double a = 0.0, b = 0.0;
      if (colon == std::string::npos || !parse_double(tok.substr(0, colon), a) ||
          !parse_double(tok.substr(colon + 1), b))
        throw std::runtime_error("--kbox expects lo:hi pairs separated by commas, got '" + tok + "'");
      lo.push_back(a);
      hi.push_back(b);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (static_cast<Eigen::Index>(lo.size()) != ambient)
      throw std::runtime_error("--kbox needs one lo:hi pair per ambient axis");
    return CompactRegion::box(to_vector(lo), to_vector(hi));
  }
  Eigen::VectorXd center = Eigen::VectorXd::Zero(ambient);
  if (!center_text.empty()) {
    center = to_vector(parse_csv_doubles(center_text, "--center"));
    if (center.size() != ambient) throw std::runtime_error("--center needs one coordinate per ambient axis");
  }
  return CompactRegion::ball(std::move(center), kradius);
}

GridSpec scan_grid_or_default(const std::vector<std::string>& axis_texts, Eigen::Index ambient, double max_norm) {
  if (axis_texts.empty()) return default_scan_grid(ambient, max_norm);
  GridSpec g;
  for (const auto& t : axis_texts) g.axes.push_back(parse_axis(t));
  if (static_cast<Eigen::Index>(g.axes.size()) != ambient)
    throw std::runtime_error("--grid needs one lo:hi:step per ambient axis");
  return g;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error(path + ": cannot open for writing");
  os << content;
  if (!os) throw std::runtime_error(path + ": write failed");
}

// tilt by slope m: the image of the linear section x1 -> m*x1, realized as a
// shear so the samples stay in one-to-one correspondence with the base
Eigen::MatrixXd shear_in_first_plane(Eigen::Index n, double slope) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(n, n);
  s(1, 0) = slope;
  return s;
}

struct GenArgs {
  std::string kind, output, center, base_point, frame, coeffs, offset, radii, counts, base_file, mode = "constant";
  double radius = 1.0, extent = 2.0, delta = 0.0;
  long long samples = 512, ambient = 0, dim = 0;
};

DiscretizedSubmanifold run_generator(const GenArgs& a, std::uint64_t seed) {
  if (a.kind == "circle") {
    Eigen::Vector2d center(0.0, 0.0);
    if (!a.center.empty()) {
      const auto c = parse_csv_doubles(a.center, "--center");
      if (c.size() != 2) throw std::runtime_error("--center for a circle needs 2 coordinates");
      center = Eigen::Vector2d(c[0], c[1]);
    }
    return circle_manifold(a.radius, center, a.samples);
  }
  if (a.kind == "sphere") {
    return sphere_manifold(a.ambient > 0 ? a.ambient : 3, a.radius, a.samples, seed);
  }
  if (a.kind == "plane" || a.kind == "graph") {
    const Eigen::Index n = a.ambient > 0 ? a.ambient : 2;
    const Eigen::Index d = a.dim > 0 ? a.dim : 1;
    if (a.kind == "plane") {
      Eigen::VectorXd base = Eigen::VectorXd::Zero(n);
      if (!a.base_point.empty()) {
        base = to_vector(parse_csv_doubles(a.base_point, "--base-point"));
        if (base.size() != n) throw std::runtime_error("--base-point needs one coordinate per ambient axis");
      }
      Eigen::MatrixXd frame = Eigen::MatrixXd::Identity(n, d);
      if (!a.frame.empty()) {
        const auto f = parse_csv_doubles(a.frame, "--frame");
        if (static_cast<Eigen::Index>(f.size()) != n * d)
          throw std::runtime_error("--frame needs ambient*dim entries (row-major)");
        for (Eigen::Index r = 0; r < n; ++r)
          for (Eigen::Index c = 0; c < d; ++c) frame(r, c) = f[static_cast<std::size_t>(r * d + c)];
      }
      return affine_plane_manifold(n, d, base, frame, a.extent, a.samples);
    }
    Eigen::MatrixXd coeffs = Eigen::MatrixXd::Zero(n - d, d);
    if (!a.coeffs.empty()) {
      const auto c = parse_csv_doubles(a.coeffs, "--coeffs");
      if (static_cast<Eigen::Index>(c.size()) != (n - d) * d)
        throw std::runtime_error("--coeffs needs (ambient-dim)*dim entries (row-major)");
      for (Eigen::Index r = 0; r < n - d; ++r)
        for (Eigen::Index k = 0; k < d; ++k) coeffs(r, k) = c[static_cast<std::size_t>(r * d + k)];
    }
    Eigen::VectorXd offset = Eigen::VectorXd::Zero(n - d);
    if (!a.offset.empty()) {
      offset = to_vector(parse_csv_doubles(a.offset, "--offset"));
      if (offset.size() != n - d) throw std::runtime_error("--offset needs ambient-dim entries");
    }
    return linear_graph_manifold(n, d, coeffs, offset, a.extent, a.samples);
  }
  if (a.kind == "torus") {
    double major = 2.0, minor = 0.5;
    if (!a.radii.empty()) {
      const auto r = parse_csv_doubles(a.radii, "--radii");
      if (r.size() != 2) throw std::runtime_error("--radii expects 'major,minor'");
      major = r[0];
      minor = r[1];
    }
    Eigen::Index cmaj = 48, cmin = 24;
    if (!a.counts.empty()) {
      const auto c = parse_csv_doubles(a.counts, "--counts");
      if (c.size() != 2) throw std::runtime_error("--counts expects 'major,minor'");
      cmaj = static_cast<Eigen::Index>(c[0]);
      cmin = static_cast<Eigen::Index>(c[1]);
    }
    return torus_manifold(major, minor, cmaj, cmin);
  }
  if (a.kind == "empty") {
    return empty_manifold(a.ambient > 0 ? a.ambient : 2, a.dim > 0 ? a.dim : 1);
  }
  if (a.kind == "parallel-copies" || a.kind == "perturb") {
    if (a.base_file.empty()) throw std::runtime_error("--base is required for " + a.kind);
    const DiscretizedSubmanifold base = load_mfd(a.base_file);
    if (a.kind == "parallel-copies") return parallel_copies(base, a.delta);
    if (a.mode == "constant") return perturb_normal(base, a.delta, PerturbMode::ConstantShift);
    if (a.mode == "bump") return perturb_normal(base, a.delta, PerturbMode::SmoothBump);
    throw std::runtime_error("--mode must be constant or bump");
  }
  throw std::runtime_error("unknown generator '" + a.kind +
                           "' (expected circle|sphere|plane|graph|torus|empty|parallel-copies|perturb)");
}

}  // namespace

int main(int argc, char** argv) {
  std::setlocale(LC_ALL, "C");
  CLI::App app{"distances, neighborhoods, and scans for discretized submanifolds"};
  app.require_subcommand(1);

  int threads = 1;
  long long grid_points = 512;
  double r_max = 0.0;
  std::uint64_t seed = 0;
  app.add_option("--threads", threads, "worker threads (never changes output bytes)");
  app.add_option("--grid-points", grid_points, "radial grid size for the volume graphs");
  app.add_option("--rmax", r_max, "radial truncation (0: auto, 1.5 x max sample norm)");
  app.add_option("--seed", seed, "seed for randomized generators");

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "generate a manifold and write an MFD file");
  gen->fallthrough();
  gen->add_option("kind", gen_args.kind, "circle|sphere|plane|graph|torus|empty|parallel-copies|perturb")->required();
  gen->add_option("--radius", gen_args.radius, "circle/sphere radius");
  gen->add_option("--center", gen_args.center, "circle center 'x,y'");
  gen->add_option("--samples", gen_args.samples, "sample count");
  gen->add_option("--ambient", gen_args.ambient, "ambient dimension");
  gen->add_option("--dim", gen_args.dim, "intrinsic dimension");
  gen->add_option("--extent", gen_args.extent, "parameter radius for plane/graph sampling");
  gen->add_option("--base-point", gen_args.base_point, "affine plane base point (csv)");
  gen->add_option("--frame", gen_args.frame, "affine plane frame, row-major ambient x dim (csv)");
  gen->add_option("--coeffs", gen_args.coeffs, "graph coefficients, row-major (ambient-dim) x dim (csv)");
  gen->add_option("--offset", gen_args.offset, "graph offset (csv)");
  gen->add_option("--radii", gen_args.radii, "torus 'major,minor'");
  gen->add_option("--counts", gen_args.counts, "torus grid 'major,minor'");
  gen->add_option("--base", gen_args.base_file, "base MFD file for parallel-copies/perturb");
  gen->add_option("--delta", gen_args.delta, "normal offset for parallel-copies/perturb");
  gen->add_option("--mode", gen_args.mode, "perturb mode: constant|bump");
  gen->add_option("-o,--output", gen_args.output, "output MFD path")->required();

  std::string dist_a, dist_b, dist_metric = "psi";
  std::vector<std::string> dist_grid;
  double dist_rho = 1.0;
  auto* dist = app.add_subcommand("dist", "distance report between two manifolds");
  dist->fallthrough();
  dist->add_option("a", dist_a, "first MFD file")->required();
  dist->add_option("b", dist_b, "second MFD file")->required();
  dist->add_option("--metric", dist_metric, "psi|scan");
  dist->add_option("--grid", dist_grid, "scan grid axis lo:hi:step (repeat per axis)");
  dist->add_option("--rho", dist_rho, "scan radius");

  std::string mem_a, mem_b, mem_kind = "gs", mem_kbox, mem_center;
  double mem_eps = 0.0, mem_kradius = 2.0, mem_label_eps = 0.0;
  auto* member = app.add_subcommand("member", "neighborhood membership test");
  member->fallthrough();
  member->add_option("a", mem_a, "base MFD file")->required();
  member->add_option("b", mem_b, "candidate MFD file")->required();
  member->add_option("--kind", mem_kind, "gs|ls|ms|ss");
  member->add_option("--eps", mem_eps, "displacement tolerance")->required();
  member->add_option("--center", mem_center, "region ball center (csv)");
  member->add_option("--kradius", mem_kradius, "region ball radius");
  member->add_option("--kbox", mem_kbox, "region box lo:hi per axis, comma separated");
  member->add_option("--label-eps", mem_label_eps, "label tolerance for ms/ss");

  std::string conv_family, conv_base, conv_deltas, conv_kbox, conv_center, conv_svg, conv_out;
  double conv_eps = 0.5, conv_kradius = 2.0, conv_rho = 1.0;
  auto* converge = app.add_subcommand("converge", "distance and membership columns over a family of offsets");
  converge->fallthrough();
  converge->add_option("--family", conv_family, "normal|parallel-copies|tilt")->required();
  converge->add_option("--base", conv_base, "base MFD file")->required();
  converge->add_option("--deltas", conv_deltas, "comma-separated offsets")->required();
  converge->add_option("--eps", conv_eps, "membership tolerance");
  converge->add_option("--center", conv_center, "region ball center (csv)");
  converge->add_option("--kradius", conv_kradius, "region ball radius");
  converge->add_option("--kbox", conv_kbox, "region box lo:hi per axis");
  converge->add_option("--rho", conv_rho, "scan radius");
  converge->add_option("--svg", conv_svg, "write a log-log plot of the distance columns");
  converge->add_option("-o,--output", conv_out, "CSV path (default: stdout)");

  std::string scan_file, scan_out;
  std::vector<std::string> scan_grid;
  double scan_rho = 1.0;
  auto* scan = app.add_subcommand("scan", "evaluate the scan section on a grid");
  scan->fallthrough();
  scan->add_option("manifold", scan_file, "MFD file")->required();
  scan->add_option("--grid", scan_grid, "axis lo:hi:step (repeat per axis)");
  scan->add_option("--rho", scan_rho, "scan radius");
  scan->add_option("-o,--output", scan_out, "CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    set_thread_count(threads);

    if (gen->parsed()) {
      const DiscretizedSubmanifold w = run_generator(gen_args, seed);
      save_mfd(w, gen_args.output);
      std::string line = "samples " + std::to_string(w.sample_count()) + " total_weight " +
                         format_double(w.total_weight()) + "\n";
      std::fputs(line.c_str(), stdout);
      return 0;
    }

    if (dist->parsed()) {
      const DiscretizedSubmanifold a = load_mfd(dist_a);
      const DiscretizedSubmanifold b = load_mfd(dist_b);
      std::string line;
      if (dist_metric == "psi") {
        GrWOptions opts;
        opts.grid_points = grid_points;
        opts.r_max = r_max;
        line = gr_w_distance(a, b, opts).csv_row() + "\n";
      } else if (dist_metric == "scan") {
        const GridSpec grid = scan_grid_or_default(dist_grid, a.ambient_dim(),
                                                   std::max(a.max_position_norm(), b.max_position_norm()));
        line = format_double(scan_metric(a, b, grid, dist_rho)) + "\n";
      } else {
        throw std::runtime_error("--metric must be psi or scan");
      }
      std::fputs(line.c_str(), stdout);
      return 0;
    }

    if (member->parsed()) {
      const DiscretizedSubmanifold a = load_mfd(mem_a);
      const DiscretizedSubmanifold b = load_mfd(mem_b);
      NeighborhoodSpec spec;
      spec.region = parse_region(a.ambient_dim(), mem_kbox, mem_center, mem_kradius);
      spec.eps = mem_eps;
      spec.label_eps = mem_label_eps;
      MembershipReport rep;
      if (mem_kind == "gs") {
        rep = in_gs_neighborhood(a, b, spec);
      } else if (mem_kind == "ls") {
        rep = in_ls_neighborhood(a, b, spec);
      } else if (mem_kind == "ms") {
        rep = in_ms_neighborhood(a, b, spec);
      } else if (mem_kind == "ss") {
        rep = in_ss_neighborhood(a, b, spec);
      } else {
        throw std::runtime_error("--kind must be gs, ls, ms, or ss");
      }
      std::fputs(rep.text().c_str(), stdout);
      return rep.member ? 0 : 1;
    }

    if (converge->parsed()) {
      const DiscretizedSubmanifold base = load_mfd(conv_base);
      const std::vector<double> deltas = parse_csv_doubles(conv_deltas, "--deltas");
      NeighborhoodSpec spec;
      spec.region = parse_region(base.ambient_dim(), conv_kbox, conv_center, conv_kradius);
      spec.eps = conv_eps;

      std::string csv = "delta,d_H,d_nu,d_psi,scan,gs_member,ls_member\n";
      SvgSeries s_h{"d_H", {}, {}}, s_nu{"d_nu", {}, {}}, s_psi{"d_psi", {}, {}}, s_scan{"scan", {}, {}};
      for (const double delta : deltas) {
        DiscretizedSubmanifold wp;
        if (conv_family == "normal") {
          wp = perturb_normal(base, delta, PerturbMode::ConstantShift);
        } else if (conv_family == "parallel-copies") {
          wp = parallel_copies(base, delta);
        } else if (conv_family == "tilt") {
          wp = linear_image(base, shear_in_first_plane(base.ambient_dim(), delta));
        } else {
          throw std::runtime_error("--family must be normal, parallel-copies, or tilt");
        }
        GrWOptions opts;
        opts.grid_points = grid_points;
        opts.r_max = r_max;
        const DistanceReport rep = gr_w_distance(base, wp, opts);
        const GridSpec grid = scan_grid_or_default({}, base.ambient_dim(),
                                                   std::max(base.max_position_norm(), wp.max_position_norm()));
        const double scan_d = scan_metric(base, wp, grid, conv_rho);
        const bool gs = in_gs_neighborhood(base, wp, spec).member;
        const bool ls = in_ls_neighborhood(base, wp, spec).member;
        csv += format_double(delta) + "," + format_double(rep.d_h) + "," + format_double(rep.d_nu) + "," +
               format_double(rep.d_psi) + "," + format_double(scan_d) + "," + (gs ? "1" : "0") + "," +
               (ls ? "1" : "0") + "\n";
        s_h.x.push_back(delta);
        s_h.y.push_back(rep.d_h);
        s_nu.x.push_back(delta);
        s_nu.y.push_back(rep.d_nu);
        s_psi.x.push_back(delta);
        s_psi.y.push_back(rep.d_psi);
        s_scan.x.push_back(delta);
        s_scan.y.push_back(scan_d);
      }
      if (!conv_svg.empty())
        write_text_file(conv_svg, render_loglog_svg({s_h, s_nu, s_psi, s_scan}, "delta", "distance"));
      if (conv_out.empty()) {
        std::fputs(csv.c_str(), stdout);
      } else {
        write_text_file(conv_out, csv);
      }
      return 0;
    }

    if (scan->parsed()) {
      const DiscretizedSubmanifold w = load_mfd(scan_file);
      const GridSpec grid = scan_grid_or_default(scan_grid, w.ambient_dim(), w.max_position_norm());
      const ScanSection section = scan_section(w, grid, scan_rho);
      const std::string csv = scan_section_csv(section, w.ambient_dim(), w.intrinsic_dim());
      if (scan_out.empty()) {
        std::fputs(csv.c_str(), stdout);
      } else {
        write_text_file(scan_out, csv);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
