#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include <submet/manifold.hpp>
#include <submet/mfd_io.hpp>

#include "oracles.hpp"

using namespace submet;

TEST_CASE("circle generator has exact total weight and curvature data") {
  const auto c = circle_manifold(2.0, Eigen::Vector2d(0.5, -1.0), 256);
  CHECK(c.sample_count() == 256);
  CHECK(c.total_weight() == doctest::Approx(4.0 * M_PI).epsilon(1e-15));
  CHECK(c.intrinsic_dim() == 1);
  CHECK(c.ambient_dim() == 2);
  REQUIRE(c.shift_field().has_value());
  const auto& f = *c.shift_field();
  CHECK(f.injectivity_radius == doctest::Approx(2.0));
  CHECK(f.shift_coeffs(0, 17) == doctest::Approx(0.5));
  CHECK(f.has_curve_order);
  CHECK(f.closed_curve);
  // outward normal at sample 0
  CHECK(f.normals.col(0).dot(c.position(0) - Eigen::Vector2d(0.5, -1.0)) > 0.0);
  // tangents are unit and orthogonal to the normals
  for (Eigen::Index i = 0; i < c.sample_count(); i += 37) {
    CHECK(c.tangent_frame(i).norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(f.normals.col(i).dot(c.tangent_frame(i).col(0))) < 1e-12);
  }
  CHECK_THROWS_AS(circle_manifold(1.0, Eigen::Vector2d::Zero(), 2), std::invalid_argument);
}

TEST_CASE("sphere generator covers every ambient dimension") {
  SUBCASE("n = 2 is the circle") {
    const auto s = sphere_manifold(2, 1.5, 128);
    CHECK(s.total_weight() == doctest::Approx(3.0 * M_PI).epsilon(1e-15));
    CHECK(s.intrinsic_dim() == 1);
  }
  SUBCASE("n = 3 lattice carries the exact area") {
    const auto s = sphere_manifold(3, 2.0, 2000);
    CHECK(s.sample_count() == 2000);
    CHECK(s.total_weight() == doctest::Approx(16.0 * M_PI).epsilon(1e-12));
    CHECK(s.intrinsic_dim() == 2);
    for (Eigen::Index i = 0; i < s.sample_count(); i += 199) {
      CHECK(s.position(i).norm() == doctest::Approx(2.0).epsilon(1e-12));
      // tangent plane orthogonal to the radial direction
      CHECK((s.tangent_frame(i).transpose() * s.position(i)).norm() < 1e-9);
    }
    REQUIRE(s.shift_field().has_value());
    CHECK(s.shift_field()->injectivity_radius == doctest::Approx(2.0));
  }
  SUBCASE("n = 4 is seeded and reproducible") {
    const auto a = sphere_manifold(4, 1.0, 500, 9);
    const auto b = sphere_manifold(4, 1.0, 500, 9);
    const auto c = sphere_manifold(4, 1.0, 500, 10);
    CHECK((a.positions().array() == b.positions().array()).all());
    CHECK(!(a.positions().array() == c.positions().array()).all());
    CHECK(a.total_weight() == doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-12));
    for (Eigen::Index i = 0; i < a.sample_count(); i += 61)
      CHECK(a.position(i).norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("affine plane generator: segment and disc") {
  SUBCASE("line segment in the plane") {
    Eigen::MatrixXd frame(2, 1);
    frame << 1.0, 0.0;
    const auto seg = affine_plane_manifold(2, 1, Eigen::Vector2d::Zero(), frame, 2.0, 64);
    CHECK(seg.sample_count() == 64);
    CHECK(seg.total_weight() == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(seg.positions().row(1).cwiseAbs().maxCoeff() == 0.0);
    CHECK(seg.positions().row(0).minCoeff() > -2.0);
    CHECK(seg.positions().row(0).maxCoeff() < 2.0);
    REQUIRE(seg.shift_field().has_value());
    CHECK(seg.shift_field()->injectivity_radius == std::numeric_limits<double>::infinity());
    CHECK(seg.shift_field()->shift_coeffs.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("disc of extent 2 has weight close to its area") {
    const auto disc = affine_plane_manifold(3, 2, Eigen::Vector3d::Zero(),
                                            Eigen::MatrixXd::Identity(3, 2), 2.0, 1024);
    CHECK(disc.sample_count() == 1024);
    CHECK(disc.total_weight() == doctest::Approx(4.0 * M_PI).epsilon(0.01));
    for (Eigen::Index i = 0; i < disc.sample_count(); i += 97) {
      CHECK(std::abs(disc.position(i)[2]) == 0.0);
      CHECK(disc.position(i).norm() < 2.0);
    }
  }
}

TEST_CASE("linear graph generator scales weights by the graph area element") {
  Eigen::MatrixXd a(1, 1);
  a << 2.0;
  const auto flat = linear_graph_manifold(2, 1, Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Zero(1), 3.0, 100);
  const auto slope = linear_graph_manifold(2, 1, a, Eigen::VectorXd::Zero(1), 3.0, 100);
  CHECK(flat.total_weight() == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(slope.total_weight() == doctest::Approx(6.0 * std::sqrt(5.0)).epsilon(1e-12));
  // samples lie on y = 2x
  for (Eigen::Index i = 0; i < slope.sample_count(); i += 13)
    CHECK(slope.position(i)[1] == doctest::Approx(2.0 * slope.position(i)[0]).epsilon(1e-12));
  // tangent line matches the slope
  const auto& fr = slope.tangent_frame(0);
  CHECK(fr(1, 0) / fr(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("torus generator has the exact surface area and injectivity radius") {
  const auto t = torus_manifold(2.0, 0.5, 48, 24);
  CHECK(t.sample_count() == 48 * 24);
  CHECK(t.total_weight() == doctest::Approx(4.0 * M_PI * M_PI).epsilon(1e-12));
  REQUIRE(t.shift_field().has_value());
  CHECK(t.shift_field()->injectivity_radius == doctest::Approx(0.5));
  for (Eigen::Index i = 0; i < t.sample_count(); i += 331) {
    const auto p = t.position(i);
    const double ring = std::hypot(p[0], p[1]);
    CHECK(std::hypot(ring - 2.0, p[2]) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK((t.tangent_frame(i).transpose() * t.tangent_frame(i) - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() <
          1e-12);
  }
}

TEST_CASE("constant normal shift: zero delta is the identity, circle scales exactly") {
  const auto c = circle_manifold(1.0, Eigen::Vector2d::Zero(), 512);
  SUBCASE("delta zero changes nothing") {
    const auto same = perturb_normal(c, 0.0);
    CHECK((same.positions().array() == c.positions().array()).all());
    CHECK((same.weights().array() == c.weights().array()).all());
  }
  SUBCASE("positive shift grows the circle") {
    const auto out = perturb_normal(c, 0.05);
    CHECK(out.total_weight() == doctest::Approx(2.0 * M_PI * 1.05).epsilon(0.01));
    for (Eigen::Index i = 0; i < out.sample_count(); i += 101)
      CHECK(out.position(i).norm() == doctest::Approx(1.05).epsilon(1e-12));
    // curvature data is updated: new radius 1.05
    REQUIRE(out.shift_field().has_value());
    CHECK(out.shift_field()->shift_coeffs(0, 0) == doctest::Approx(1.0 / 1.05).epsilon(1e-12));
  }
  SUBCASE("shift past the injectivity radius is rejected") {
    CHECK_THROWS_WITH_AS(perturb_normal(c, 1.0), "normal shift exceeds tube radius", std::invalid_argument);
    CHECK_THROWS_WITH_AS(perturb_normal(c, -1.0), "normal shift exceeds tube radius", std::invalid_argument);
    CHECK_NOTHROW(perturb_normal(c, -0.5 + 1e-6));
  }
}

TEST_CASE("smooth bump perturbation moves only the bump region") {
  const auto c = circle_manifold(1.0, Eigen::Vector2d::Zero(), 512);
  const auto out = perturb_normal(c, 0.1, PerturbMode::SmoothBump);
  CHECK(out.sample_count() == 512);
  // max displacement equals delta at the bump peak, zero far from it
  double max_disp = 0.0;
  for (Eigen::Index i = 0; i < 512; ++i) max_disp = std::max(max_disp, std::abs(out.position(i).norm() - 1.0));
  CHECK(max_disp == doctest::Approx(0.1).epsilon(0.01));
  CHECK(std::abs(out.position(0).norm() - 1.0) < 1e-6);
  // total length matches the analytic arc length of r(t) = 1 + 0.1 bump(t/2pi)
  auto bump = [](double z) { return (z <= 0.0 || z >= 1.0) ? 0.0 : std::exp(1.0 - 1.0 / (4.0 * z * (1.0 - z))); };
  double arc = 0.0;
  const int steps = 200000;
  Eigen::Vector2d prev(1.0 + 0.1 * bump(0.0), 0.0);
  for (int k = 1; k <= steps; ++k) {
    const double t = 2.0 * M_PI * k / steps;
    const double rr = 1.0 + 0.1 * bump(static_cast<double>(k) / steps);
    const Eigen::Vector2d cur(rr * std::cos(t), rr * std::sin(t));
    arc += (cur - prev).norm();
    prev = cur;
  }
  CHECK(out.total_weight() == doctest::Approx(arc).epsilon(0.005));
  // bump needs an ordered curve
  const auto disc = affine_plane_manifold(3, 2, Eigen::Vector3d::Zero(), Eigen::MatrixXd::Identity(3, 2), 1.0, 64);
  CHECK_THROWS_AS(perturb_normal(disc, 0.1, PerturbMode::SmoothBump), std::invalid_argument);
}

TEST_CASE("parallel copies doubles the sample count with near-doubled weight") {
  const auto c = circle_manifold(1.0, Eigen::Vector2d::Zero(), 512);
  const auto two = parallel_copies(c, 0.01);
  CHECK(two.sample_count() == 1024);
  CHECK(two.total_weight() / c.total_weight() == doctest::Approx(2.0).epsilon(0.05));
  CHECK_THROWS_WITH_AS(parallel_copies(c, 0.0), "parallel copies need a positive offset", std::invalid_argument);
  CHECK_THROWS_AS(parallel_copies(c, 2.0), std::invalid_argument);
}

TEST_CASE("rotation carries samples, frames and normals along") {
  const auto c = circle_manifold(1.0, Eigen::Vector2d(0.3, 0.0), 64);
  Eigen::Matrix2d rot;
  const double th = 0.7;
  rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  const auto r = rotated(c, rot);
  CHECK((r.positions() - rot * c.positions()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(r.total_weight() == c.total_weight());
  REQUIRE(r.shift_field().has_value());
  CHECK((r.shift_field()->normals - rot * c.shift_field()->normals).cwiseAbs().maxCoeff() == 0.0);

  Eigen::Matrix2d bad = rot;
  bad(0, 0) += 1e-3;
  CHECK_THROWS_WITH_AS(rotated(c, bad), "rotation matrix must be orthogonal", std::invalid_argument);
}

TEST_CASE("shift field reconstruction recovers circle curvature") {
  const auto c = circle_manifold(2.0, Eigen::Vector2d::Zero(), 256);
  auto bare = DiscretizedSubmanifold::from_samples(
      1, c.positions(),
      [&] {
        std::vector<Eigen::MatrixXd> fr(static_cast<std::size_t>(c.sample_count()));
        for (Eigen::Index i = 0; i < c.sample_count(); ++i) fr[static_cast<std::size_t>(i)] = c.tangent_frame(i);
        return fr;
      }(),
      c.weights(), c.resolution());
  const auto field = reconstruct_shift_field(bare);
  CHECK(field.injectivity_radius == doctest::Approx(2.0).epsilon(0.01));
  for (Eigen::Index i = 0; i < 256; i += 17) {
    // outward normal, curvature 1/R
    CHECK(field.normals.col(i).dot(bare.position(i)) == doctest::Approx(2.0).epsilon(0.01));
    CHECK(field.shift_coeffs(0, i) == doctest::Approx(0.5).epsilon(0.02));
  }
  const auto disc = affine_plane_manifold(3, 2, Eigen::Vector3d::Zero(), Eigen::MatrixXd::Identity(3, 2), 1.0, 64);
  CHECK_THROWS_WITH_AS(reconstruct_shift_field(disc),
                       "normal field reconstruction requires a plane curve (intrinsic dimension 1, codimension 1)",
                       std::invalid_argument);
}

TEST_CASE("radius restriction keeps a full circle at its own radius") {
  const auto c = circle_manifold(1.0, Eigen::Vector2d::Zero(), 512);
  const auto all = restrict_to_radius(c, 1.0);
  CHECK(all.kept.size() == 512);
  CHECK(all.volume == doctest::Approx(2.0 * M_PI).epsilon(1e-12));
  const auto none = restrict_to_radius(c, 0.5);
  CHECK(none.kept.empty());
  CHECK(none.volume == 0.0);
}

TEST_CASE("domain-aware restriction excludes points hugging the boundary") {
  Eigen::MatrixXd frame(2, 1);
  frame << 1.0, 0.0;
  auto seg = affine_plane_manifold(2, 1, Eigen::Vector2d::Zero(), frame, 2.0, 100);
  seg.set_domain(Domain::ball(Eigen::Vector2d::Zero(), 2.0));
  // key = max(|x|, 1/(2 - |x|)): r = 1.5 keeps |x| <= 1.5 (margin >= 2/3 > 1/1.5)
  const auto r = restrict_to_radius(seg, 1.5, RestrictMode::DomainAware);
  for (const auto i : r.kept) CHECK(seg.position(i).norm() <= 1.5 + 1e-9);
  CHECK(!r.kept.empty());
  // without a proper domain the mode is an error
  const auto c = circle_manifold(1.0, Eigen::Vector2d::Zero(), 8);
  CHECK_THROWS_AS(restrict_to_radius(c, 1.0, RestrictMode::DomainAware), std::invalid_argument);
}

TEST_CASE("subset extraction preserves labels and weights") {
  auto c = circle_manifold(1.0, Eigen::Vector2d::Zero(), 16);
  Eigen::MatrixXd labels(1, 16);
  for (int i = 0; i < 16; ++i) labels(0, i) = 0.25 * i;
  c.set_labels(labels);
  const auto sub = submanifold_subset(c, {3, 7, 11});
  CHECK(sub.sample_count() == 3);
  CHECK(sub.label(1) == doctest::Approx(0.25 * 7));
  CHECK(sub.weight(2) == c.weight(11));
  CHECK((sub.position(0) - c.position(3)).norm() == 0.0);
}

TEST_CASE("resolution estimate is the largest nearest-neighbour gap") {
  const auto c = circle_manifold(1.0, Eigen::Vector2d::Zero(), 64);
  const double chord = 2.0 * std::sin(M_PI / 64.0);
  CHECK(estimate_resolution(c) == doctest::Approx(chord).epsilon(1e-9));
}

TEST_CASE("sample validation rejects malformed inputs") {
  Eigen::MatrixXd pos = Eigen::MatrixXd::Zero(2, 3);
  pos << 0, 1, 2, 0, 0, 0;
  std::vector<Eigen::MatrixXd> frames(3, (Eigen::MatrixXd(2, 1) << 1, 0).finished());
  Eigen::VectorXd wts = Eigen::VectorXd::Ones(3);

  CHECK_NOTHROW(DiscretizedSubmanifold::from_samples(1, pos, frames, wts, 1.0));
  Eigen::VectorXd badw = wts;
  badw[1] = 0.0;
  CHECK_THROWS_WITH_AS(DiscretizedSubmanifold::from_samples(1, pos, frames, badw, 1.0), "weights must be positive",
                       std::invalid_argument);
  CHECK_THROWS_AS(DiscretizedSubmanifold::from_samples(2, pos, frames, wts, 1.0), std::invalid_argument);

  const auto e = empty_manifold(3, 1);
  CHECK(e.empty());
  CHECK(e.ambient_dim() == 3);
  CHECK(e.total_weight() == 0.0);
}

TEST_CASE("labels gate the label accessor") {
  auto c = circle_manifold(1.0, Eigen::Vector2d::Zero(), 8);
  CHECK(!c.has_labels());
  CHECK_THROWS_WITH_AS(c.label(0), "missing labels", std::logic_error);
  c.set_labels(Eigen::MatrixXd::Ones(1, 8));
  CHECK(c.label(5) == 1.0);
}

TEST_CASE("mfd round trip preserves every sample bit for bit") {
  auto c = circle_manifold(1.3, Eigen::Vector2d(0.2, 0.4), 96);
  Eigen::MatrixXd labels(1, 96);
  for (int i = 0; i < 96; ++i) labels(0, i) = std::sin(0.1 * i);
  c.set_labels(labels);

  std::stringstream ss;
  save_mfd(c, ss);
  const auto back = load_mfd(ss, "roundtrip");
  CHECK(back.sample_count() == 96);
  CHECK((back.positions().array() == c.positions().array()).all());
  CHECK((back.weights().array() == c.weights().array()).all());
  CHECK((back.labels().array() == c.labels().array()).all());
  for (Eigen::Index i = 0; i < 96; i += 11)
    CHECK((back.tangent_frame(i).array() == c.tangent_frame(i).array()).all());

  // second save is byte-identical
  std::stringstream ss2, ss3;
  save_mfd(c, ss2);
  save_mfd(back, ss3);
  CHECK(ss2.str() == ss3.str());
}

TEST_CASE("mfd loader reports malformed files with line numbers") {
  auto expect_fail = [](const std::string& text, const std::string& needle) {
    std::stringstream ss(text);
    try {
      load_mfd(ss, "bad");
      FAIL("expected a parse error for: " << needle);
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
      CHECK(std::string(e.what()).find("bad:") == 0);
    }
  };
  expect_fail("MFD 2\n", "expected header 'MFD 1'");
  expect_fail("MFD 1\ndim 1 ambient 2 count 1 labels 3\n1 0 1 0 1\n", "labels must be 0 or 1");
  expect_fail("MFD 1\ndim 1 ambient 2 count 1 labels 0\n0 0 0.5 0.5 1\n", "not orthonormal");
  expect_fail("MFD 1\ndim 1 ambient 2 count 1 labels 0\n0 0 1 0 -1\n", "weight");
  expect_fail("MFD 1\ndim 1 ambient 2 count 1 labels 0\n0 0 1 0\n", "expected 5 values, got 4");
  expect_fail("MFD 1\ndim 2 ambient 1 count 0 labels 0\n", "dim");
}

TEST_CASE("mesh ingestion recovers tangents and length of a polygon") {
  // regular 64-gon on the unit circle
  std::stringstream ss;
  ss << "PTS 64 2\n";
  for (int i = 0; i < 64; ++i) {
    const double t = 2.0 * M_PI * i / 64.0;
    ss << std::cos(t) << " " << std::sin(t) << "\n";
  }
  ss << "EDG 64\n";
  for (int i = 0; i < 64; ++i) ss << i << " " << (i + 1) % 64 << "\n";

  const auto m = ingest_mesh(ss, 1, "polygon");
  CHECK(m.sample_count() == 64);
  CHECK(m.total_weight() == doctest::Approx(2.0 * M_PI).epsilon(0.02));
  for (Eigen::Index i = 0; i < 64; ++i) {
    const Eigen::Vector2d tangent = m.tangent_frame(i).col(0);
    const Eigen::Vector2d expect(-m.position(i)[1], m.position(i)[0]);
    const double ang = std::acos(std::min(1.0, std::abs(tangent.dot(expect.normalized()))));
    CHECK(ang <= 0.1);
  }
}

TEST_CASE("mesh ingestion splits a single segment's length evenly") {
  std::stringstream ss;
  ss << "PTS 2 2\n0 0\n1 0\nEDG 1\n0 1\n";
  const auto m = ingest_mesh(ss, 1, "segment");
  CHECK(m.sample_count() == 2);
  CHECK(m.weight(0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(m.weight(1) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("mesh ingestion rejects out-of-range indices and lonely vertices") {
  std::stringstream ss;
  ss << "PTS 2 2\n0 0\n1 0\nEDG 1\n0 5\n";
  CHECK_THROWS_AS(ingest_mesh(ss, 1, "badidx"), std::runtime_error);

  std::stringstream ss2;
  ss2 << "PTS 3 2\n0 0\n1 0\n5 5\nEDG 1\n0 1\n";
  CHECK_THROWS_AS(ingest_mesh(ss2, 1, "lonely"), std::runtime_error);
}

TEST_CASE("mesh ingestion handles triangles") {
  // two triangles forming the unit square in the plane z = 0, inside R^3
  std::stringstream ss;
  ss << "PTS 4 3\n0 0 0\n1 0 0\n1 1 0\n0 1 0\nTRI 2\n0 1 2\n0 2 3\n";
  const auto m = ingest_mesh(ss, 2, "square");
  CHECK(m.sample_count() == 4);
  CHECK(m.total_weight() == doctest::Approx(1.0).epsilon(1e-12));
  for (Eigen::Index i = 0; i < 4; ++i) {
    // tangent plane is the xy plane: frame orthogonal to e3
    CHECK(std::abs(m.tangent_frame(i)(2, 0)) < 1e-9);
    CHECK(std::abs(m.tangent_frame(i)(2, 1)) < 1e-9);
  }
}

TEST_CASE("linear image shears a line into its graph") {
  Eigen::MatrixXd coeffs = Eigen::MatrixXd::Zero(1, 1);
  const auto base = linear_graph_manifold(2, 1, coeffs, Eigen::VectorXd::Zero(1), 2.0, 41);
  const double m = 0.5;
  Eigen::Matrix2d shear;
  shear << 1.0, 0.0, m, 1.0;
  const auto img = linear_image(base, shear);

  REQUIRE(img.sample_count() == base.sample_count());
  const double stretch = std::sqrt(1.0 + m * m);
  for (Eigen::Index i = 0; i < img.sample_count(); ++i) {
    const double x = base.position(i)[0];
    CHECK(img.position(i)[0] == doctest::Approx(x).epsilon(1e-15));
    CHECK(img.position(i)[1] == doctest::Approx(m * x).epsilon(1e-15));
    // tangent turns into the unit vector along (1, m)
    const Eigen::Vector2d t = img.tangent_frame(i).col(0);
    CHECK(t[0] == doctest::Approx(1.0 / stretch).epsilon(1e-12));
    CHECK(t[1] == doctest::Approx(m / stretch).epsilon(1e-12));
    CHECK(img.weight(i) == doctest::Approx(base.weight(i) * stretch).epsilon(1e-12));
  }
  CHECK(img.total_weight() == doctest::Approx(base.total_weight() * stretch).epsilon(1e-12));
  CHECK(img.resolution() == doctest::Approx(base.resolution() * stretch).epsilon(1e-12));

  // identity map reproduces the samples exactly
  const auto same = linear_image(base, Eigen::MatrixXd::Identity(2, 2));
  CHECK((same.positions() - base.positions()).norm() == 0.0);
  CHECK((same.weights() - base.weights()).norm() == 0.0);
}

TEST_CASE("linear image validates its map and domain") {
  const auto base = circle_manifold(1.0, Eigen::Vector2d::Zero(), 32);
  CHECK_THROWS_WITH(linear_image(base, Eigen::MatrixXd::Identity(3, 3)),
                    "linear map must be square ambient x ambient");
  CHECK_THROWS_WITH(linear_image(base, Eigen::MatrixXd::Zero(2, 2)), "linear map must be invertible");

  auto bounded = circle_manifold(1.0, Eigen::Vector2d::Zero(), 32);
  bounded.set_domain(Domain::ball(Eigen::Vector2d::Zero(), 2.0));
  CHECK_THROWS_WITH(linear_image(bounded, Eigen::MatrixXd::Identity(2, 2)),
                    "cannot map a restricted domain through a general linear map");
}
