#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include <submet/geometry.hpp>
#include <submet/parallel.hpp>

#include "oracles.hpp"

using namespace submet;

namespace {

GrassPlane line2(double angle) {
  return GrassPlane(Eigen::MatrixXd{{std::cos(angle)}, {std::sin(angle)}});
}

GaussPoint gp(double x, double y, double angle) { return GaussPoint{Eigen::Vector2d(x, y), line2(angle)}; }

oracle::Set to_oracle(const ClosedSetSample& s) {
  oracle::Set o;
  o.with_infinity = s.contains_infinity;
  for (const auto& p : s.points) o.points.push_back({p.position, p.plane.frame()});
  return o;
}

}  // namespace

TEST_CASE("grassmann distance on lines is the angle between them") {
  CHECK(grassmann_distance(line2(0.0), line2(0.0)) == 0.0);
  CHECK(grassmann_distance(line2(0.0), line2(0.3)) == doctest::Approx(0.3).epsilon(1e-12));
  // antipodal frames describe the same line
  CHECK(grassmann_distance(line2(0.1), line2(0.1 + M_PI)) == doctest::Approx(0.0).epsilon(1e-9));
  // orthogonal lines sit at the metric's diameter
  CHECK(grassmann_distance(line2(0.0), line2(M_PI / 2)) == doctest::Approx(M_PI / 2).epsilon(1e-12));
}

TEST_CASE("grassmann distance picks the largest principal angle") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(4, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 1.0;
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(4, 2);
  b(0, 0) = std::cos(M_PI / 6);
  b(2, 0) = std::sin(M_PI / 6);
  b(1, 1) = std::cos(M_PI / 3);
  b(3, 1) = std::sin(M_PI / 3);
  CHECK(grassmann_distance(GrassPlane(a), GrassPlane(b)) == doctest::Approx(M_PI / 3).epsilon(1e-12));
  CHECK(grassmann_distance(GrassPlane(a), GrassPlane(b)) ==
        doctest::Approx(oracle::brute_max_min_angle(a, b, 10000, 7)).epsilon(1e-2));
}

TEST_CASE("grassmann distance is stable for nearly identical planes") {
  // the arccos route loses half the significant digits here; the library must not
  oracle::Rng rng(21);
  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::MatrixXd a = rng.random_frame(4, 2);
    const double tiny = 1e-9;
    Eigen::MatrixXd tilt = Eigen::MatrixXd::Identity(4, 4);
    tilt(0, 0) = std::cos(tiny);
    tilt(3, 0) = std::sin(tiny);
    tilt(0, 3) = -std::sin(tiny);
    tilt(3, 3) = std::cos(tiny);
    const Eigen::MatrixXd b = tilt * a;
    const double d = grassmann_distance(GrassPlane(a), GrassPlane(b));
    CHECK(d <= tiny * (1.0 + 1e-6));
    CHECK(d >= 0.0);
  }
}

TEST_CASE("grassmann distance matches the sampled max-min oracle on random pairs") {
  oracle::Rng rng(3);
  for (int rep = 0; rep < 25; ++rep) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.gen() % 4);  // 2..5
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng.gen() % std::min<Eigen::Index>(2, n - 1));
    const Eigen::MatrixXd a = rng.random_frame(n, d);
    const Eigen::MatrixXd b = rng.random_frame(n, d);
    const double lib = grassmann_distance(GrassPlane(a), GrassPlane(b));
    const double ref = oracle::brute_max_min_angle(a, b, 10000, 1000 + static_cast<std::uint64_t>(rep));
    CHECK(lib == doctest::Approx(ref).epsilon(0).scale(0).epsilon(1e-2));
    CHECK(lib >= ref - 1e-9);  // sampling can only undershoot the true max
  }
}

TEST_CASE("grassmann distance is bitwise symmetric and rotation invariant") {
  oracle::Rng rng(11);
  for (int rep = 0; rep < 30; ++rep) {
    const Eigen::Index n = 3 + static_cast<Eigen::Index>(rng.gen() % 3);
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng.gen() % 2);
    const Eigen::MatrixXd a = rng.random_frame(n, d);
    const Eigen::MatrixXd b = rng.random_frame(n, d);
    const GrassPlane pa(a), pb(b);
    CHECK(grassmann_distance(pa, pb) == grassmann_distance(pb, pa));

    const Eigen::MatrixXd rot = rng.random_rotation(n);
    const double before = grassmann_distance(pa, pb);
    const double after = grassmann_distance(GrassPlane(rot * a), GrassPlane(rot * b));
    CHECK(after == doctest::Approx(before).epsilon(1e-9));
  }
}

TEST_CASE("grassmann distance satisfies the triangle inequality") {
  oracle::Rng rng(5);
  for (int rep = 0; rep < 200; ++rep) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.gen() % 4);
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng.gen() % std::min<Eigen::Index>(2, n - 1));
    const GrassPlane a(rng.random_frame(n, d));
    const GrassPlane b(rng.random_frame(n, d));
    const GrassPlane c(rng.random_frame(n, d));
    CHECK(grassmann_distance(a, c) <= grassmann_distance(a, b) + grassmann_distance(b, c) + 1e-7);
  }
}

TEST_CASE("grassmann distance rejects incompatible planes") {
  CHECK_THROWS_WITH_AS(grassmann_distance(line2(0.0), GrassPlane(Eigen::MatrixXd::Identity(3, 1))),
                       "incompatible planes", std::invalid_argument);
  CHECK_THROWS_WITH_AS(grassmann_distance(GrassPlane(Eigen::MatrixXd::Identity(3, 1)),
                                          GrassPlane(Eigen::MatrixXd::Identity(3, 2))),
                       "incompatible planes", std::invalid_argument);
}

TEST_CASE("grass plane rejects non-orthonormal frames") {
  Eigen::MatrixXd bad(2, 1);
  bad << 1.5, 0.0;
  CHECK_THROWS_AS(GrassPlane{bad}, std::invalid_argument);
}

TEST_CASE("gauss distance adds the position and plane terms") {
  CHECK(gauss_distance(gp(0, 0, 0), gp(0, 0, 0)) == 0.0);
  CHECK(gauss_distance(gp(0, 0, 0), gp(3, 4, 0)) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(gauss_distance(gp(0, 0, 0), gp(1, 0, 0.2)) == doctest::Approx(1.2).epsilon(1e-12));
}

TEST_CASE("compactified distance follows the min formula") {
  CHECK(compactified_distance(CompactifiedPoint::infinity(), CompactifiedPoint::infinity()) == 0.0);
  CHECK(compactified_distance(CompactifiedPoint::at(gp(1, 0, 0)), CompactifiedPoint::infinity()) ==
        doctest::Approx(0.5).epsilon(1e-15));
  const double d = compactified_distance(CompactifiedPoint::at(gp(0, 0, 0)), CompactifiedPoint::at(gp(10, 0, 0)));
  CHECK(d == doctest::Approx(12.0 / 11.0).epsilon(1e-15));
}

TEST_CASE("compactified distance satisfies the metric axioms including infinity") {
  oracle::Rng rng(17);
  std::vector<CompactifiedPoint> pts;
  pts.push_back(CompactifiedPoint::infinity());
  for (int i = 0; i < 12; ++i) {
    const Eigen::VectorXd pos = 4.0 * rng.gaussian_vector(2);
    pts.push_back(CompactifiedPoint::at(GaussPoint{pos, GrassPlane(rng.random_frame(2, 1))}));
  }
  for (const auto& a : pts)
    for (const auto& b : pts) {
      const double dab = compactified_distance(a, b);
      CHECK(dab == compactified_distance(b, a));
      for (const auto& c : pts)
        CHECK(dab <= compactified_distance(a, c) + compactified_distance(c, b) + 1e-12);
    }
  for (const auto& a : pts) CHECK(compactified_distance(a, a) == 0.0);
}

TEST_CASE("hausdorff distance of a set with itself is zero") {
  oracle::Rng rng(23);
  ClosedSetSample s;
  for (int i = 0; i < 40; ++i)
    s.points.push_back(GaussPoint{rng.gaussian_vector(2), GrassPlane(rng.random_frame(2, 1))});
  s.contains_infinity = true;
  CHECK(hausdorff_distance(s, s) == 0.0);
}

TEST_CASE("hausdorff distance against the point at infinity is the largest gauge") {
  ClosedSetSample just_inf;
  just_inf.contains_infinity = true;
  ClosedSetSample ring;
  ring.contains_infinity = true;
  for (int i = 0; i < 64; ++i) {
    const double t = 2.0 * M_PI * i / 64.0;
    ring.points.push_back(gp(2.0 * std::cos(t), 2.0 * std::sin(t), t + M_PI / 2));
  }
  CHECK(hausdorff_distance(just_inf, ring) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("hausdorff distance rejects an empty sample without the infinity flag") {
  ClosedSetSample empty;
  ClosedSetSample other;
  other.points.push_back(gp(0, 0, 0));
  CHECK_THROWS_WITH_AS(hausdorff_distance(empty, other), "empty closed-set sample", std::invalid_argument);
}

TEST_CASE("indexed hausdorff equals brute force bit for bit") {
  for (std::uint64_t inst = 0; inst < 50; ++inst) {
    oracle::Rng rng(100 + inst);
    ClosedSetSample a, b;
    a.contains_infinity = (rng.gen() % 2) == 0;
    b.contains_infinity = (rng.gen() % 2) == 0;
    const int na = 20 + static_cast<int>(rng.gen() % 81);
    const int nb = 20 + static_cast<int>(rng.gen() % 81);
    for (int i = 0; i < na; ++i)
      a.points.push_back(GaussPoint{5.0 * rng.gaussian_vector(2), GrassPlane(rng.random_frame(2, 1))});
    for (int i = 0; i < nb; ++i)
      b.points.push_back(GaussPoint{5.0 * rng.gaussian_vector(2), GrassPlane(rng.random_frame(2, 1))});
    if (!a.contains_infinity && a.points.empty()) a.contains_infinity = true;
    if (!b.contains_infinity && b.points.empty()) b.contains_infinity = true;

    // brute force with the library's own pairwise distance: isolates the
    // spatial index and the early break as the only differences
    const double inf = std::numeric_limits<double>::infinity();
    double brute = 0.0;
    auto directed = [&](const ClosedSetSample& from, const ClosedSetSample& to) {
      for (const auto& p : from.points) {
        double best = to.contains_infinity ? gauge(p) : inf;
        for (const auto& q : to.points) best = std::min(best, std::min(gauss_distance(p, q), gauge(p) + gauge(q)));
        brute = std::max(brute, best);
      }
      if (from.contains_infinity) {
        double best = to.contains_infinity ? 0.0 : inf;
        for (const auto& q : to.points) best = std::min(best, gauge(q));
        brute = std::max(brute, best);
      }
    };
    directed(a, b);
    directed(b, a);

    CHECK(hausdorff_distance(a, b) == brute);
  }
}

TEST_CASE("hausdorff distance agrees with the independent oracle") {
  for (std::uint64_t inst = 0; inst < 10; ++inst) {
    oracle::Rng rng(500 + inst);
    ClosedSetSample a, b;
    a.contains_infinity = true;
    b.contains_infinity = true;
    for (int i = 0; i < 60; ++i)
      a.points.push_back(GaussPoint{3.0 * rng.gaussian_vector(2), GrassPlane(rng.random_frame(2, 1))});
    for (int i = 0; i < 50; ++i)
      b.points.push_back(GaussPoint{3.0 * rng.gaussian_vector(2), GrassPlane(rng.random_frame(2, 1))});
    const double lib = hausdorff_distance(a, b);
    const double ref = oracle::brute_hausdorff(to_oracle(a), to_oracle(b));
    CHECK(lib == doctest::Approx(ref).epsilon(1e-7));
  }
}

TEST_CASE("hausdorff distance is symmetric and satisfies the triangle inequality") {
  oracle::Rng rng(31);
  std::vector<ClosedSetSample> sets;
  for (int s = 0; s < 6; ++s) {
    ClosedSetSample set;
    set.contains_infinity = true;
    const int count = 10 + static_cast<int>(rng.gen() % 30);
    for (int i = 0; i < count; ++i)
      set.points.push_back(GaussPoint{4.0 * rng.gaussian_vector(2), GrassPlane(rng.random_frame(2, 1))});
    sets.push_back(std::move(set));
  }
  for (const auto& a : sets)
    for (const auto& b : sets) {
      CHECK(hausdorff_distance(a, b) == hausdorff_distance(b, a));
      for (const auto& c : sets)
        CHECK(hausdorff_distance(a, b) <= hausdorff_distance(a, c) + hausdorff_distance(c, b) + 1e-12);
    }
}

TEST_CASE("hausdorff distance is identical across thread counts") {
  oracle::Rng rng(41);
  ClosedSetSample a, b;
  a.contains_infinity = true;
  b.contains_infinity = true;
  for (int i = 0; i < 300; ++i)
    a.points.push_back(GaussPoint{6.0 * rng.gaussian_vector(3), GrassPlane(rng.random_frame(3, 1))});
  for (int i = 0; i < 280; ++i)
    b.points.push_back(GaussPoint{6.0 * rng.gaussian_vector(3), GrassPlane(rng.random_frame(3, 1))});

  set_thread_count(1);
  const double serial = hausdorff_distance(a, b);
  set_thread_count(4);
  const double par4 = hausdorff_distance(a, b);
  set_thread_count(8);
  const double par8 = hausdorff_distance(a, b);
  set_thread_count(1);
  CHECK(serial == par4);
  CHECK(serial == par8);
}
