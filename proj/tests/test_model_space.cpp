#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "lengthlab/model_space.hpp"

using namespace lengthlab;
using namespace lengthlab::model;

namespace {

// Independent oracle: spherical law of cosines on the unit sphere.
double sphere_law_of_cosines(double a, double b, double C) {
  return std::acos(std::cos(a) * std::cos(b) + std::sin(a) * std::sin(b) * std::cos(C));
}

ModelPoint sphere_pt(double colat, double lon) {
  return {1.0, {std::sin(colat) * std::cos(lon), std::sin(colat) * std::sin(lon),
                std::cos(colat)}};
}

ModelPoint random_point(double kappa, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0, 1);
  if (kappa == 0) return {0.0, {g(rng), g(rng), 0}};
  double s = std::sqrt(std::fabs(kappa));
  if (kappa > 0) {
    Vec3 v{g(rng), g(rng), g(rng)};
    return {kappa, v.normalized() / s};
  }
  // hyperboloid: exponential of a random tangent vector at the origin
  ModelPoint o = model_origin(kappa);
  Vec3 u{g(rng), g(rng), 0};
  double n = u.norm();
  if (n == 0) return o;
  return flow(o, u / n, std::fmod(n, 2.0));
}

}  // namespace

TEST_CASE("diameter bound") {
  CHECK(diameter_bound(1).value() == doctest::Approx(M_PI));
  CHECK(diameter_bound(0).is_inf());
  CHECK(diameter_bound(-2).is_inf());
  CHECK(diameter_bound(4).value() == doctest::Approx(M_PI / 2));
}

TEST_CASE("model distance basics") {
  ModelPoint p0{0.0, {0, 0, 0}}, p1{0.0, {3, 4, 0}};
  CHECK(model_distance(p0, p1) == doctest::Approx(5.0));

  ModelPoint n = sphere_pt(0, 0), s = sphere_pt(M_PI, 0);
  CHECK(model_distance(n, s) == doctest::Approx(M_PI));

  // equator points at longitude gap pi/2, vs law-of-cosines oracle
  ModelPoint e1 = sphere_pt(M_PI / 2, 0), e2 = sphere_pt(M_PI / 2, M_PI / 2);
  CHECK(model_distance(e1, e2) ==
        doctest::Approx(sphere_law_of_cosines(M_PI / 2, M_PI / 2, M_PI / 2)));
  CHECK(model_distance(e1, e2) == doctest::Approx(M_PI / 2));

  ModelPoint a{1.0, {1, 0, 0}};
  ModelPoint bad{4.0, {0.5, 0, 0}};
  CHECK_THROWS(model_distance(a, bad));
}

TEST_CASE("triangle inequality on random triples, each curvature") {
  std::mt19937_64 rng(7);
  for (double kappa : {-1.0, 0.0, 1.0, 4.0}) {
    for (int i = 0; i < 10000; ++i) {
      ModelPoint a = random_point(kappa, rng), b = random_point(kappa, rng),
                 c = random_point(kappa, rng);
      double ab = model_distance(a, b), bc = model_distance(b, c),
             ac = model_distance(a, c);
      CHECK(ac <= ab + bc + 1e-9);
      CHECK(std::fabs(ab - model_distance(b, a)) < 1e-12);
    }
  }
}

TEST_CASE("warping function") {
  CHECK(warping(1, M_PI / 2) == doctest::Approx(1.0));
  CHECK(warping(0, 2.5) == doctest::Approx(2.5));
  CHECK(warping(-1, 1) == doctest::Approx(std::sinh(1.0)));
  CHECK_THROWS(warping(1, M_PI));
  for (double kappa : {-1.0, 0.0, 1.0}) {
    CHECK(warping(kappa, 0) == 0.0);
    double h = 1e-6;
    double fd = (warping(kappa, h) - warping(kappa, 0)) / h;
    CHECK(fd == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("arc chord error") {
  CHECK(arc_chord_error(1, 0.7, 0) == 0.0);
  CHECK(arc_chord_error(0, 1, 0.6) == doctest::Approx(0.4));
  // alpha_1 closed form evaluated directly
  double s = M_PI / 3, h = 0.1;
  double expect = std::fabs(s - std::acos(std::cos(s) / std::cos(h)));
  CHECK(arc_chord_error(1, s, h) == doctest::Approx(expect));
  CHECK(arc_chord_error(1, s, h) == doctest::Approx(3.0e-3).epsilon(0.2));
  CHECK_THROWS(arc_chord_error(0, 0.5, 0.6));

  // alpha(s,h)/h -> 0 as h -> 0
  for (double kappa : {-1.0, 0.0, 1.0}) {
    double sfix = 1.0;
    double prev = 1e300;
    for (double hh : {1e-2, 1e-3, 1e-4}) {
      double ratio = arc_chord_error(kappa, sfix, hh) / hh;
      CHECK(ratio < prev);
      prev = ratio;
    }
    CHECK(prev < 1e-1);
  }
}

TEST_CASE("comparison triangle placement and round trip") {
  auto t = comparison_triangle(0, 3, 4, 5);
  CHECK(model_distance(t.B, t.C) == doctest::Approx(3).epsilon(1e-9));
  CHECK(model_distance(t.C, t.A) == doctest::Approx(4).epsilon(1e-9));
  CHECK(model_distance(t.A, t.B) == doctest::Approx(5).epsilon(1e-9));
  // angle opposite the 5-side is at C
  CHECK(t.angle_C == doctest::Approx(M_PI / 2));

  auto d = comparison_triangle(0, 1, 1, 2);
  CHECK(d.angle_C == doctest::Approx(M_PI));  // angle opposite the 2-side

  auto s = comparison_triangle(1, M_PI / 2, M_PI / 2, M_PI / 2);
  CHECK(s.angle_A == doctest::Approx(M_PI / 2));
  CHECK(s.angle_B == doctest::Approx(M_PI / 2));
  CHECK(s.angle_C == doctest::Approx(M_PI / 2));

  CHECK_THROWS(comparison_triangle(0, 1, 1, 3));
  CHECK_THROWS(comparison_triangle(1, 2.5, 2.5, 2.0));  // perimeter >= 2 pi

  // side-length round trip on random valid triples
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.05, 1.2);
  for (double kappa : {-1.0, 0.0, 1.0}) {
    for (int i = 0; i < 300; ++i) {
      double x = u(rng), y = u(rng), z = u(rng);
      double a = x + y, b = y + z, c = z + x;  // always a valid triangle
      if (kappa > 0 && a + b + c >= 2 * M_PI - 0.05) continue;
      auto tri = comparison_triangle(kappa, a, b, c);
      CHECK(std::fabs(model_distance(tri.B, tri.C) - a) < 1e-9);
      CHECK(std::fabs(model_distance(tri.C, tri.A) - b) < 1e-9);
      CHECK(std::fabs(model_distance(tri.A, tri.B) - c) < 1e-9);
      CHECK(std::fabs(angle_at(tri.A, tri.B, tri.C) - tri.angle_A) < 1e-9);
      CHECK(std::fabs(angle_at(tri.B, tri.A, tri.C) - tri.angle_B) < 1e-9);
      CHECK(std::fabs(angle_at(tri.C, tri.A, tri.B) - tri.angle_C) < 1e-9);
    }
  }
}

TEST_CASE("comparison points distance") {
  auto t = comparison_triangle(0, 3, 4, 5);
  CHECK(comparison_points_distance(t, 0, 1.0, 0, 1.0) == doctest::Approx(0.0));
  // midpoints of the 3- and 4-sides: half the third side (planar midline)
  CHECK(comparison_points_distance(t, 0, 1.5, 1, 2.0) == doctest::Approx(2.5));

  auto s = comparison_triangle(1, M_PI / 2, M_PI / 2, M_PI / 2);
  // midpoints of two sides, against the spherical law of cosines:
  // both midpoints at distance pi/4 from the shared vertex, angle pi/2.
  double expect = sphere_law_of_cosines(M_PI / 4, M_PI / 4, M_PI / 2);
  CHECK(comparison_points_distance(s, 0, M_PI / 4, 1, M_PI / 4) ==
        doctest::Approx(expect));

  // degenerate triangle: comparison distance equals the 1-d distance
  auto d = comparison_triangle(0, 1, 1, 2);
  CHECK(comparison_points_distance(d, 2, 0.5, 2, 1.7) == doctest::Approx(1.2));
  CHECK_THROWS(comparison_points_distance(t, 0, 3.5, 1, 0.0));
}

TEST_CASE("comparison angle") {
  CHECK(comparison_angle(0, 1, 1, std::sqrt(2.0)) == doctest::Approx(M_PI / 2));
  CHECK(comparison_angle(0, 1, 1, 2) == doctest::Approx(M_PI));
  CHECK(comparison_angle(1, M_PI / 2, M_PI / 2, M_PI / 2) ==
        doctest::Approx(M_PI / 2));
}

TEST_CASE("place_point reproduces prescribed distances") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (double kappa : {-1.0, 0.0, 1.0}) {
    for (int i = 0; i < 200; ++i) {
      ModelPoint X = random_point(kappa, rng), Y = random_point(kappa, rng);
      double dxy = model_distance(X, Y);
      if (dxy < 0.05 || (kappa > 0 && dxy > 2.5)) continue;
      double dx = u(rng);
      double dy = std::fabs(dx - dxy) + 0.5 * std::min(dx, dxy);
      if (kappa > 0 && dx + dy + dxy >= 2 * M_PI - 0.1) continue;
      for (int side : {+1, -1}) {
        ModelPoint Z = place_point(X, Y, dx, dy, side);
        CHECK(std::fabs(model_distance(X, Z) - dx) < 1e-8);
        CHECK(std::fabs(model_distance(Y, Z) - dy) < 1e-8);
        CHECK(chart_residual(Z) < 1e-9);
      }
    }
  }
}
