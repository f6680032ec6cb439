#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "lengthlab/catalog.hpp"
#include "lengthlab/rauch.hpp"

using namespace lengthlab;

namespace {

// two segments leaving the origin of a flat chart at the given angle
std::pair<GeodesicPath, GeodesicPath> planar_rays(const ChartComplex& X,
                                                  double angle, double len) {
  Coord o{0, 0, 0};
  Coord a{len, 0, 0};
  Coord b{len * std::cos(angle), len * std::sin(angle), 0};
  return {chart_segment(X, 0, o, a), chart_segment(X, 0, o, b)};
}

// two meridians of the unit sphere from the north pole, longitudes 0 and gap
std::pair<GeodesicPath, GeodesicPath> meridians(const ChartComplex& X,
                                                double gap, double len) {
  Coord pole{0, 0, 1};
  auto at = [&](double lon) {
    return Coord{std::sin(len) * std::cos(lon), std::sin(len) * std::sin(lon),
                 std::cos(len)};
  };
  return {chart_segment(X, 0, pole, at(0)), chart_segment(X, 0, pole, at(gap))};
}

}  // namespace

TEST_CASE("hemisphere condition evaluates the closed form") {
  CHECK(hemisphere_check(M_PI / 2, M_PI / 8));          // boundary value
  CHECK_FALSE(hemisphere_check(M_PI, 0.0));             // too long
  CHECK(hemisphere_check(1.0, 0.0));                    // trivial
  CHECK_FALSE(hemisphere_check(M_PI / 2, M_PI / 8 + 1e-9));
}

TEST_CASE("planar ray bridge: height bound and flat development") {
  auto X = catalog::build_flat_plane(3.0);
  auto [g, s] = planar_rays(*X, 0.1, 1.0);
  Bridge b = build_bridge(*X, g, s, 4, 0.0);
  CHECK(b.N() == 4);
  CHECK(b.length == doctest::Approx(1.0));
  // transverse separation at the far end is 2 sin(0.05) < 0.1
  CHECK(b.height <= 0.1);
  CHECK(b.height > 0.09);

  ComparisonBridge cb = develop_comparison_bridge(b, 0.0);
  CHECK(cb.max_side_error <= 1e-9);
  // flat development is exact: both decks are straight segments
  double end_gamma = model::model_distance(cb.deck_gamma.front(),
                                           cb.deck_gamma.back());
  double end_sigma = model::model_distance(cb.deck_sigma.front(),
                                           cb.deck_sigma.back());
  CHECK(end_gamma == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(end_sigma == doctest::Approx(1.0).epsilon(1e-9));
  for (double a : cb.angle_sum_gamma) CHECK(a >= M_PI - 1e-6);
  for (double a : cb.angle_sum_sigma) CHECK(a >= M_PI - 1e-6);
}

TEST_CASE("degenerate bridge: identical decks, zero height") {
  auto X = catalog::build_flat_plane(3.0);
  auto [g, s] = planar_rays(*X, 0.0, 1.0);
  Bridge b = build_bridge(*X, g, g, 4, 0.0);
  CHECK(b.height == doctest::Approx(0.0));
  for (auto& st : b.struts) {
    CHECK(st.A == doctest::Approx(0.0));
    CHECK(st.B == doctest::Approx(0.0));
  }
  ComparisonBridge cb = develop_comparison_bridge(b, 0.0);
  for (int j = 0; j < 5; ++j)
    CHECK(model::model_distance(cb.deck_gamma[j], cb.deck_sigma[j]) <= 1e-9);
  (void)s;
}

TEST_CASE("spherical meridian bridge: valid struts, angle sums at least pi") {
  auto X = catalog::build_unit_sphere();
  auto [g, s] = meridians(*X, 0.1, M_PI / 2);
  Bridge b = build_bridge(*X, g, s, 8, 1.0);
  CHECK(b.length == doctest::Approx(M_PI / 2).epsilon(1e-9));
  CHECK(b.height <= 0.11);
  CHECK(hemisphere_check(b.length, b.height));
  ComparisonBridge cb = develop_comparison_bridge(b, 1.0);
  CHECK(cb.max_side_error <= 1e-9);
  for (double a : cb.angle_sum_gamma) CHECK(a >= M_PI - 1e-6);
  for (double a : cb.angle_sum_sigma) CHECK(a >= M_PI - 1e-6);
}

TEST_CASE("transverse growth audit on planar rays matches the flat ratio") {
  auto X = catalog::build_flat_plane(3.0);
  auto [g, s] = planar_rays(*X, 0.02, 1.0);
  Bridge b = build_bridge(*X, g, s, 4, 0.0);
  REQUIRE(b.height < 0.021);
  RelRauchRecord rec = rel_rauch_audit(b, 0.5, 0.75, 0.0);
  // flat chords from a common origin scale exactly linearly
  CHECK(rec.lhs == doctest::Approx(0.5 / 0.75).epsilon(1e-9));
  // kappa = 0 keeps only the warping ratio, whose sup sits at rbar = r
  CHECK(rec.rhs == doctest::Approx(0.5 / 0.75).epsilon(1e-9));
  CHECK(rec.holds);
}

TEST_CASE("transverse growth audit on spherical meridians") {
  auto X = catalog::build_unit_sphere();
  auto [g, s] = meridians(*X, 0.05, M_PI / 2);
  Bridge b = build_bridge(*X, g, s, 8, 1.0);
  double step = (M_PI / 2) / 8;
  double r = 3 * step, R = 5 * step;
  RelRauchRecord rec = rel_rauch_audit(b, r, R, 1.0);
  // chord ratio sits below sin(r)/sin(R); the h terms only add slack
  CHECK(rec.lhs <= std::sin(r) / std::sin(R) + 1e-6);
  CHECK(rec.holds);
  CHECK(rec.rhs >= rec.sup_ratio);
}

TEST_CASE("audit bound converges to the warping ratio as height shrinks") {
  auto X = catalog::build_unit_sphere();
  double step = (M_PI / 2) / 16;
  double r = 5 * step, R = 10 * step;
  double target = std::sin(r) / std::sin(R);
  std::vector<double> gaps;
  for (double gap : {0.1, 0.05, 0.025}) {
    auto [g, s] = meridians(*X, gap, M_PI / 2);
    Bridge b = build_bridge(*X, g, s, 16, 1.0);
    RelRauchRecord rec = rel_rauch_audit(b, r, R, 1.0);
    CHECK(rec.holds);
    gaps.push_back(rec.rhs - target);
  }
  CHECK(gaps[0] > gaps[1]);
  CHECK(gaps[1] > gaps[2]);
  CHECK(gaps[0] / gaps[1] >= 1.8);
  CHECK(gaps[1] / gaps[2] >= 1.8);
}

TEST_CASE("triangle comparison certificates and the flat-vs-negative "
          "counterexample") {
  auto sphere = catalog::build_unit_sphere();
  auto r1 = cat_triangle_test(*sphere, 1.0, 20, 20);
  CHECK(r1.certified);
  CHECK(r1.n_checked > 0);

  auto plane = catalog::build_flat_plane(2.0);
  auto r0 = cat_triangle_test(*plane, 0.0, 20, 20);
  CHECK(r0.certified);

  // a flat chart is not curvature-bounded above by -1
  auto rneg = cat_triangle_test(*plane, -1.0, 20, 20);
  CHECK_FALSE(rneg.certified);
  CHECK(rneg.worst_violation > 0);

  auto triple = catalog::build_triple_hemisphere();
  auto rt = cat_triangle_test(*triple, 1.0, 12, 12);
  CHECK(rt.certified);
}

TEST_CASE("angle comparison monotone under shrinking") {
  auto plane = catalog::build_flat_plane(2.0);
  auto a0 = angle_comparison_test(*plane, 0.0, 10);
  CHECK(a0.certified);
  CHECK(a0.n_checked > 0);

  auto sphere = catalog::build_unit_sphere();
  auto a1 = angle_comparison_test(*sphere, 1.0, 10);
  CHECK(a1.certified);

  auto bi = catalog::build_tetra_bisphere();
  auto ab = angle_comparison_test(*bi, 1.0, 6);
  CHECK(ab.certified);
}

TEST_CASE("no symmetric conjugacy below the comparison diameter") {
  auto sphere = catalog::build_unit_sphere();
  auto sched = ShrinkSchedule::standard(0.05, 0.1, 2, 8);
  auto rep = rauch_conjugate_bound_audit(*sphere, 1.0, sched, 6);
  CHECK(rep.n_tested > 0);
  CHECK(rep.n_symmetric == 0);
}
