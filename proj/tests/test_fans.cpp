#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "lengthlab/catalog.hpp"
#include "lengthlab/fans.hpp"

using namespace lengthlab;

namespace {

std::vector<SpacePoint> flat_samples(const std::vector<Coord>& cs) {
  std::vector<SpacePoint> out;
  for (auto& c : cs) out.push_back({0, c});
  return out;
}

// planar circular arc of radius 1 around (0,1), starting at the origin
std::vector<Coord> planar_arc(double theta_max, int n) {
  std::vector<Coord> cs;
  for (int i = 0; i <= n; ++i) {
    double th = theta_max * i / n;
    cs.push_back({std::sin(th), 1 - std::cos(th), 0});
  }
  return cs;
}

}  // namespace

TEST_CASE("polyline curve: arclength parametrization") {
  auto X = catalog::build_flat_plane(3.0);
  PolyCurve C(*X, flat_samples({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}}));
  CHECK(C.length() == doctest::Approx(2.0));
  SpacePoint m = C.at(1.5);
  CHECK(m.c.x == doctest::Approx(1.0));
  CHECK(m.c.y == doctest::Approx(0.5));
}

TEST_CASE("fan along a geodesic reproduces its restrictions") {
  auto X = catalog::build_flat_plane(3.0);
  PolyCurve C(*X, flat_samples({{0, 0, 0}, {0.5, 0, 0}, {1, 0, 0}}));
  Fan f = build_fan(*X, C, 10.0);
  CHECK(f.status == FanStatus::completed);
  CHECK(f.s_params.back() == doctest::Approx(1.0));
  for (size_t i = 0; i < f.sigmas.size(); ++i)
    CHECK(f.sigmas[i].length() == doctest::Approx(f.s_params[i]).epsilon(1e-6));
  auto chk = fan_length_check(C, f);
  CHECK(chk.ok);
  CHECK(chk.worst_excess <= 1e-6);
}

TEST_CASE("fan along a planar arc: chords stay below the arclength") {
  auto X = catalog::build_flat_plane(3.0);
  PolyCurve C(*X, flat_samples(planar_arc(1.5, 48)));
  Fan f = build_fan(*X, C, 10.0);
  CHECK(f.status == FanStatus::completed);
  auto chk = fan_length_check(C, f);
  CHECK(chk.ok);
  // the final chord is strictly shorter than the arc
  double chord = f.sigmas.back().length();
  CHECK(chord < f.s_params.back() - 0.05);
}

TEST_CASE("fan along an S-shaped polyline satisfies the length inequality") {
  auto X = catalog::build_flat_plane(3.0);
  std::vector<Coord> cs;
  for (int i = 0; i <= 40; ++i) {
    double t = 2.0 * i / 40;
    cs.push_back({t, 0.4 * std::sin(M_PI * t), 0});
  }
  PolyCurve C(*X, flat_samples(cs));
  Fan f = build_fan(*X, C, 10.0);
  CHECK(f.status == FanStatus::completed);
  CHECK(fan_length_check(C, f).ok);
}

TEST_CASE("equator fan terminates at the working conjugacy bound") {
  auto X = catalog::build_unit_sphere();
  std::vector<SpacePoint> cs;
  for (int i = 0; i <= 64; ++i) {
    double th = 2 * M_PI * i / 64;
    cs.push_back({0, {std::cos(th), std::sin(th), 0}});
  }
  PolyCurve C(*X, cs);
  CHECK(C.length() == doctest::Approx(2 * M_PI).epsilon(1e-3));
  Fan f = build_fan(*X, C, M_PI);
  CHECK(f.status == FanStatus::hit_ultconj);
  CHECK(f.limsup_length >= M_PI - 0.05);
  CHECK(f.limsup_length <= M_PI + 1e-9);
}

TEST_CASE("band samples of a completed fan stay connected") {
  auto X = catalog::build_flat_plane(3.0);
  PolyCurve C(*X, flat_samples(planar_arc(1.5, 48)));
  Fan f = build_fan(*X, C, 10.0);
  Band b = fan_band(f, 0.5);
  REQUIRE(b.points.size() >= 3);
  for (size_t i = 1; i < b.points.size(); ++i)
    CHECK(distance(*X, b.points[i - 1], b.points[i]).d <= 4 * f.step);
}

TEST_CASE("square fan of a radial contraction is a family of segments") {
  auto X = catalog::build_flat_plane(3.0);
  std::vector<Coord> loop;
  for (int i = 0; i <= 12; ++i) {
    double th = 2 * M_PI * i / 12;
    loop.push_back({0.5 * std::cos(th), 0.5 * std::sin(th), 0});
  }
  HomotopyGrid H = contraction_grid(*X, 0, loop, {0, 0, 0}, 4);
  SquareFan sf = build_square_fan(*X, H, 10.0);
  REQUIRE(sf.ok);
  for (int t = 0; t <= H.T(); ++t)
    for (int s = 0; s <= H.S(); ++s) {
      double want = distance(*X, H.rows[0][0], H.rows[t][s]).d;
      CHECK(sf.sigma[t][s].length() == doctest::Approx(want).epsilon(1e-6));
    }
}

TEST_CASE("square fan of a spherical cap contraction uses minor arcs") {
  auto X = catalog::build_unit_sphere();
  std::vector<Coord> loop;
  double col = 0.4;
  for (int i = 0; i <= 10; ++i) {
    double th = 2 * M_PI * i / 10;
    loop.push_back({std::sin(col) * std::cos(th), std::sin(col) * std::sin(th),
                    std::cos(col)});
  }
  HomotopyGrid H = contraction_grid(*X, 0, loop, {0, 0, 1}, 4);
  SquareFan sf = build_square_fan(*X, H, M_PI);
  REQUIRE(sf.ok);
  for (int s = 0; s <= H.S(); ++s)
    CHECK(sf.sigma[H.T()][s].length() <= col + 1e-6);
}

TEST_CASE("square fan constant in t does not depend on t") {
  auto X = catalog::build_flat_plane(3.0);
  std::vector<Coord> loop;
  for (int i = 0; i <= 10; ++i) {
    double th = 2 * M_PI * i / 10;
    loop.push_back({0.4 + 0.3 * std::cos(th), 0.3 * std::sin(th), 0});
  }
  HomotopyGrid H;
  std::vector<SpacePoint> row = flat_samples(loop);
  for (int t = 0; t <= 3; ++t) H.rows.push_back(row);
  SquareFan sf = build_square_fan(*X, H, 10.0);
  REQUIRE(sf.ok);
  for (int s = 0; s <= H.S(); ++s)
    CHECK(gamma_distance(*X, sf.sigma[0][s], sf.sigma[3][s], 12).d_gamma() <=
          1e-6);
}

TEST_CASE("homotopy audit statuses") {
  SUBCASE("trivial curve is vacuous") {
    auto X = catalog::build_flat_plane(3.0);
    GeodesicPath c = chart_segment(*X, 0, {0, 0, 0}, {0, 0, 0});
    HomotopyGrid H;
    auto rep = long_homotopy_audit(*X, c, H, 10.0);
    CHECK(rep.status == HomotopyAuditStatus::vacuous_pass);
  }

  SUBCASE("equator with rotate-to-pole homotopy hits the row bound") {
    auto X = catalog::build_unit_sphere();
    std::vector<Coord> loop;
    int n = 32;
    for (int i = 0; i <= n; ++i) {
      double th = 2 * M_PI * i / n;
      loop.push_back({std::cos(th), std::sin(th), 0});
    }
    GeodesicPath c;
    c.space = X.get();
    c.leg_chart = {0};
    c.legs = {loop};
    auto rep = long_homotopy_audit(*X, c,
                                   contraction_grid(*X, 0, loop, {0, 0, 1}, 6),
                                   M_PI);
    CHECK(rep.status == HomotopyAuditStatus::rows_exceed_bound);
    CHECK(rep.max_row_length == doctest::Approx(2 * M_PI).epsilon(1e-2));
  }

  SUBCASE("grid that does not end at the audited loop is rejected") {
    auto X = catalog::build_flat_torus(1.0);
    // the wrap loop at y = 0.3, a closed geodesic of length 1
    GeodesicPath c;
    c.space = X.get();
    c.leg_chart = {0};
    std::vector<Coord> leg;
    int n = 16;
    for (int i = 0; i <= n; ++i)
      leg.push_back({static_cast<double>(i) / n, 0.3, 0});
    c.legs = {leg};
    // a tent sweep: closed rows contracting to a point, but the last row
    // traces an out-and-back segment, not the wrap loop
    HomotopyGrid H;
    int T = 4, S = 16;
    for (int t = 0; t <= T; ++t) {
      std::vector<SpacePoint> row;
      for (int s = 0; s <= S; ++s) {
        double u = static_cast<double>(s) / S;
        double tent = std::min(u, 1 - u);
        row.push_back({0, {static_cast<double>(t) / T * tent, 0.3, 0}});
      }
      H.rows.push_back(std::move(row));
    }
    auto rep = long_homotopy_audit(*X, c, H, 10.0);
    CHECK(rep.status == HomotopyAuditStatus::grid_invalid);
  }

  SUBCASE("non-geodesic loop with a genuine contraction closes throughout") {
    auto X = catalog::build_flat_plane(3.0);
    std::vector<Coord> loop;
    int n = 16;
    for (int i = 0; i <= n; ++i) {
      double th = 2 * M_PI * i / n;
      loop.push_back({0.5 * std::cos(th), 0.5 * std::sin(th), 0});
    }
    GeodesicPath c;
    c.space = X.get();
    c.leg_chart = {0};
    c.legs = {loop};
    auto rep = long_homotopy_audit(
        *X, c, contraction_grid(*X, 0, loop, {0, 0, 0}, 5), 10.0);
    // a planar circle is not a closed geodesic, so the audit's terminal
    // contradiction never materializes and the closed pair survives
    CHECK(rep.status == HomotopyAuditStatus::closed_throughout);
  }
}
