// Acceptance suite: ten criteria, one pass/fail line each.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <atomic>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "lengthlab/catalog.hpp"
#include "lengthlab/conjugacy.hpp"
#include "lengthlab/cut_locus.hpp"
#include "lengthlab/fans.hpp"
#include "lengthlab/model_space.hpp"
#include "lengthlab/parallel.hpp"
#include "lengthlab/rauch.hpp"

using namespace lengthlab;

namespace {

void report(int id, bool ok, const std::string& what) {
  std::printf("criterion %2d: %s - %s\n", id, ok ? "PASS" : "FAIL",
              what.c_str());
  std::fflush(stdout);
}

Vec3 random_unit(Rng& rng) {
  std::normal_distribution<double> g(0, 1);
  Vec3 v{g(rng), g(rng), g(rng)};
  double n = std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
  while (n < 1e-6) {
    v = {g(rng), g(rng), g(rng)};
    n = std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
  }
  return {v.x / n, v.y / n, v.z / n};
}

// Chord-sum arclength of the great circle a -> b, independent of the
// model-space distance code path.
double great_circle_chord_sum(const Vec3& a, const Vec3& b, int n) {
  double dot = a.x * b.x + a.y * b.y + a.z * b.z;
  Vec3 w{b.x - dot * a.x, b.y - dot * a.y, b.z - dot * a.z};
  double wn = std::sqrt(w.x * w.x + w.y * w.y + w.z * w.z);
  if (wn < 1e-12) return 0;  // coincident (antipodal handled by caller)
  Vec3 u{w.x / wn, w.y / wn, w.z / wn};
  double theta = std::atan2(wn, dot);
  double len = 0;
  Vec3 prev = a;
  for (int i = 1; i <= n; ++i) {
    double t = theta * i / n;
    Vec3 cur{std::cos(t) * a.x + std::sin(t) * u.x,
             std::cos(t) * a.y + std::sin(t) * u.y,
             std::cos(t) * a.z + std::sin(t) * u.z};
    double dx = cur.x - prev.x, dy = cur.y - prev.y, dz = cur.z - prev.z;
    len += std::sqrt(dx * dx + dy * dy + dz * dz);
    prev = cur;
  }
  return len;
}

struct CatalogEntry {
  std::string name;
  catalog::SpacePtr space;
};

std::vector<CatalogEntry> full_catalog() {
  std::vector<CatalogEntry> out;
  out.push_back({"line_pile", catalog::build_line_pile(3, true)});
  out.push_back({"pinned_sector", catalog::build_pinned_sector(M_PI / 3, 1.0)});
  out.push_back({"rational_line", catalog::build_rationally_attached_line(3, 2.0)});
  out.push_back({"circle_with_chord", catalog::build_circle_with_chord(1.0, 1.0)});
  out.push_back({"tetra_bisphere", catalog::build_tetra_bisphere()});
  out.push_back({"triple_hemisphere", catalog::build_triple_hemisphere()});
  out.push_back({"flat_disk", catalog::build_flat_disk(1.0)});
  out.push_back({"cube", catalog::build_cube_surface(1.0)});
  out.push_back({"flat_torus", catalog::build_flat_torus(1.0)});
  out.push_back({"cylinder_line", catalog::build_cylinder_line(2, 3.0)});
  out.push_back({"sphere", catalog::build_unit_sphere()});
  out.push_back({"flat_plane", catalog::build_flat_plane(2.0)});
  return out;
}

GeodesicPath meridian(const ChartComplex& X) {
  return chart_segment(X, 0, {0, 0, 1}, {0, 0, -1});
}

}  // namespace

TEST_CASE("criterion 1: model-space oracle equivalence") {
  Rng rng(1234);
  double worst_dist = 0;
  for (int i = 0; i < 1000; ++i) {
    Vec3 a = random_unit(rng), b = random_unit(rng);
    model::ModelPoint A{1, a}, B{1, b};
    double oracle = great_circle_chord_sum(a, b, 20000);
    worst_dist = std::max(worst_dist, std::fabs(model::model_distance(A, B) - oracle));
  }

  double worst_rt = 0;
  std::uniform_real_distribution<double> u(0.1, 1.4);
  for (int i = 0; i < 1000; ++i) {
    double a = u(rng), b = u(rng);
    std::uniform_real_distribution<double> uc(std::fabs(a - b) + 1e-3,
                                              a + b - 1e-3);
    double c = uc(rng);
    if (a + b + c >= 2 * M_PI - 1e-3) continue;
    auto T = model::comparison_triangle(1.0, a, b, c);
    worst_rt = std::max(
        {worst_rt, std::fabs(model::model_distance(T.B, T.C) - a),
         std::fabs(model::model_distance(T.C, T.A) - b),
         std::fabs(model::model_distance(T.A, T.B) - c)});
  }

  bool ok = worst_dist <= 1e-7 && worst_rt <= 1e-9;
  std::ostringstream os;
  os << "model oracle: max |dist - integrator| = " << worst_dist
     << " (<= 1e-7), max triangle side round-trip = " << worst_rt
     << " (<= 1e-9) over 1000 pairs each";
  report(1, ok, os.str());
  CHECK(ok);
}

TEST_CASE("criterion 2: catalog closed-form values") {
  std::ostringstream os;
  bool ok = true;

  auto pile = catalog::build_line_pile(3, true);
  double d_pile = distance(*pile, pile->points[0].reps[0],
                           pile->points[1].reps[0])
                      .d;
  ok = ok && std::fabs(d_pile - 1.0) <= 1e-6;
  os << "line pile d(p,q) = " << d_pile;

  auto sector = catalog::build_pinned_sector(M_PI / 3, 1.0);
  auto rr = radius_report(*sector, sector->points[0].reps[0], 10.0,
                          ShrinkSchedule::standard(0.3, 0.6, 3, 8));
  bool sector_ok = !rr.first_inj.is_inf() &&
                   std::fabs(rr.first_inj.value() - M_PI) <= 2e-2 &&
                   rr.min_rad.is_inf();
  ok = ok && sector_ok;
  os << "; pinned sector FirstInj(p1) = " << rr.first_inj.str()
     << ", MinRad(p1) = " << rr.min_rad.str_at_horizon(10.0);

  auto disk = catalog::build_flat_disk(1.0);
  auto cuts = find_cut_points(*disk, {0, {0, 0, 0}}, 3.0);
  auto mins = min_cut(*disk, {0, {0, 0, 0}}, 3.0);
  ok = ok && cuts.cuts.empty() && mins.cuts.empty();
  os << "; flat disk cut points to horizon 3: " << cuts.cuts.size()
     << " (MinCut " << mins.cuts.size() << ")";

  int depth = 3;
  auto rat = catalog::build_rationally_attached_line(depth, 2.0);
  Rng rng(1234);
  ExtReal ui = unique_inj(*rat, 24, 0.9, rng);
  bool rat_ok = !ui.is_inf() && ui.value() <= 1.0 / depth + rat->eta + 1e-6;
  ok = ok && rat_ok;
  os << "; rational line depth " << depth << " UniqueInj = " << ui.str()
     << " (<= 1/" << depth << " + eta = " << 1.0 / depth + rat->eta << ")";

  report(2, ok, os.str());
  CHECK(ok);
}

TEST_CASE("criterion 3: radius chain on every catalog space") {
  auto spaces = full_catalog();
  auto sched = ShrinkSchedule::standard(0.05, 0.1, 2, 6);
  std::vector<std::string> violations(spaces.size());
  par::parallel_for(spaces.size(), [&](size_t i) {
    const auto& X = *spaces[i].space;
    Rng rng(1234 + i);
    SpacePoint p = X.points.empty() ? X.sample_point(rng)
                                    : X.points[0].reps[0];
    double horizon = std::min(1.2, 0.9 * X.min_chart_diameter() +
                                       (X.num_charts() > 1 ? 1.0 : 0.0));
    auto rep = radius_report(X, p, horizon, sched, 4);
    auto chain = check_radius_chain(X, rep);
    if (!chain.ok) {
      std::string all;
      for (const auto& v : chain.violations) all += v + "; ";
      violations[i] = spaces[i].name + ": " + all;
    }
  });
  int n_bad = 0;
  std::string first;
  for (const auto& v : violations)
    if (!v.empty()) {
      if (first.empty()) first = v;
      ++n_bad;
    }
  std::ostringstream os;
  os << "radius chain (FirstInj = UniqueInj = SymInj <= MinRad, UltInj <= "
        "SymInj) on "
     << spaces.size() << " catalog spaces: " << n_bad << " violations"
     << (first.empty() ? "" : " [" + first + "]");
  report(3, n_bad == 0, os.str());
  CHECK(n_bad == 0);
}

TEST_CASE("criterion 4: conjugacy on the sphere") {
  auto X = catalog::build_unit_sphere();
  GeodesicPath g = meridian(*X);
  auto s4 = ShrinkSchedule::standard(0.3, 0.6, 4, 8);

  auto sym = detect_symmetric(*X, g, s4);
  auto unr = detect_unreachable(*X, g, s4);
  bool pole_ok = sym.kind == VerdictKind::symmetric &&
                 unr.kind == VerdictKind::unreachable &&
                 sym.levels_completed == 4 && unr.levels_completed == 4;

  // sub-bound geodesics stay clean
  bool clean = true;
  std::vector<double> lens = {1.0, 2.0, 0.9 * M_PI};
  std::vector<int> bad(lens.size(), 0);
  par::parallel_for(lens.size(), [&](size_t i) {
    double th = lens[i];
    GeodesicPath h = chart_segment(*X, 0, {0, 0, 1},
                                   {std::sin(th), 0, std::cos(th)});
    if (detect_symmetric(*X, h, s4).kind != VerdictKind::none) bad[i] = 1;
    if (detect_unreachable(*X, h, s4).kind != VerdictKind::none) bad[i] = 1;
  });
  for (int b : bad) clean = clean && b == 0;

  ExtReal ucr = ult_conj_radius(*X, {0, {0, 0, 1}}, 4.0,
                                ShrinkSchedule::standard(0.3, 0.6, 3, 8), 3);
  bool ucr_ok = !ucr.is_inf() && std::fabs(ucr.value() - M_PI) <= 5e-2;

  bool ok = pole_ok && clean && ucr_ok;
  std::ostringstream os;
  os << "sphere meridian symmetric=" << to_string(sym.kind)
     << " unreachable=" << to_string(unr.kind)
     << " at K=4; sub-0.9pi geodesics clean=" << (clean ? "yes" : "no")
     << "; ult_conj_radius = " << ucr.str() << " (pi +- 5e-2)";
  report(4, ok, os.str());
  CHECK(ok);
}

TEST_CASE("criterion 5: conjugate-length bound audit") {
  auto sched = ShrinkSchedule::standard(0.05, 0.1, 2, 8);
  struct Case {
    std::string name;
    catalog::SpacePtr X;
    double kappa;
  };
  std::vector<Case> cases = {
      {"sphere", catalog::build_unit_sphere(), 1.0},
      {"triple_hemisphere", catalog::build_triple_hemisphere(), 1.0},
      {"flat_torus", catalog::build_flat_torus(1.0), 0.0}};
  bool ok = true;
  std::ostringstream os;
  os << "no symmetric conjugacy below the curvature diameter bound:";
  for (const auto& c : cases) {
    auto rep = rauch_conjugate_bound_audit(*c.X, c.kappa, sched, 50, 3.0);
    ok = ok && rep.n_tested >= 50 && rep.n_symmetric == 0;
    os << " " << c.name << " " << rep.n_symmetric << "/" << rep.n_tested
       << " symmetric;";
  }
  report(5, ok, os.str());
  CHECK(ok);
}

TEST_CASE("criterion 6: relative Rauch inequality") {
  int n_flat = 100, n_sph = 100;
  std::atomic<int> held{0};
  double worst = -1e9;

  auto P = catalog::build_flat_plane(3.0);
  std::vector<double> flat_excess(n_flat, -1e9);
  par::parallel_for(n_flat, [&](size_t i) {
    Rng rng(1000 + i);
    std::uniform_real_distribution<double> uphi(0.005, 0.03), ulen(0.8, 1.2);
    double phi = uphi(rng), L = ulen(rng);
    auto g = chart_segment(*P, 0, {0, 0, 0}, {L, 0, 0});
    auto s = chart_segment(*P, 0, {0, 0, 0},
                           {L * std::cos(phi), L * std::sin(phi), 0});
    Bridge b = build_bridge(*P, g, s, 16, 0.0);
    // radii exactly on partition points (equal-arclength steps of L/16)
    auto rec = rel_rauch_audit(b, 5 * L / 16, 11 * L / 16, 0.0);
    flat_excess[i] = rec.lhs - rec.rhs;
    if (rec.holds) ++held;
  });

  auto S = catalog::build_unit_sphere();
  std::vector<double> sph_excess(n_sph, -1e9);
  par::parallel_for(n_sph, [&](size_t i) {
    Rng rng(2000 + i);
    std::uniform_real_distribution<double> ugap(0.01, 0.05);
    double gap = ugap(rng), L = M_PI / 2;
    auto g = chart_segment(*S, 0, {0, 0, 1}, {1, 0, 0});
    auto s = chart_segment(*S, 0, {0, 0, 1},
                           {std::cos(gap), std::sin(gap), 0});
    Bridge b = build_bridge(*S, g, s, 16, 1.0);
    double step = L / 16;
    auto rec = rel_rauch_audit(b, 5 * step, 10 * step, 1.0);
    sph_excess[i] = rec.lhs - rec.rhs;
    if (rec.holds) ++held;
  });
  for (double e : flat_excess) worst = std::max(worst, e);
  for (double e : sph_excess) worst = std::max(worst, e);

  // shrinking-height meridian family: rhs converges to the sup ratio
  std::vector<double> gaps = {0.1, 0.05, 0.025}, rhs_gap;
  for (double gap : gaps) {
    auto g = chart_segment(*S, 0, {0, 0, 1}, {1, 0, 0});
    auto s = chart_segment(*S, 0, {0, 0, 1},
                           {std::cos(gap), std::sin(gap), 0});
    Bridge b = build_bridge(*S, g, s, 16, 1.0);
    double step = (M_PI / 2) / 16;
    auto rec = rel_rauch_audit(b, 5 * step, 10 * step, 1.0);
    rhs_gap.push_back(rec.rhs - rec.sup_ratio);
  }
  double ratio1 = rhs_gap[0] / std::max(rhs_gap[1], 1e-12);
  double ratio2 = rhs_gap[1] / std::max(rhs_gap[2], 1e-12);
  bool conv_ok = ratio1 >= 1.8 && ratio2 >= 1.8;

  bool ok = held == n_flat + n_sph && worst <= 1e-6 && conv_ok;
  std::ostringstream os;
  os << "relative Rauch holds on " << held.load() << "/" << (n_flat + n_sph)
     << " sampled bridges (worst lhs - rhs = " << worst
     << "); shrinking-height rhs gaps shrink by " << ratio1 << "x, " << ratio2
     << "x (>= 1.8)";
  report(6, ok, os.str());
  CHECK(ok);
}

TEST_CASE("criterion 7: iterative family extension on the sphere") {
  auto X = catalog::build_unit_sphere();
  ABConfig cfg;
  cfg.T = 2 * M_PI / 3;
  cfg.T0 = 0.1;
  bool constants = cfg.constants_ok();

  SpacePoint u{0, {0, 0, 1}};
  double th = cfg.T;
  GeodesicPath g = chart_segment(*X, 0, {0, 0, 1},
                                 {std::sin(th), 0, std::cos(th)});
  double thw = th + 0.05, az = 0.02;
  SpacePoint w{0,
               {std::sin(thw) * std::cos(az), std::sin(thw) * std::sin(az),
                std::cos(thw)}};
  auto res = extend_family_AB(*X, g, cfg, u, w);
  bool ratios_ok = true;
  double worst_ratio = 0;
  for (double r : res.ratios) {
    worst_ratio = std::max(worst_ratio, r);
    ratios_ok = ratios_ok && r <= 45.0 / 48 + 0.02;
  }
  bool minimal = !res.limit.legs.empty() &&
                 res.limit.length() <= distance(*X, u, w).d + 1e-3 &&
                 is_minimizing(*X, res.limit, 1e-4);

  bool ok = constants && res.converged && ratios_ok && minimal;
  std::ostringstream os;
  os << "constants check " << (constants ? "holds" : "fails")
     << "; iteration converged=" << (res.converged ? "yes" : "no") << " in "
     << res.iterations << " steps, worst ratio " << worst_ratio
     << " (<= " << 45.0 / 48 + 0.02
     << "), limit minimality certificate " << (minimal ? "passes" : "fails");
  report(7, ok, os.str());
  CHECK(ok);
}

TEST_CASE("criterion 8: fan lemmas") {
  auto spaces = full_catalog();
  int per_space = 20;
  size_t total = spaces.size() * per_space;
  std::vector<int> bad(total, 0);
  par::parallel_for(total, [&](size_t k) {
    const auto& X = *spaces[k / per_space].space;
    Rng rng(5000 + k);
    // random 4-sample polyline inside one chart, steps bounded by the
    // uniformly minimizing scale
    SpacePoint p0 = X.sample_point(rng);
    const Chart& ch = X.chart(p0.chart);
    double cap = 0.25 * ch.diameter();
    if (X.delta_witness > 0) cap = std::min(cap, 0.25 * X.delta_witness);
    std::vector<SpacePoint> pts = {p0};
    for (int j = 0; j < 3; ++j) {
      Coord target = ch.sample(rng);
      double d = ch.dist(pts.back().c, target);
      if (d < 1e-9) {
        --j;
        continue;
      }
      pts.push_back({p0.chart, ch.point_at(pts.back().c, target,
                                           std::min(d, cap))});
    }
    PolyCurve C(X, pts);
    if (C.length() < 1e-9) return;
    Fan f = build_fan(X, C, C.length() + 1.0, -1, C.length() / 16);
    if (f.status != FanStatus::completed || !fan_length_check(C, f).ok)
      bad[k] = 1;
  });
  int n_bad = 0;
  for (int b : bad) n_bad += b;

  // fan along a geodesic reproduces its restrictions
  auto P = catalog::build_flat_plane(3.0);
  PolyCurve G(*P, {{0, {0, 0, 0}}, {0, {0.5, 0, 0}}, {0, {1, 0, 0}}});
  Fan fg = build_fan(*P, G, 10.0);
  bool geo_ok = fg.status == FanStatus::completed;
  for (size_t i = 0; i < fg.sigmas.size(); ++i)
    geo_ok = geo_ok &&
             std::fabs(fg.sigmas[i].length() - fg.s_params[i]) <= 1e-6;

  // equator fan terminates at the conjugacy bound
  auto S = catalog::build_unit_sphere();
  std::vector<SpacePoint> eq;
  for (int i = 0; i <= 64; ++i) {
    double t = 2 * M_PI * i / 64;
    eq.push_back({0, {std::cos(t), std::sin(t), 0}});
  }
  PolyCurve E(*S, eq);
  Fan fe = build_fan(*S, E, M_PI);
  bool eq_ok = fe.status == FanStatus::hit_ultconj &&
               fe.limsup_length >= M_PI - 0.05 &&
               fe.limsup_length <= M_PI + 1e-9;

  bool ok = n_bad == 0 && geo_ok && eq_ok;
  std::ostringstream os;
  os << "fan-length inequality on " << total << " random polylines ("
     << n_bad << " failures); geodesic fan equality "
     << (geo_ok ? "holds" : "fails") << "; equator fan limsup = "
     << fe.limsup_length << " in [pi - 0.05, pi]";
  report(8, ok, os.str());
  CHECK(ok);
}

TEST_CASE("criterion 9: minimal-radius pair search") {
  auto C = catalog::build_circle_with_chord(1.0, 1.0);
  auto resC = klingenberg_search(*C, 3.0,
                                 ShrinkSchedule::standard(0.1, 0.2, 2, 6), 6);
  bool c_ok = !resC.ultimate_branch &&
              std::fabs(resC.loop.length() - 2.0) <= 1e-3;

  auto T = catalog::build_flat_torus(1.0);
  auto resT = klingenberg_search(*T, 1.2,
                                 ShrinkSchedule::standard(0.05, 0.1, 2, 6), 4);
  bool t_ok = !resT.ultimate_branch &&
              std::fabs(resT.loop.length() - 1.0) <= 1e-3;

  auto S = catalog::build_unit_sphere();
  auto resS = klingenberg_search(*S, 4.0,
                                 ShrinkSchedule::standard(0.3, 0.6, 3, 8), 2);
  double dS = resS.ultimate_branch ? distance(*S, resS.p, resS.q).d : 0;
  bool s_ok = resS.ultimate_branch && std::fabs(dS - M_PI) <= 5e-2;

  bool ok = c_ok && t_ok && s_ok;
  std::ostringstream os;
  os << "circle-with-chord closed geodesic length "
     << (resC.ultimate_branch ? -1 : resC.loop.length())
     << " (2.000 +- 1e-3); flat torus "
     << (resT.ultimate_branch ? -1 : resT.loop.length())
     << " (1.000 +- 1e-3); sphere ultimate pair d = " << dS
     << " (pi +- 5e-2)";
  report(9, ok, os.str());
  CHECK(ok);
}

TEST_CASE("criterion 10: comparison certificates and counterexample") {
  auto S = catalog::build_unit_sphere();
  auto P = catalog::build_flat_plane(2.0);
  auto H = catalog::build_triple_hemisphere();

  bool cat_s = cat_triangle_test(*S, 1.0, 60, 8).certified;
  bool cat_p = cat_triangle_test(*P, 0.0, 60, 8).certified;
  bool cat_h = cat_triangle_test(*H, 1.0, 60, 8).certified;
  bool ang_s = angle_comparison_test(*S, 1.0, 40).certified;
  bool ang_p = angle_comparison_test(*P, 0.0, 40).certified;
  bool ang_h = angle_comparison_test(*H, 1.0, 40).certified;

  auto counter = cat_triangle_test(*P, -1.0, 60, 8);
  bool counter_ok = !counter.certified && counter.worst_violation > 0;

  bool ok = cat_s && cat_p && cat_h && ang_s && ang_p && ang_h && counter_ok;
  std::ostringstream os;
  os << "CAT/angle certificates: sphere(k=1) " << (cat_s && ang_s)
     << ", flat(k=0) " << (cat_p && ang_p) << ", triple hemisphere(k=1) "
     << (cat_h && ang_h) << "; flat chart vs k=-1 counterexample "
     << (counter_ok ? "found" : "missing") << " (violation "
     << counter.worst_violation << ")";
  report(10, ok, os.str());
  CHECK(ok);
}
