#include "lengthlab/cut_locus.hpp"

#include <algorithm>
#include <cmath>

namespace lengthlab {

namespace {

// All geodesics from p grown chunk-by-chunk to L_max; rays that cannot take
// the next chunk are kept at their maximal length.
struct Ray {
  GeodesicPath g;
  bool stuck = false;  // could not extend further
};

std::vector<Ray> emanating(const ChartComplex& X, const SpacePoint& p,
                           double L_max, int n_dirs) {
  double s0 = std::min(0.05 * X.min_chart_diameter(), 0.1 * L_max);
  double chunk = std::min(0.2 * X.min_chart_diameter(), L_max);
  std::vector<Ray> rays;
  for (auto& pp : X.presences(p))
    for (auto& d0 : X.chart(pp.chart).ring(pp.c, s0, n_dirs))
      rays.push_back({chart_segment(X, pp.chart, pp.c, d0), false});
  bool progress = true;
  while (progress) {
    progress = false;
    std::vector<Ray> next;
    for (auto& r : rays) {
      if (r.stuck || r.g.length() >= L_max - 1e-9) {
        next.push_back(r);
        continue;
      }
      double step = std::min(chunk, L_max - r.g.length());
      std::vector<GeodesicPath> exts;
      try {
        exts = extend_geodesic(X, r.g, step, 1e-3);
      } catch (const std::exception&) {
      }
      if (exts.empty()) {
        next.push_back({r.g, true});
      } else {
        if (exts.size() > 4) exts.resize(4);
        for (auto& e : exts) next.push_back({std::move(e), false});
        progress = true;
      }
      if (next.size() > 128) break;
    }
    rays = std::move(next);
    if (rays.size() > 128) rays.resize(128);
  }
  return rays;
}

// first arclength at which g stops minimizing, or -1
double first_stop(const ChartComplex& X, const GeodesicPath& g) {
  double L = g.length();
  if (is_minimizing(X, g, 1e-6)) return -1;
  double lo = 0, hi = L;
  for (int it = 0; it < 60 && hi - lo > 1e-7; ++it) {
    double mid = 0.5 * (lo + hi);
    if (is_minimizing(X, g.prefix(mid / L), 1e-6))
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

std::vector<GeodesicPath> minimizers_at(const ChartComplex& X,
                                        const SpacePoint& p,
                                        const SpacePoint& q, double d) {
  double tol_len = 1e-5 * (1 + d);
  double eps_sep = std::max(1e-4, 0.02 * (1 + d));
  auto cands = enumerate_geodesics(X, p, q, d + 10 * tol_len, eps_sep);
  std::vector<GeodesicPath> mins;
  for (auto& c : cands)
    if (c.length() <= d + tol_len) mins.push_back(std::move(c));
  return mins;
}

// First parameter in (0, window] at which the ray's point has >= 2
// minimizers from p (coarse grid, then bisection), or -1. Valid only while
// the ray minimizes, so d(p, g(t)) = t.
double first_multi(const ChartComplex& X, const SpacePoint& p,
                   const GeodesicPath& g, double window) {
  double L = g.length();
  auto multi = [&](double t) {
    return minimizers_at(X, p, g.eval(t / L), t).size() >= 2;
  };
  const int G = 6;
  double prev = window / 50;
  if (multi(prev)) return prev;
  for (int i = 1; i <= G; ++i) {
    double t = window * i / G;
    if (multi(t)) {
      double lo = prev, hi = t;
      for (int it = 0; it < 40 && hi - lo > 1e-7; ++it) {
        double mid = 0.5 * (lo + hi);
        if (multi(mid))
          hi = mid;
        else
          lo = mid;
      }
      return hi;
    }
    prev = t;
  }
  return -1;
}

CutReport scan(const ChartComplex& X, const SpacePoint& p, double L_max,
               int n_dirs) {
  CutReport rep;
  rep.p = p;
  rep.horizon = L_max;
  double dedupe_tol = std::max(1e-4, 2 * X.eta);

  auto add_cut = [&](double t, const GeodesicPath& geo, bool check_minimal) {
    SpacePoint q = geo.end();
    for (auto& c : rep.cuts)
      if (std::fabs(c.dist - t) <= dedupe_tol &&
          distance(X, c.q, q).d <= dedupe_tol)
        return;
    CutPoint cp;
    cp.q = q;
    cp.dist = t;
    cp.geodesic = geo;
    cp.minimizers = minimizers_at(X, p, q, t);
    cp.first = cp.minimizers.size() >= 2;
    if (check_minimal) {
      // extensions past q: MinCut needs all of them to stop minimizing
      double h = std::min(0.25 * X.min_chart_diameter(), 0.5 * t);
      std::vector<GeodesicPath> exts;
      try {
        exts = extend_geodesic(X, geo, h, 1e-3);
      } catch (const std::exception&) {
      }
      cp.extensible = !exts.empty();
      if (cp.extensible) {
        bool all_stop = true;
        for (auto& e : exts) {
          if (is_minimizing(X, e, 1e-6)) {
            all_stop = false;
            break;
          }
        }
        cp.minimal = all_stop;
        if (cp.minimal) cp.extension = exts.front();
      }
    }
    rep.cuts.push_back(std::move(cp));
  };

  auto rays = emanating(X, p, L_max, n_dirs);
  for (auto& r : rays) {
    double L = r.g.length();
    if (L < 1e-9) continue;
    double t_stop = first_stop(X, r.g);
    // window over which the ray certifiably minimizes; rays that minimize
    // through the horizon can still pass through multi-minimizer cut points
    double window = t_stop > 0 ? t_stop : L;
    double t_c = first_multi(X, p, r.g, window);
    if (t_c > 0 && (t_stop < 0 || t_stop - t_c > dedupe_tol))
      add_cut(t_c, r.g.prefix(t_c / L), false);
    if (t_stop > 0)
      add_cut(t_stop, r.g.prefix(t_stop / L), true);
    else if (r.stuck && L < L_max - 1e-6 &&
             (t_c < 0 || window - t_c > dedupe_tol))
      add_cut(window, r.g, false);  // stuck endpoint, cut only if multi
  }
  // endpoint entries without multiplicity are not cut points
  rep.cuts.erase(std::remove_if(rep.cuts.begin(), rep.cuts.end(),
                                [](const CutPoint& c) {
                                  return !c.first && !c.extensible;
                                }),
                 rep.cuts.end());
  std::sort(rep.cuts.begin(), rep.cuts.end(),
            [](const CutPoint& a, const CutPoint& b) { return a.dist < b.dist; });
  return rep;
}

void annotate_conjugacy(const ChartComplex& X, CutReport& rep,
                        const ShrinkSchedule& s) {
  for (auto& c : rep.cuts) {
    auto v = detect_ultimate(X, c.geodesic, s);
    c.ultimate = v.kind == VerdictKind::ultimate;
    c.symmetric = c.ultimate && v.sub_kind == VerdictKind::symmetric;
    if (v.kind == VerdictKind::inconclusive)
      rep.note += "inconclusive conjugacy at dist " + std::to_string(c.dist) +
                  "; ";
  }
}

ExtReal min_dist(const CutReport& rep, bool CutPoint::* flag) {
  ExtReal best = ExtReal::infinity();
  for (auto& c : rep.cuts)
    if (c.*flag) best = best.min(ExtReal(c.dist));
  return best;
}

}  // namespace

CutReport find_cut_points(const ChartComplex& X, const SpacePoint& p,
                          double L_max, int n_dirs) {
  return scan(X, p, L_max, n_dirs);
}

CutReport min_cut(const ChartComplex& X, const SpacePoint& p, double L_max,
                  int n_dirs) {
  CutReport rep = scan(X, p, L_max, n_dirs);
  CutReport out;
  out.p = rep.p;
  out.horizon = rep.horizon;
  out.note = rep.note;
  for (auto& c : rep.cuts)
    if (c.minimal) out.cuts.push_back(std::move(c));
  return out;
}

ExtReal min_rad(const ChartComplex& X, const SpacePoint& p, double L_max,
                int n_dirs) {
  return min_dist(min_cut(X, p, L_max, n_dirs), &CutPoint::minimal);
}

ExtReal unique_inj(const ChartComplex& X, int sample_n, double horizon,
                   Rng& rng) {
  std::vector<SpacePoint> bases;
  // anchor half the bases at interface nodes: distance ties live there
  const auto& nodes = X.nodes();
  if (!nodes.empty()) {
    int want = std::max(1, sample_n / 2);
    size_t stride = std::max<size_t>(1, nodes.size() / want);
    for (size_t i = 0; i < nodes.size() && (int)bases.size() < want;
         i += stride)
      bases.push_back(nodes[i].reps.front());
  }
  while ((int)bases.size() < sample_n) bases.push_back(X.sample_point(rng));
  std::uniform_real_distribution<double> u01(0.1, 1.0);

  auto rung_unique = [&](double r) {
    for (auto& p : bases) {
      std::vector<SpacePoint> probes;
      for (auto& pp : X.presences(p)) {
        for (auto& c : X.chart(pp.chart).ring(pp.c, r, 8))
          probes.push_back({pp.chart, c});
        for (int j = 0; j < 3; ++j)
          for (auto& c : X.chart(pp.chart).ring(pp.c, r * u01(rng), 4))
            probes.push_back({pp.chart, c});
      }
      for (auto& q : probes) {
        double d = distance(X, p, q).d;
        if (d < 1e-9 || d > r + 1e-9) continue;
        // near-tie margin at the rung's resolution
        double margin = 0.05 * r + 2e-7;
        auto cands = enumerate_geodesics(X, p, q, d + margin, 1e-4);
        int n_min = 0;
        for (auto& c : cands)
          if (c.length() <= d + margin) ++n_min;
        if (n_min != 1) return false;
      }
    }
    return true;
  };

  double r = horizon;
  if (rung_unique(r)) return ExtReal::infinity();
  double floor = horizon / 1024;
  while (r > floor && !rung_unique(r / 2)) r /= 2;
  if (r <= floor) return ExtReal(0);
  double lo = r / 2, hi = r;  // lo passes, hi fails
  for (int it = 0; it < 12; ++it) {
    double mid = 0.5 * (lo + hi);
    if (rung_unique(mid))
      lo = mid;
    else
      hi = mid;
  }
  return ExtReal(lo);
}

CutReport sym_cut(const ChartComplex& X, const SpacePoint& p, double L_max,
                  const ShrinkSchedule& s, int n_dirs) {
  CutReport rep = scan(X, p, L_max, n_dirs);
  annotate_conjugacy(X, rep, s);
  CutReport out;
  out.p = rep.p;
  out.horizon = rep.horizon;
  out.note = rep.note;
  for (auto& c : rep.cuts)
    if (c.first || c.symmetric) out.cuts.push_back(std::move(c));
  return out;
}

CutReport ult_cut(const ChartComplex& X, const SpacePoint& p, double L_max,
                  const ShrinkSchedule& s, int n_dirs) {
  CutReport rep = scan(X, p, L_max, n_dirs);
  annotate_conjugacy(X, rep, s);
  CutReport out;
  out.p = rep.p;
  out.horizon = rep.horizon;
  out.note = rep.note;
  for (auto& c : rep.cuts)
    if (c.first || c.ultimate) out.cuts.push_back(std::move(c));
  return out;
}

ExtReal sym_inj(const ChartComplex& X, const SpacePoint& p, double L_max,
                const ShrinkSchedule& s, int n_dirs) {
  ExtReal best = ExtReal::infinity();
  for (auto& c : sym_cut(X, p, L_max, s, n_dirs).cuts)
    best = best.min(ExtReal(c.dist));
  return best;
}

ExtReal ult_inj(const ChartComplex& X, const SpacePoint& p, double L_max,
                const ShrinkSchedule& s, int n_dirs) {
  ExtReal best = ExtReal::infinity();
  for (auto& c : ult_cut(X, p, L_max, s, n_dirs).cuts)
    best = best.min(ExtReal(c.dist));
  return best;
}

RadiusReport radius_report(const ChartComplex& X, const SpacePoint& p,
                           double L_max, const ShrinkSchedule& s, int n_dirs) {
  RadiusReport r;
  r.p = p;
  r.horizon = L_max;
  r.schedule_hash = s.hash();
  r.cuts = scan(X, p, L_max, n_dirs);
  annotate_conjugacy(X, r.cuts, s);
  r.caveats = r.cuts.note;

  r.first_inj = min_dist(r.cuts, &CutPoint::first);
  r.min_rad = min_dist(r.cuts, &CutPoint::minimal);
  // unique: interior stop-minimizing points always witness a second
  // competitor; endpoint stops only when multiplicity confirms one
  r.unique_inj = ExtReal::infinity();
  for (auto& c : r.cuts.cuts)
    if (c.extensible || c.minimal || c.first)
      r.unique_inj = r.unique_inj.min(ExtReal(c.dist));
  r.sym_inj = r.unique_inj;
  r.ult_conj = ExtReal::infinity();
  for (auto& c : r.cuts.cuts) {
    if (c.first || c.symmetric) r.sym_inj = r.sym_inj.min(ExtReal(c.dist));
    if (c.ultimate) r.ult_conj = r.ult_conj.min(ExtReal(c.dist));
  }
  r.ult_inj = r.unique_inj.min(r.ult_conj);
  return r;
}

double default_tol_rad(const ChartComplex& X, double tol_geo) {
  return 5 * X.eta + 10 * tol_geo;
}

ChainCheck check_radius_chain(const ChartComplex& X, const RadiusReport& r,
                              double tol_rad) {
  if (tol_rad < 0) tol_rad = default_tol_rad(X);
  ChainCheck c;
  auto fail = [&](const std::string& m) {
    c.ok = false;
    c.violations.push_back(m);
  };
  if (!r.first_inj.approx(r.unique_inj, tol_rad))
    fail("first_inj != unique_inj: " + r.first_inj.str() + " vs " +
         r.unique_inj.str());
  if (!r.unique_inj.approx(r.sym_inj, tol_rad))
    fail("unique_inj != sym_inj: " + r.unique_inj.str() + " vs " +
         r.sym_inj.str());
  if (!r.sym_inj.le(r.min_rad, tol_rad))
    fail("sym_inj > min_rad: " + r.sym_inj.str() + " vs " + r.min_rad.str());
  if (!r.ult_inj.le(r.sym_inj, tol_rad))
    fail("ult_inj > sym_inj: " + r.ult_inj.str() + " vs " + r.sym_inj.str());
  if (!r.ult_inj.approx(r.ult_conj.min(r.unique_inj), tol_rad))
    fail("ult_inj != min(ult_conj, unique_inj)");
  // sampled inclusion: every minimal member has a sym member nearby
  for (auto& m : r.cuts.cuts) {
    if (!m.minimal) continue;
    bool near = false;
    for (auto& s : r.cuts.cuts) {
      if (!(s.first || s.symmetric)) continue;
      if (distance(X, m.q, s.q).d <= std::max(tol_rad, 5 * X.eta)) {
        near = true;
        break;
      }
    }
    if (!near) fail("minimal cut member with no nearby sym_cut member");
  }
  return c;
}

KlingenbergResult klingenberg_search(const ChartComplex& X, double L_max,
                                     const ShrinkSchedule& s, int n_base,
                                     std::uint64_t seed) {
  Rng rng(seed);
  std::vector<SpacePoint> bases;
  for (int i = 0; i < X.num_charts(); ++i)
    bases.push_back({i, X.chart(i).sample(rng)});
  while ((int)bases.size() < n_base) bases.push_back(X.sample_point(rng));

  KlingenbergResult res;
  double best = 1e300;
  CutPoint best_cut;
  SpacePoint best_p;
  for (auto& b : bases) {
    CutReport rep = min_cut(X, b, L_max);
    for (auto& cp : rep.cuts)
      if (cp.dist < best) {
        best = cp.dist;
        best_cut = cp;
        best_p = b;
      }
  }
  if (best >= 1e300) {
    res.note = "no minimal cut found up to the horizon";
    res.caveat = true;
    return res;
  }
  res.p = best_p;
  res.q = best_cut.q;
  res.min_rad = best;
  res.geodesic = best_cut.geodesic;

  auto v = detect_ultimate(X, best_cut.geodesic, s);
  if (v.kind == VerdictKind::ultimate) {
    res.ultimate_branch = true;
    return res;
  }
  if (v.kind == VerdictKind::inconclusive) {
    res.caveat = true;
    res.note = "inconclusive conjugacy; returning loop branch too";
  }
  // loop branch: two minimizers spliced and shortened as a closed curve
  std::vector<GeodesicPath> mins = best_cut.minimizers;
  if (mins.size() < 2) {
    res.caveat = true;
    res.note += " single minimizer at the minimal cut";
    return res;
  }
  double h = 0.3 * (X.delta_witness > 0 ? X.delta_witness
                                        : 0.5 * X.min_chart_diameter());
  GeodesicPath g1 = mins[0], g2 = mins[1];
  g1.densify(h);
  g2.densify(h);
  std::vector<SpacePoint> poly;
  int n1 = g1.num_segments(), n2 = g2.num_segments();
  for (int i = 0; i <= n1; ++i) poly.push_back(g1.eval((double)i / n1));
  for (int i = n2 - 1; i >= 1; --i) poly.push_back(g2.eval((double)i / n2));
  res.loop = shorten(X, poly, true);
  return res;
}

}  // namespace lengthlab
