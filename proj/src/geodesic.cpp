#include "lengthlab/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>

namespace lengthlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCoincide = 1e-9;

double leg_length(const ChartComplex& X, const GeodesicPath& g, size_t li) {
  const Chart& ch = X.chart(g.leg_chart[li]);
  const auto& pts = g.legs[li];
  double L = 0;
  for (size_t k = 0; k + 1 < pts.size(); ++k) L += ch.dist(pts[k], pts[k + 1]);
  return L;
}

// golden-section minimization on [lo, hi]
template <class F>
double golden_min(F f, double lo, double hi, int iters, double* fbest) {
  const double gr = 0.6180339887498949;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < iters && hi - lo > 1e-13; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = f(x2);
    }
  }
  double x = 0.5 * (lo + hi);
  if (fbest) *fbest = f(x);
  return x;
}

// Crossing joining a point known (by coordinates) in two charts. Falls back
// to a fixed (non-slidable) crossing when the junction is not a single
// arc/gluing incidence (e.g. a chart corner).
Crossing make_crossing(const ChartComplex& X, int chart_prev,
                       const Coord& coord_prev, int chart_next,
                       const Coord& coord_next) {
  for (size_t ai = 0; ai < X.arcs.size(); ++ai) {
    int sp = -1, sn = -1;
    double param = 0;
    for (size_t si = 0; si < X.arcs[ai].sides.size(); ++si) {
      if (X.arcs[ai].sides[si].chart == chart_prev && sp < 0) {
        auto [s, d] = X.arc_project((int)ai, (int)si, coord_prev);
        if (d < 1e-7) {
          sp = (int)si;
          param = s;
        }
      }
    }
    if (sp < 0) continue;
    for (size_t si = 0; si < X.arcs[ai].sides.size(); ++si) {
      if (X.arcs[ai].sides[si].chart != chart_next) continue;
      double d = X.chart(chart_next)
                     .dist(X.arc_point((int)ai, (int)si, param), coord_next);
      if (d < 1e-6) {
        sn = (int)si;
        break;
      }
    }
    if (sn >= 0) {
      Crossing c;
      c.arc = (int)ai;
      c.param = param;
      c.side_prev = sp;
      c.side_next = sn;
      return c;
    }
  }
  for (size_t pi = 0; pi < X.points.size(); ++pi) {
    bool hasp = false, hasn = false;
    for (auto& r : X.points[pi].reps) {
      if (r.chart == chart_prev && X.chart(chart_prev).dist(r.c, coord_prev) < 1e-7)
        hasp = true;
      if (r.chart == chart_next && X.chart(chart_next).dist(r.c, coord_next) < 1e-7)
        hasn = true;
    }
    if (hasp && hasn) {
      Crossing c;
      c.pgl = (int)pi;
      return c;
    }
  }
  if (!X.same_point({chart_prev, coord_prev}, {chart_next, coord_next}, 1e-6))
    throw std::runtime_error("make_crossing: junction points differ");
  return Crossing{};  // fixed crossing (e.g. chart corner)
}

// drop zero-length legs, merge legs joined by trivial crossings
void normalize_path(const ChartComplex& X, GeodesicPath& g) {
  // merge trivially-joined legs
  for (size_t li = 0; !g.closed && li + 1 < g.legs.size();) {
    bool trivial = g.leg_chart[li] == g.leg_chart[li + 1] &&
                   X.chart(g.leg_chart[li])
                           .dist(g.legs[li].back(), g.legs[li + 1].front()) <
                       kCoincide;
    if (trivial) {
      g.legs[li].insert(g.legs[li].end(), g.legs[li + 1].begin() + 1,
                        g.legs[li + 1].end());
      g.legs.erase(g.legs.begin() + li + 1);
      g.leg_chart.erase(g.leg_chart.begin() + li + 1);
      g.cross.erase(g.cross.begin() + li);
    } else {
      ++li;
    }
  }
  // drop interior duplicate polyline points
  for (size_t li = 0; li < g.legs.size(); ++li) {
    auto& pts = g.legs[li];
    const Chart& ch = X.chart(g.leg_chart[li]);
    for (size_t k = 1; k + 1 < pts.size();) {
      if (ch.dist(pts[k - 1], pts[k]) < 1e-12)
        pts.erase(pts.begin() + k);
      else
        ++k;
    }
  }
  // drop zero-length interior legs when safely replaceable
  for (size_t li = 0; !g.closed && g.legs.size() > 1 && li < g.legs.size();) {
    if (leg_length(X, g, li) > 1e-12 || g.legs.size() == 1) {
      ++li;
      continue;
    }
    if (li == 0) {
      // re-root the start into the next leg's chart if it is the same point
      g.legs.erase(g.legs.begin());
      g.leg_chart.erase(g.leg_chart.begin());
      g.cross.erase(g.cross.begin());
      continue;
    }
    if (li + 1 == g.legs.size()) {
      g.legs.pop_back();
      g.leg_chart.pop_back();
      g.cross.pop_back();
      continue;
    }
    // interior: rebuild the crossing between the flanking legs if possible
    try {
      Crossing c = make_crossing(X, g.leg_chart[li - 1], g.legs[li - 1].back(),
                                 g.leg_chart[li + 1], g.legs[li + 1].front());
      g.legs.erase(g.legs.begin() + li);
      g.leg_chart.erase(g.leg_chart.begin() + li);
      g.cross.erase(g.cross.begin() + li - 1);
      g.cross[li - 1] = c;
    } catch (const std::exception&) {
      ++li;  // keep the degenerate leg
    }
  }
}

}  // namespace

// ----------------------------------------------------------- GeodesicPath --

double GeodesicPath::length() const {
  double L = 0;
  for (size_t li = 0; li < legs.size(); ++li) L += leg_length(*space, *this, li);
  return L;
}

SpacePoint GeodesicPath::start() const {
  return {leg_chart.front(), legs.front().front()};
}

SpacePoint GeodesicPath::end() const {
  return {leg_chart.back(), legs.back().back()};
}

SpacePoint GeodesicPath::eval(double t) const {
  double L = length();
  double s = std::clamp(t, 0.0, 1.0) * L;
  for (size_t li = 0; li < legs.size(); ++li) {
    const Chart& ch = space->chart(leg_chart[li]);
    for (size_t k = 0; k + 1 < legs[li].size(); ++k) {
      double d = ch.dist(legs[li][k], legs[li][k + 1]);
      if (s <= d + 1e-13 || (li + 1 == legs.size() && k + 2 == legs[li].size())) {
        if (d < 1e-13) return {leg_chart[li], legs[li][k]};
        return {leg_chart[li],
                ch.point_at(legs[li][k], legs[li][k + 1], std::min(s, d))};
      }
      s -= d;
    }
  }
  return end();
}

GeodesicPath GeodesicPath::prefix(double t) const {
  GeodesicPath out;
  out.space = space;
  double L = length();
  double s = std::clamp(t, 0.0, 1.0) * L;
  for (size_t li = 0; li < legs.size(); ++li) {
    const Chart& ch = space->chart(leg_chart[li]);
    std::vector<Coord> pts{legs[li].front()};
    bool done = false;
    for (size_t k = 0; k + 1 < legs[li].size(); ++k) {
      double d = ch.dist(legs[li][k], legs[li][k + 1]);
      if (s <= d + 1e-13) {
        pts.push_back(d < 1e-13 ? legs[li][k]
                                : ch.point_at(legs[li][k], legs[li][k + 1],
                                              std::min(s, d)));
        done = true;
        break;
      }
      pts.push_back(legs[li][k + 1]);
      s -= d;
    }
    out.leg_chart.push_back(leg_chart[li]);
    out.legs.push_back(pts);
    if (done) break;
    if (li + 1 < legs.size()) out.cross.push_back(cross[li]);
  }
  return out;
}

GeodesicPath GeodesicPath::reversed() const {
  GeodesicPath out;
  out.space = space;
  out.closed = closed;
  for (size_t li = legs.size(); li-- > 0;) {
    std::vector<Coord> pts(legs[li].rbegin(), legs[li].rend());
    out.legs.push_back(pts);
    out.leg_chart.push_back(leg_chart[li]);
  }
  size_t nc = cross.size();
  for (size_t ci = nc; ci-- > 0;) {
    Crossing c = cross[ci];
    std::swap(c.side_prev, c.side_next);
    out.cross.push_back(c);
  }
  if (closed && !out.cross.empty()) {
    // keep the junction crossing aligned with the leg cycle
    std::rotate(out.cross.begin(), out.cross.end() - 1, out.cross.end());
    std::rotate(out.cross.begin(), out.cross.begin() + 1, out.cross.end());
  }
  return out;
}

void GeodesicPath::densify(double h) {
  for (size_t li = 0; li < legs.size(); ++li) {
    const Chart& ch = space->chart(leg_chart[li]);
    std::vector<Coord> out{legs[li].front()};
    for (size_t k = 0; k + 1 < legs[li].size(); ++k) {
      double d = ch.dist(legs[li][k], legs[li][k + 1]);
      int n = std::max(1, (int)std::ceil(d / h));
      for (int i = 1; i <= n; ++i)
        out.push_back(i == n ? legs[li][k + 1]
                             : ch.point_at(legs[li][k], legs[li][k + 1],
                                           d * i / n));
    }
    legs[li] = out;
  }
}

int GeodesicPath::num_segments() const {
  int n = 0;
  for (auto& l : legs) n += (int)l.size() - 1;
  return n;
}

bool GeodesicPath::valid() const {
  if (!space || legs.empty() || legs.size() != leg_chart.size()) return false;
  size_t want = closed ? (legs.size() == 1 ? 0 : legs.size()) : legs.size() - 1;
  if (cross.size() != want) return false;
  for (auto& l : legs)
    if (l.size() < 2) return false;
  return true;
}

GeodesicPath chart_segment(const ChartComplex& X, int chart, const Coord& a,
                           const Coord& b) {
  GeodesicPath g;
  g.space = &X;
  g.leg_chart = {chart};
  g.legs = {{a, b}};
  return g;
}

GeodesicPath concatenate(const ChartComplex& X, const GeodesicPath& a,
                         const GeodesicPath& b) {
  GeodesicPath out = a;
  int ca = a.leg_chart.back(), cb = b.leg_chart.front();
  const Coord& xa = a.legs.back().back();
  const Coord& xb = b.legs.front().front();
  size_t bstart = 0;
  if (ca == cb && X.chart(ca).dist(xa, xb) < 1e-7) {
    out.legs.back().insert(out.legs.back().end(), b.legs[0].begin() + 1,
                           b.legs[0].end());
    if (b.legs.size() > 1) out.cross.push_back(b.cross[0]);
    bstart = 1;
  } else {
    out.cross.push_back(make_crossing(X, ca, xa, cb, xb));
  }
  for (size_t li = bstart; li < b.legs.size(); ++li) {
    out.legs.push_back(b.legs[li]);
    out.leg_chart.push_back(b.leg_chart[li]);
    if (li + 1 < b.legs.size()) out.cross.push_back(b.cross[li]);
  }
  return out;
}

// --------------------------------------------------------------- distance --

namespace {

struct Hop {
  int chart;
  Coord a, b;
  int node_after;  // interface node at the hop's end, -1 at q
};

GeodesicPath path_from_hops(const ChartComplex& X, const std::vector<Hop>& hops) {
  GeodesicPath g;
  g.space = &X;
  for (size_t hi = 0; hi < hops.size(); ++hi) {
    const Hop& h = hops[hi];
    if (!g.legs.empty() && g.leg_chart.back() == h.chart &&
        X.chart(h.chart).dist(g.legs.back().back(), h.a) < kCoincide) {
      g.legs.back().push_back(h.b);
      continue;
    }
    if (!g.legs.empty()) {
      int prev_node = hops[hi - 1].node_after;
      Crossing c;
      if (prev_node >= 0) {
        const auto& nd = X.nodes()[prev_node];
        c.arc = nd.arc;
        c.pgl = nd.pgl;
        c.param = nd.param;
        if (nd.arc >= 0) {
          // locate the concrete sides by coordinates
          double bp = 1e300, bn = 1e300;
          for (size_t si = 0; si < X.arcs[nd.arc].sides.size(); ++si) {
            const auto& sd = X.arcs[nd.arc].sides[si];
            Coord ap = X.arc_point(nd.arc, (int)si, nd.param);
            if (sd.chart == g.leg_chart.back()) {
              double d = X.chart(sd.chart).dist(ap, g.legs.back().back());
              if (d < bp) {
                bp = d;
                c.side_prev = (int)si;
              }
            }
            if (sd.chart == h.chart) {
              double d = X.chart(sd.chart).dist(ap, h.a);
              if (d < bn) {
                bn = d;
                c.side_next = (int)si;
              }
            }
          }
          if (bp > 1e-6 || bn > 1e-6)
            c = make_crossing(X, g.leg_chart.back(), g.legs.back().back(),
                              h.chart, h.a);
        }
      } else {
        c = make_crossing(X, g.leg_chart.back(), g.legs.back().back(), h.chart,
                          h.a);
      }
      g.cross.push_back(c);
    }
    g.leg_chart.push_back(h.chart);
    g.legs.push_back({h.a, h.b});
  }
  normalize_path(X, g);
  return g;
}

// one coordinate-descent pass over the slidable crossings; returns new length
double slide_crossings(const ChartComplex& X, GeodesicPath& g) {
  size_t nc = g.cross.size();
  for (size_t ci = 0; ci < nc; ++ci) {
    Crossing& cr = g.cross[ci];
    if (cr.arc < 0) continue;
    size_t li = ci, lj = (ci + 1) % g.legs.size();
    const Chart& chp = X.chart(g.leg_chart[li]);
    const Chart& chn = X.chart(g.leg_chart[lj]);
    const Coord prev_pt = g.legs[li][g.legs[li].size() - 2];
    const Coord next_pt = g.legs[lj][1];
    double arcL = X.arcs[cr.arc].length;
    double w = std::max(4 * X.eta, arcL / 8);
    double lo = std::max(0.0, cr.param - w), hi = std::min(arcL, cr.param + w);
    auto f = [&](double s) {
      return chp.dist(prev_pt, X.arc_point(cr.arc, cr.side_prev, s)) +
             chn.dist(X.arc_point(cr.arc, cr.side_next, s), next_pt);
    };
    double s = golden_min(f, lo, hi, 48, nullptr);
    if (f(s) <= f(cr.param)) {
      cr.param = s;
      g.legs[li].back() = X.arc_point(cr.arc, cr.side_prev, s);
      g.legs[lj].front() = X.arc_point(cr.arc, cr.side_next, s);
    }
  }
  return g.length();
}

void midpoint_pass(const ChartComplex& X, GeodesicPath& g) {
  for (int parity : {1, 0}) {
    for (size_t li = 0; li < g.legs.size(); ++li) {
      const Chart& ch = X.chart(g.leg_chart[li]);
      auto& pts = g.legs[li];
      bool cyclic = g.closed && g.legs.size() == 1;
      for (size_t k = 1; k + 1 < pts.size(); ++k) {
        if ((int)(k % 2) != parity) continue;
        double d = ch.dist(pts[k - 1], pts[k + 1]);
        if (d < 1e-13) continue;
        pts[k] = ch.point_at(pts[k - 1], pts[k + 1], d / 2);
      }
      if (cyclic && pts.size() >= 3) {
        // move the free basepoint of a one-leg closed curve
        double d = ch.dist(pts[pts.size() - 2], pts[1]);
        if (d > 1e-13) {
          Coord m = ch.point_at(pts[pts.size() - 2], pts[1], d / 2);
          pts.front() = m;
          pts.back() = m;
        }
      }
    }
    // multi-leg closed curve whose base junction is not on any gluing: the
    // junction is free to move within its (shared) chart
    if (g.closed && g.legs.size() > 1 && !g.cross.empty()) {
      const Crossing& jc = g.cross.back();
      size_t la = g.legs.size() - 1;
      if (jc.arc < 0 && jc.pgl < 0 && g.leg_chart[la] == g.leg_chart[0] &&
          g.legs[la].size() >= 2 && g.legs[0].size() >= 2) {
        const Chart& ch = X.chart(g.leg_chart[0]);
        double d = ch.dist(g.legs[la][g.legs[la].size() - 2], g.legs[0][1]);
        if (d > 1e-13) {
          Coord m = ch.point_at(g.legs[la][g.legs[la].size() - 2],
                                g.legs[0][1], d / 2);
          if (ch.contains(m, 1e-9)) {
            g.legs[la].back() = m;
            g.legs[0].front() = m;
          }
        }
      }
    }
  }
}

double shorten_sweeps(const ChartComplex& X, GeodesicPath& g, double tol,
                      int max_iter) {
  double L = g.length();
  for (int sweep = 0; sweep < max_iter; ++sweep) {
    slide_crossings(X, g);
    midpoint_pass(X, g);
    double nl = g.length();
    if (L - nl < tol && sweep > 0) return nl;
    L = nl;
  }
  throw std::runtime_error("shorten: no convergence after max_iter sweeps");
}

// When two adjacent arc crossings pinch together at a junction (their middle
// leg nearly vanishes), slides can be stuck with the crossings in the wrong
// order. Build the variant with the crossing order exchanged at the same
// params so subsequent slides can unpin it.
bool junction_swap_at(const ChartComplex& X, GeodesicPath& g, size_t ci) {
  const Crossing c1 = g.cross[ci], c2 = g.cross[ci + 1];
  if (c1.arc < 0 || c2.arc < 0 || c1.arc == c2.arc) return false;
  if (g.legs[ci].size() < 2 || g.legs[ci + 2].size() < 2) return false;
  int cA = g.leg_chart[ci], cB = g.leg_chart[ci + 2];
  const auto& sides2 = X.arcs[c2.arc].sides;
  const auto& sides1 = X.arcs[c1.arc].sides;
  Coord A = g.legs[ci][g.legs[ci].size() - 2];
  Coord B = g.legs[ci + 2][1];

  double best = std::numeric_limits<double>::infinity();
  Crossing b1, b2;
  Coord bxa{}, bxm{}, by1{}, by2{};
  int bcm = -1;
  for (size_t sa = 0; sa < sides2.size(); ++sa) {
    if (sides2[sa].chart != cA) continue;
    Coord xa = X.arc_point(c2.arc, (int)sa, c2.param);
    for (size_t sm = 0; sm < sides2.size(); ++sm) {
      if (sm == sa) continue;
      int cm = sides2[sm].chart;
      Coord xm = X.arc_point(c2.arc, (int)sm, c2.param);
      for (size_t sb2 = 0; sb2 < sides1.size(); ++sb2) {
        if (sides1[sb2].chart != cB) continue;
        Coord y2 = X.arc_point(c1.arc, (int)sb2, c1.param);
        for (size_t sb1 = 0; sb1 < sides1.size(); ++sb1) {
          if (sb1 == sb2 || sides1[sb1].chart != cm) continue;
          Coord y1 = X.arc_point(c1.arc, (int)sb1, c1.param);
          double len = X.chart(cA).dist(A, xa) + X.chart(cm).dist(xm, y1) +
                       X.chart(cB).dist(y2, B);
          if (len < best) {
            best = len;
            b1 = {c2.arc, c2.param, (int)sa, (int)sm, -1};
            b2 = {c1.arc, c1.param, (int)sb1, (int)sb2, -1};
            bxa = xa;
            bxm = xm;
            by1 = y1;
            by2 = y2;
            bcm = cm;
          }
        }
      }
    }
  }
  if (bcm < 0) return false;
  g.legs[ci].pop_back();
  g.legs[ci].push_back(bxa);
  g.cross[ci] = b1;
  g.legs[ci + 1] = {bxm, by1};
  g.leg_chart[ci + 1] = bcm;
  g.cross[ci + 1] = b2;
  g.legs[ci + 2].erase(g.legs[ci + 2].begin());
  g.legs[ci + 2].insert(g.legs[ci + 2].begin(), by2);
  return true;
}

// A route through a fixed junction crossing (chart corner or point gluing)
// cannot be slid; build variants that cross the arcs incident to the
// junction instead, seeded at the arc ends, so slides can unpin them.
std::vector<GeodesicPath> junction_reroutes(const ChartComplex& X,
                                            const GeodesicPath& g, size_t ci) {
  std::vector<GeodesicPath> out;
  if (ci + 1 >= g.legs.size()) return out;
  if (g.legs[ci].size() < 2 || g.legs[ci + 1].size() < 2) return out;
  int cA = g.leg_chart[ci], cB = g.leg_chart[ci + 1];
  auto pres = X.presences({cA, g.legs[ci].back()});
  struct Inc {
    int arc, side;
    double t;
  };
  std::vector<Inc> inc;
  for (size_t ai = 0; ai < X.arcs.size(); ++ai) {
    double len = X.arcs[ai].length;
    for (size_t si = 0; si < X.arcs[ai].sides.size(); ++si) {
      int ch = X.arcs[ai].sides[si].chart;
      for (double t : {0.0, len}) {
        Coord e = X.arc_point((int)ai, (int)si, t);
        for (auto& pe : pres)
          if (pe.chart == ch && X.chart(ch).dist(e, pe.c) < 1e-7) {
            inc.push_back({(int)ai, (int)si, t});
            break;
          }
      }
    }
  }
  for (auto& ia : inc) {
    if (X.arcs[ia.arc].sides[ia.side].chart != cA) continue;
    Coord xa = X.arc_point(ia.arc, ia.side, ia.t);
    const auto& sidesA = X.arcs[ia.arc].sides;
    for (size_t sm = 0; sm < sidesA.size(); ++sm) {
      if ((int)sm == ia.side) continue;
      int cm = sidesA[sm].chart;
      Coord xm = X.arc_point(ia.arc, (int)sm, ia.t);
      Crossing c1{ia.arc, ia.t, ia.side, (int)sm, -1};
      if (cm == cB) {
        GeodesicPath ng = g;
        ng.legs[ci].back() = xa;
        ng.legs[ci + 1].front() = xm;
        ng.cross[ci] = c1;
        out.push_back(std::move(ng));
      }
      // second crossing over another incident arc from the middle chart
      for (auto& ib : inc) {
        if (ib.arc == ia.arc) continue;
        if (X.arcs[ib.arc].sides[ib.side].chart != cm) continue;
        Coord y1 = X.arc_point(ib.arc, ib.side, ib.t);
        const auto& sidesB = X.arcs[ib.arc].sides;
        for (size_t sb = 0; sb < sidesB.size(); ++sb) {
          if ((int)sb == ib.side || sidesB[sb].chart != cB) continue;
          Coord y2 = X.arc_point(ib.arc, (int)sb, ib.t);
          Crossing c2{ib.arc, ib.t, ib.side, (int)sb, -1};
          GeodesicPath ng = g;
          ng.legs[ci].back() = xa;
          ng.legs[ci + 1].front() = y2;
          ng.cross[ci] = c1;
          ng.cross.insert(ng.cross.begin() + ci + 1, c2);
          ng.legs.insert(ng.legs.begin() + ci + 1,
                         std::vector<Coord>{xm, y1});
          ng.leg_chart.insert(ng.leg_chart.begin() + ci + 1, cm);
          out.push_back(std::move(ng));
        }
      }
    }
  }
  return out;
}

}  // namespace

double shorten_path(const ChartComplex& X, GeodesicPath& g, double tol,
                    int max_iter) {
  double L = shorten_sweeps(X, g, tol, max_iter);
  double pinch = std::max(6 * X.eta, 1e-3);
  for (int rounds = 0; rounds < 3; ++rounds) {
    std::vector<GeodesicPath> alts;
    for (size_t ci = 0; ci < g.cross.size(); ++ci) {
      if (g.cross[ci].arc < 0) {
        auto rr = junction_reroutes(X, g, ci);
        alts.insert(alts.end(), std::make_move_iterator(rr.begin()),
                    std::make_move_iterator(rr.end()));
        continue;
      }
      if (ci + 1 >= g.cross.size() || ci + 2 >= g.legs.size()) continue;
      if (g.cross[ci + 1].arc < 0 || g.cross[ci].arc == g.cross[ci + 1].arc)
        continue;
      const auto& legM = g.legs[ci + 1];
      if (X.chart(g.leg_chart[ci + 1]).dist(legM.front(), legM.back()) > pinch)
        continue;
      GeodesicPath alt = g;
      if (junction_swap_at(X, alt, ci)) alts.push_back(std::move(alt));
    }
    bool adopted = false;
    for (auto& alt : alts) {
      try {
        GeodesicPath h = alt;
        double La = shorten_sweeps(X, h, tol, max_iter);
        if (La < L - 1e-12) {
          g = std::move(h);
          L = La;
          adopted = true;
        }
      } catch (const std::exception&) {
      }
    }
    if (!adopted) break;
  }
  return L;
}

DistanceResult distance(const ChartComplex& X, const SpacePoint& p,
                        const SpacePoint& q, double tol) {
  auto presP = X.presences(p);
  auto presQ = X.presences(q);

  DistanceResult best;
  best.d = kInf;
  for (auto& pp : presP)
    for (auto& qq : presQ)
      if (pp.chart == qq.chart) {
        double d = X.chart(pp.chart).dist(pp.c, qq.c);
        if (d < best.d) {
          best.d = d;
          best.path = chart_segment(X, pp.chart, pp.c, qq.c);
        }
      }

  const auto& nodes = X.nodes();
  size_t N = nodes.size();
  if (N > 0) {
    struct Pred {
      int from = -2;  // -2 unreached, -1 source
      int chart = -1;
      Coord ca, cb;
    };
    std::vector<double> dist(N, kInf);
    std::vector<Pred> pred(N);
    std::vector<char> done(N, 0);
    for (size_t i = 0; i < N; ++i) {
      for (auto& pp : presP)
        for (auto& rep : nodes[i].reps)
          if (rep.chart == pp.chart) {
            double d = X.chart(rep.chart).dist(pp.c, rep.c);
            if (d < dist[i]) {
              dist[i] = d;
              pred[i] = {-1, rep.chart, pp.c, rep.c};
            }
          }
    }
    for (size_t it = 0; it < N; ++it) {
      int u = -1;
      double du = kInf;
      for (size_t i = 0; i < N; ++i)
        if (!done[i] && dist[i] < du) {
          du = dist[i];
          u = (int)i;
        }
      if (u < 0) break;
      done[u] = 1;
      for (auto& e : X.adjacency()[u]) {
        if (done[e.to]) continue;
        double nd = du + e.w;
        if (nd < dist[e.to]) {
          // recover the realizing representative pair in e.chart
          Coord ca{}, cb{};
          double bw = 1e300;
          for (auto& ru : nodes[u].reps)
            for (auto& rv : nodes[e.to].reps)
              if (ru.chart == e.chart && rv.chart == e.chart) {
                double d = X.chart(e.chart).dist(ru.c, rv.c);
                if (d < bw) {
                  bw = d;
                  ca = ru.c;
                  cb = rv.c;
                }
              }
          dist[e.to] = nd;
          pred[e.to] = {u, e.chart, ca, cb};
        }
      }
    }
    // close to q
    int best_node = -1;
    int qchart = -1;
    Coord qa{}, qb{};
    // graph estimates carry node-quantization detours of order eta per
    // crossing; keep the best route for refinement even when its estimate
    // slightly exceeds the direct candidate, sliding recovers the gap
    double best_total = best.d + 2 * X.eta;
    for (size_t i = 0; i < N; ++i) {
      if (dist[i] == kInf) continue;
      for (auto& qq : presQ)
        for (auto& rep : nodes[i].reps)
          if (rep.chart == qq.chart) {
            double tot = dist[i] + X.chart(rep.chart).dist(rep.c, qq.c);
            if (tot < best_total) {
              best_total = tot;
              best_node = (int)i;
              qchart = rep.chart;
              qa = rep.c;
              qb = qq.c;
            }
          }
    }
    if (best_node >= 0) {
      // hops carry the interface node at their end (-1 for the final hop)
      std::vector<Hop> back;
      back.push_back({qchart, qa, qb, -1});
      int cur = best_node;
      while (cur >= 0) {
        const Pred& pr = pred[cur];
        back.push_back({pr.chart, pr.ca, pr.cb, cur});
        cur = pr.from;
      }
      std::vector<Hop> hops(back.rbegin(), back.rend());
      try {
        GeodesicPath g = path_from_hops(X, hops);
        double L = shorten_path(X, g, tol / 10, 80);
        if (L < best.d) {
          best.d = L;
          best.path = g;
        }
      } catch (const std::exception&) {
        if (best_total < best.d) {
          // fall back to the unrefined graph value with a crude path
          best.d = best_total;
        }
      }
    }
  }
  if (best.d == kInf)
    throw std::runtime_error("distance: no route between the points");
  return best;
}

// ---------------------------------------------------------------- shorten --

GeodesicPath shorten(const ChartComplex& X, const std::vector<SpacePoint>& poly,
                     bool closed, double tol, int max_iter) {
  if (poly.size() < 2) throw std::invalid_argument("polyline needs >= 2 points");
  std::vector<SpacePoint> pts = poly;
  if (closed && !X.same_point(pts.front(), pts.back(), 1e-7))
    pts.push_back(pts.front());

  GeodesicPath g;
  g.space = &X;
  for (size_t k = 0; k + 1 < pts.size(); ++k) {
    // connect consecutive points by their best shared chart, else globally
    double bd = kInf;
    int bchart = -1;
    Coord ba{}, bb{};
    for (auto& pp : X.presences(pts[k]))
      for (auto& qq : X.presences(pts[k + 1]))
        if (pp.chart == qq.chart) {
          double d = X.chart(pp.chart).dist(pp.c, qq.c);
          if (d < bd) {
            bd = d;
            bchart = pp.chart;
            ba = pp.c;
            bb = qq.c;
          }
        }
    GeodesicPath seg;
    if (bchart >= 0 && bd <= 10 * X.eta) {
      seg = chart_segment(X, bchart, ba, bb);
    } else {
      // the shared-chart segment can run the long way around a self-glued
      // chart; take the true minimizer when it is shorter
      DistanceResult res = distance(X, pts[k], pts[k + 1]);
      if (bchart >= 0 && bd <= res.d + 1e-9)
        seg = chart_segment(X, bchart, ba, bb);
      else
        seg = res.path;
    }
    g = k == 0 ? seg : concatenate(X, g, seg);
  }
  if (closed) {
    g.closed = true;
    if (g.legs.size() > 1) {
      int ca = g.leg_chart.back(), cb = g.leg_chart.front();
      g.cross.push_back(
          make_crossing(X, ca, g.legs.back().back(), cb, g.legs.front().front()));
    }
  }
  normalize_path(X, g);
  shorten_path(X, g, tol, max_iter);
  return g;
}

// --------------------------------------------------------------- d_Gamma ---

namespace {

double space_distance_fast(const ChartComplex& X, const SpacePoint& a,
                           const SpacePoint& b) {
  double bd = kInf;
  for (auto& pp : X.presences(a))
    for (auto& qq : X.presences(b))
      if (pp.chart == qq.chart)
        bd = std::min(bd, X.chart(pp.chart).dist(pp.c, qq.c));
  if (bd < 10 * X.eta) return bd;  // below the systole scale: exact
  double dd = distance(X, a, b).d;
  return std::min(bd, dd);
}

}  // namespace

PathMetricSample gamma_distance(const ChartComplex& X, const GeodesicPath& g1,
                                const GeodesicPath& g2, int m) {
  if (m < 2) throw std::invalid_argument("gamma_distance needs m >= 2");
  PathMetricSample out;
  out.m = m;
  out.length_gap = std::fabs(g1.length() - g2.length());
  for (int i = 0; i < m; ++i) {
    double t = m == 1 ? 0 : (double)i / (m - 1);
    out.sup = std::max(out.sup, space_distance_fast(X, g1.eval(t), g2.eval(t)));
  }
  return out;
}

bool is_minimizing(const ChartComplex& X, const GeodesicPath& g, double tol) {
  return g.length() <= distance(X, g.start(), g.end()).d + tol;
}

bool is_locally_minimizing(const ChartComplex& X, const GeodesicPath& g,
                           double delta, double tol) {
  double L = g.length();
  if (L <= delta) return is_minimizing(X, g, tol);
  int n = std::max(2, (int)std::ceil(2 * L / delta));
  for (int i = 0; i <= n; ++i) {
    double t0 = (L - delta) * i / n;
    SpacePoint a = g.eval(t0 / L), b = g.eval((t0 + delta) / L);
    if (distance(X, a, b).d < delta - tol) return false;
  }
  return true;
}

// ------------------------------------------------------ enumeration -------

namespace {

struct RouteOption {
  int arc = -1, side_in = -1, side_out = -1;
  int pgl = -1, rep_in = -1, rep_out = -1;
  int chart_in = -1, chart_out = -1;
};

std::vector<RouteOption> route_options(const ChartComplex& X) {
  std::vector<RouteOption> opts;
  for (size_t ai = 0; ai < X.arcs.size(); ++ai)
    for (size_t si = 0; si < X.arcs[ai].sides.size(); ++si)
      for (size_t sj = 0; sj < X.arcs[ai].sides.size(); ++sj)
        if (si != sj) {
          RouteOption o;
          o.arc = (int)ai;
          o.side_in = (int)si;
          o.side_out = (int)sj;
          o.chart_in = X.arcs[ai].sides[si].chart;
          o.chart_out = X.arcs[ai].sides[sj].chart;
          opts.push_back(o);
        }
  for (size_t pi = 0; pi < X.points.size(); ++pi)
    for (size_t ri = 0; ri < X.points[pi].reps.size(); ++ri)
      for (size_t rj = 0; rj < X.points[pi].reps.size(); ++rj)
        if (ri != rj) {
          RouteOption o;
          o.pgl = (int)pi;
          o.rep_in = (int)ri;
          o.rep_out = (int)rj;
          o.chart_in = X.points[pi].reps[ri].chart;
          o.chart_out = X.points[pi].reps[rj].chart;
          opts.push_back(o);
        }
  return opts;
}

// straightness certificate at crossings: no shortcut at scale h
bool certify_crossings(const ChartComplex& X, const GeodesicPath& g) {
  double L = g.length();
  if (g.cross.empty() || L < 1e-9) return true;
  double h = std::min(0.2 * X.min_chart_diameter(), 0.45 * L);
  // the no-shortcut window is conclusive only within the uniformly
  // minimizing scale
  if (X.delta_witness > 0) h = std::min(h, 0.45 * X.delta_witness);
  double cum = 0;
  for (size_t li = 0; li + 1 < g.legs.size(); ++li) {
    cum += leg_length(X, g, li);
    double lo = std::max(0.0, cum - h), hi = std::min(L, cum + h);
    if (hi - lo < 1e-9) continue;
    double need = hi - lo;
    double got = distance(X, g.eval(lo / L), g.eval(hi / L)).d;
    double bend_tol = 1e-4 * (1 + need);
    if (got < need - bend_tol) return false;
  }
  return true;
}

}  // namespace

std::vector<GeodesicPath> enumerate_geodesics(const ChartComplex& X,
                                              const SpacePoint& p,
                                              const SpacePoint& q, double L_max,
                                              double eps_sep, int max_hops) {
  auto presP = X.presences(p);
  auto presQ = X.presences(q);
  auto opts = route_options(X);

  // routes in BFS order: (start chart, option sequence)
  struct Route {
    int start_chart;
    std::vector<int> steps;
  };
  std::vector<Route> routes;
  std::vector<int> start_charts;
  for (auto& pp : presP)
    if (std::find(start_charts.begin(), start_charts.end(), pp.chart) ==
        start_charts.end())
      start_charts.push_back(pp.chart);
  auto q_in_chart = [&](int c) {
    for (auto& qq : presQ)
      if (qq.chart == c) return true;
    return false;
  };
  const size_t kRouteCap = 800;
  std::queue<Route> bfs;
  for (int sc : start_charts) bfs.push({sc, {}});
  while (!bfs.empty() && routes.size() < kRouteCap) {
    Route r = bfs.front();
    bfs.pop();
    int cur = r.steps.empty() ? r.start_chart : opts[r.steps.back()].chart_out;
    if (q_in_chart(cur)) routes.push_back(r);
    if ((int)r.steps.size() >= max_hops) continue;
    for (size_t oi = 0; oi < opts.size(); ++oi) {
      if (opts[oi].chart_in != cur) continue;
      int used = (int)std::count(r.steps.begin(), r.steps.end(), (int)oi);
      if (used >= 2) continue;
      Route nr = r;
      nr.steps.push_back((int)oi);
      bfs.push(nr);
    }
  }

  std::vector<GeodesicPath> accepted;
  auto try_accept = [&](GeodesicPath&& g) {
    double L = g.length();
    if (L > L_max + 1e-9) return;
    if (!certify_crossings(X, g)) return;
    for (auto& a : accepted) {
      if (std::fabs(a.length() - L) > eps_sep) continue;
      PathMetricSample gd = gamma_distance(X, a, g, 12);
      if (gd.d_gamma() < eps_sep) return;
    }
    accepted.push_back(std::move(g));
  };

  // the global minimizer first
  try {
    try_accept(DistanceResult(distance(X, p, q)).path);
  } catch (const std::exception&) {
  }

  for (auto& r : routes) {
    // chart sequence and fixed anchor data
    std::vector<int> cseq{r.start_chart};
    for (int oi : r.steps) cseq.push_back(opts[oi].chart_out);
    Coord pc{}, qc{};
    {
      auto c0 = X.coord_in(p, cseq.front());
      auto c1 = X.coord_in(q, cseq.back());
      if (!c0 || !c1) continue;
      pc = *c0;
      qc = *c1;
    }
    for (int seed = 0; seed < 2; ++seed) {
      // crossing parameters
      std::vector<double> params(r.steps.size(), 0);
      {
        Coord cur = pc;
        for (size_t k = 0; k < r.steps.size(); ++k) {
          const RouteOption& o = opts[r.steps[k]];
          if (o.arc >= 0) {
            if (seed == 0) {
              params[k] = X.arcs[o.arc].length / 2;
            } else {
              auto [s, d] = X.arc_project(o.arc, o.side_in, cur);
              params[k] = s;
            }
            cur = X.arc_point(o.arc, o.side_out, params[k]);
          } else {
            cur = X.points[o.pgl].reps[o.rep_out].c;
          }
        }
      }
      // leg endpoints
      std::vector<std::pair<Coord, Coord>> leg_ends(cseq.size());
      {
        Coord cur = pc;
        for (size_t k = 0; k < r.steps.size(); ++k) {
          const RouteOption& o = opts[r.steps[k]];
          Coord ein = o.arc >= 0 ? X.arc_point(o.arc, o.side_in, params[k])
                                 : X.points[o.pgl].reps[o.rep_in].c;
          Coord eout = o.arc >= 0 ? X.arc_point(o.arc, o.side_out, params[k])
                                  : X.points[o.pgl].reps[o.rep_out].c;
          leg_ends[k] = {cur, ein};
          cur = eout;
        }
        leg_ends.back() = {cur, qc};
      }
      // within-chart variants per leg
      std::vector<std::vector<std::vector<Coord>>> variants(cseq.size());
      bool feasible = true;
      size_t product = 1;
      for (size_t li = 0; li < cseq.size(); ++li) {
        variants[li] = X.chart(cseq[li]).local_geodesics(
            leg_ends[li].first, leg_ends[li].second, L_max, eps_sep);
        if (variants[li].empty()) {
          feasible = false;
          break;
        }
        product *= variants[li].size();
      }
      if (!feasible) continue;
      if (product > 64 && cseq.size() > 1) {
        for (auto& v : variants)
          if (v.size() > 2) v.resize(2);
      }
      // iterate over variant combinations
      std::vector<size_t> idx(cseq.size(), 0);
      for (;;) {
        GeodesicPath g;
        g.space = &X;
        for (size_t li = 0; li < cseq.size(); ++li) {
          g.leg_chart.push_back(cseq[li]);
          g.legs.push_back(variants[li][idx[li]]);
          if (li < r.steps.size()) {
            const RouteOption& o = opts[r.steps[li]];
            Crossing c;
            c.arc = o.arc;
            c.side_prev = o.side_in;
            c.side_next = o.side_out;
            c.param = o.arc >= 0 ? params[li] : 0;
            c.pgl = o.pgl;
            g.cross.push_back(c);
          }
        }
        try {
          normalize_path(X, g);
          if (g.valid()) {
            shorten_path(X, g, 1e-9, 300);
            try_accept(std::move(g));
          }
        } catch (const std::exception&) {
        }
        // advance combination
        size_t d = 0;
        while (d < idx.size()) {
          if (++idx[d] < variants[d].size()) break;
          idx[d] = 0;
          ++d;
        }
        if (d == idx.size()) break;
      }
      if (r.steps.empty()) break;  // no params: one seed suffices
    }
  }

  std::sort(accepted.begin(), accepted.end(),
            [&](const GeodesicPath& a, const GeodesicPath& b) {
              double la = a.length(), lb = b.length();
              if (std::fabs(la - lb) > 1e-12) return la < lb;
              SpacePoint ma = a.eval(0.5), mb = b.eval(0.5);
              if (ma.chart != mb.chart) return ma.chart < mb.chart;
              if (std::fabs(ma.c.x - mb.c.x) > 1e-12) return ma.c.x < mb.c.x;
              if (std::fabs(ma.c.y - mb.c.y) > 1e-12) return ma.c.y < mb.c.y;
              return ma.c.z < mb.c.z;
            });
  return accepted;
}

// -------------------------------------------------------------- extension --

namespace {

void extend_branches(const ChartComplex& X, const GeodesicPath& g, double delta,
                     std::vector<GeodesicPath>& out, int depth) {
  if (delta <= 1e-12) {
    out.push_back(g);
    return;
  }
  if (depth > 64 || out.size() > 256) return;
  double L = g.length();
  // the straightness gate below compares d(u, w) with base + step, which is
  // conclusive only while base + step stays within the uniformly minimizing
  // scale; keep both below half the witness
  double cap = 0.25 * X.min_chart_diameter();
  if (X.delta_witness > 0) cap = std::min(cap, 0.45 * X.delta_witness);
  double step = std::min(delta, cap);
  int ech = g.leg_chart.back();
  const Chart& ch = X.chart(ech);
  const auto& pts = g.legs.back();
  SpacePoint endp{ech, pts.back()};
  auto pres = X.presences(endp);

  // interior fast path: unique in-chart continuation
  if (pres.size() == 1 && pts.size() >= 2) {
    Coord w;
    size_t k = pts.size();
    Coord a = pts[k - 2], b = pts[k - 1];
    if (ch.dist(a, b) > 1e-12) {
      if (ch.extend(a, b, step, &w)) {
        GeodesicPath ng = g;
        ng.legs.back().push_back(w);
        extend_branches(X, ng, delta - step, out, depth + 1);
        return;
      }
      // chart boundary inside the step: bisect onto it so the gluing
      // presences can carry the continuation across
      if (ch.extend(a, b, 1e-9, &w)) {
        double lo = 1e-9, hi = step;
        for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
          double mid = 0.5 * (lo + hi);
          if (ch.extend(a, b, mid, &w))
            lo = mid;
          else
            hi = mid;
        }
        if (lo > 1e-8 && ch.extend(a, b, lo, &w)) {
          GeodesicPath ng = g;
          ng.legs.back().push_back(w);
          extend_branches(X, ng, delta - lo, out, depth + 1);
          return;
        }
      }
    }
  }

  double h = std::min({step, 0.45 * L, 0.25 * X.min_chart_diameter()});
  if (h < 1e-10) return;
  SpacePoint u = g.eval((L - h) / L);
  double base = distance(X, u, endp).d;  // ~= h for a local geodesic

  struct Cand {
    int chart;
    Coord base_c;  // the presence's incarnation of the endpoint
    Coord w;
    double score;
  };
  std::vector<Cand> cands;
  for (auto& pe : pres) {
    const Chart& c2 = X.chart(pe.chart);
    int n = c2.dim() == 1 ? 2 : 48;
    auto ring = c2.ring(pe.c, step, n);
    std::vector<double> sc(ring.size());
    for (size_t i = 0; i < ring.size(); ++i)
      sc[i] = distance(X, u, {pe.chart, ring[i]}).d;
    double coarse_tol = c2.dim() == 1 ? 1e-6 : 0.02 * step + 1e-6;
    for (size_t i = 0; i < ring.size(); ++i) {
      if (sc[i] < base + step - coarse_tol) continue;
      if (c2.dim() >= 2 && ring.size() >= 8) {
        // keep only local maxima on the ring (plateaus keep all)
        double l = sc[(i + ring.size() - 1) % ring.size()];
        double r2 = sc[(i + 1) % ring.size()];
        if (sc[i] + 1e-12 < l || sc[i] + 1e-12 < r2) continue;
      }
      cands.push_back({pe.chart, pe.c, ring[i], sc[i]});
    }
  }

  double fine_tol = 1e-4 * step + 1e-6;
  std::vector<GeodesicPath> local;
  for (auto& cd : cands) {
    Coord w = cd.w;
    double score = cd.score;
    const Chart& c2 = X.chart(cd.chart);
    if (c2.dim() >= 2) {
      // refine by sampling a fine ring segment around the coarse winner
      auto fine = c2.ring(cd.base_c, step, 720);
      double bw = score;
      Coord bc = w;
      for (auto& fp : fine) {
        if (c2.dist(fp, w) > 2 * M_PI * step / 40) continue;
        double s = distance(X, u, {cd.chart, fp}).d;
        if (s > bw) {
          bw = s;
          bc = fp;
        }
      }
      w = bc;
      score = bw;
    }
    if (score < base + step - fine_tol) continue;
    GeodesicPath ng = g;
    // same incarnation: continue the leg; otherwise cross the gluing (the
    // chart id can repeat under self-gluings, so compare coordinates)
    if (cd.chart == ech && ch.dist(cd.base_c, pts.back()) <= 1e-9) {
      ng.legs.back().push_back(w);
    } else {
      try {
        ng.cross.push_back(
            make_crossing(X, ech, pts.back(), cd.chart, cd.base_c));
      } catch (const std::exception&) {
        continue;
      }
      ng.leg_chart.push_back(cd.chart);
      ng.legs.push_back({cd.base_c, w});
    }
    local.push_back(std::move(ng));
  }
  for (auto& ng : local) extend_branches(X, ng, delta - step, out, depth + 1);
}

}  // namespace

std::vector<GeodesicPath> extend_geodesic(const ChartComplex& X,
                                          const GeodesicPath& g, double delta,
                                          double eps_sep) {
  std::vector<GeodesicPath> raw;
  extend_branches(X, g, delta, raw, 0);
  // ring-sampled crossings carry an angular quantization kink; straighten
  for (auto& cand : raw) {
    if (cand.cross.empty()) continue;
    try {
      shorten_path(X, cand, 1e-10, 100);
    } catch (const std::exception&) {
    }
  }
  std::vector<GeodesicPath> out;
  for (auto& cand : raw) {
    bool dup = false;
    for (auto& a : out) {
      PathMetricSample gd = gamma_distance(X, a, cand, 12);
      if (gd.d_gamma() < eps_sep) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(cand);
  }
  return out;
}

// ------------------------------------------------- uniform minimizing radius

double uniform_minimizing_radius(const ChartComplex& X, double delta_max,
                                 int samples, Rng& rng,
                                 const SpacePoint* center,
                                 double region_radius) {
  for (double delta = delta_max; delta > delta_max / 1024.0; delta /= 2) {
    bool ok = true;
    // with a region, zoom the sampling scale with the rung under test
    double rr = center ? std::min(region_radius, 4 * delta) : 0;
    auto draw = [&]() {
      if (!center) return X.sample_point(rng);
      for (int tries = 0; tries < 400; ++tries) {
        SpacePoint s = X.sample_point(rng);
        if (space_distance_fast(X, *center, s) <= rr) return s;
      }
      return *center;
    };
    for (int s = 0; s < samples && ok; ++s) {
      SpacePoint p = draw();
      SpacePoint q = draw();
      GeodesicPath seed;
      try {
        seed = distance(X, p, q).path;
      } catch (const std::exception&) {
        continue;
      }
      double L0 = seed.length();
      if (L0 < 1e-9) continue;
      GeodesicPath base = seed.prefix(std::min(1.0, (delta / 4) / L0));
      if (base.length() < 1e-9) continue;
      auto exts = extend_geodesic(X, base, delta - base.length(), 1e-3);
      for (auto& e : exts)
        if (e.length() >= delta * 0.9 && !is_minimizing(X, e, 1e-5)) {
          ok = false;
          break;
        }
    }
    if (ok) return delta;
  }
  return 0;
}

}  // namespace lengthlab
