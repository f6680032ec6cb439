#include "lengthlab/charts.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lengthlab {

namespace {
constexpr double kTieTol = 1e-8;
}

// ---------------------------------------------------------------- Chart ----

bool Chart::extend(const Coord& a, const Coord& b, double step,
                   Coord* out) const {
  double d = dist(a, b);
  Coord p = point_at(a, b, d + step);
  if (!contains(p)) return false;
  *out = p;
  return true;
}

std::vector<std::vector<Coord>> Chart::local_geodesics(const Coord& a,
                                                       const Coord& b,
                                                       double L_max,
                                                       double /*sep*/) const {
  if (dist(a, b) > L_max) return {};
  return {{a, b}};
}

// --------------------------------------------------------- SegmentChart ----

SegmentChart::SegmentChart(double length) : length_(length) {
  if (length <= 0) throw std::invalid_argument("segment length must be > 0");
}

bool SegmentChart::contains(const Coord& c, double tol) const {
  return c.x >= -tol && c.x <= length_ + tol && std::fabs(c.y) <= tol &&
         std::fabs(c.z) <= tol;
}

double SegmentChart::dist(const Coord& a, const Coord& b) const {
  return std::fabs(a.x - b.x);
}

Coord SegmentChart::point_at(const Coord& a, const Coord& b,
                             double len) const {
  double dir = b.x >= a.x ? 1.0 : -1.0;
  if (a.x == b.x) dir = 0.0;
  return {a.x + dir * len, 0, 0};
}

bool SegmentChart::extend(const Coord& a, const Coord& b, double step,
                          Coord* out) const {
  double dir = b.x >= a.x ? 1.0 : -1.0;
  double t = b.x + dir * step;
  if (t < 0 || t > length_) return false;
  *out = {t, 0, 0};
  return true;
}

std::vector<Coord> SegmentChart::ring(const Coord& center, double r,
                                      int /*n*/) const {
  std::vector<Coord> out;
  if (center.x - r >= 0) out.push_back({center.x - r, 0, 0});
  if (center.x + r <= length_) out.push_back({center.x + r, 0, 0});
  return out;
}

Coord SegmentChart::sample(Rng& rng) const {
  std::uniform_real_distribution<double> u(0, length_);
  return {u(rng), 0, 0};
}

// ------------------------------------------------------------ FlatChart ----

FlatChart::FlatChart(std::vector<Vec3> polygon) : poly_(std::move(polygon)) {
  if (poly_.size() < 3) throw std::invalid_argument("polygon needs >= 3 vertices");
  for (size_t i = 0; i < poly_.size(); ++i)
    for (size_t j = i + 1; j < poly_.size(); ++j)
      diameter_ = std::max(diameter_, (poly_[i] - poly_[j]).norm());
}

FlatChart::FlatChart(double disk_radius) : disk_radius_(disk_radius) {
  if (disk_radius <= 0) throw std::invalid_argument("disk radius must be > 0");
  diameter_ = 2 * disk_radius;
}

bool FlatChart::contains(const Coord& c, double tol) const {
  if (std::fabs(c.z) > tol) return false;
  if (is_disk()) return c.x * c.x + c.y * c.y <= (disk_radius_ + tol) * (disk_radius_ + tol);
  size_t n = poly_.size();
  for (size_t i = 0; i < n; ++i) {
    Vec3 e = poly_[(i + 1) % n] - poly_[i];
    Vec3 v = c - poly_[i];
    if (e.x * v.y - e.y * v.x < -tol * (e.norm() + 1)) return false;
  }
  return true;
}

double FlatChart::dist(const Coord& a, const Coord& b) const {
  return (a - b).norm();
}

Coord FlatChart::point_at(const Coord& a, const Coord& b, double len) const {
  double d = dist(a, b);
  if (d == 0) return a;
  return a + (b - a) * (len / d);
}

std::vector<Coord> FlatChart::ring(const Coord& center, double r,
                                   int n) const {
  std::vector<Coord> out;
  for (int i = 0; i < n; ++i) {
    double phi = 2 * M_PI * i / n;
    Coord p = center + Coord{r * std::cos(phi), r * std::sin(phi), 0};
    if (contains(p)) out.push_back(p);
  }
  return out;
}

Coord FlatChart::sample(Rng& rng) const {
  std::uniform_real_distribution<double> u(-1, 1);
  if (is_disk()) {
    for (;;) {
      Coord p{u(rng) * disk_radius_, u(rng) * disk_radius_, 0};
      if (contains(p)) return p;
    }
  }
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (auto& v : poly_) {
    xmin = std::min(xmin, v.x);
    xmax = std::max(xmax, v.x);
    ymin = std::min(ymin, v.y);
    ymax = std::max(ymax, v.y);
  }
  std::uniform_real_distribution<double> ux(xmin, xmax), uy(ymin, ymax);
  for (;;) {
    Coord p{ux(rng), uy(rng), 0};
    if (contains(p)) return p;
  }
}

// ---------------------------------------------------------- SphereChart ----

SphereChart::SphereChart(std::vector<Vec3> inward_normals)
    : normals_(std::move(inward_normals)) {
  Vec3 sum{0, 0, 0};
  for (auto& n : normals_) sum = sum + n.normalized();
  anchor_ = normals_.empty() ? Vec3{0, 0, 1} : sum.normalized();
  if (anchor_.norm() < 0.5) {
    // opposing normals (e.g. a lune): fall back to a direction orthogonal
    // to all of them
    Vec3 c = normals_.size() >= 2 ? normals_[0].cross(normals_[1]) : Vec3{0, 0, 1};
    anchor_ = c.norm() > 1e-12 ? c.normalized() : Vec3{0, 0, 1};
    if (!contains(anchor_, 1e-9)) anchor_ = -anchor_;
  }
}

bool SphereChart::contains(const Coord& c, double tol) const {
  if (std::fabs(c.norm() - 1.0) > 1e-7 + tol) return false;
  for (auto& n : normals_)
    if (n.normalized().dot(c) < -tol) return false;
  return true;
}

double SphereChart::dist(const Coord& a, const Coord& b) const {
  double dot = a.dot(b);
  // chord form is exact near 0, acos near pi
  if (dot > -0.5) return 2 * std::asin(std::min(1.0, (a - b).norm() / 2));
  return std::acos(std::clamp(dot, -1.0, 1.0));
}

Coord SphereChart::point_at(const Coord& a, const Coord& b, double len) const {
  double d = dist(a, b);
  Vec3 u;
  if (d > M_PI - 1e-9) {
    // antipodal: route through the great circle that passes nearest the
    // chart anchor
    Vec3 w = anchor_ - a * anchor_.dot(a);
    if (w.norm() < 1e-12) {
      Vec3 ref = std::fabs(a.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
      w = a.cross(ref);
    }
    u = w.normalized();
  } else if (d < 1e-14) {
    return a;
  } else {
    u = (b - a * std::cos(d)) / std::sin(d);
  }
  return a * std::cos(len) + u * std::sin(len);
}

bool SphereChart::extend(const Coord& a, const Coord& b, double step,
                         Coord* out) const {
  double d = dist(a, b);
  if (d < 1e-12) return false;
  Coord p = point_at(a, b, d + step);
  if (!contains(p)) return false;
  *out = p;
  return true;
}

bool SphereChart::arc_inside(const Coord& a, const Coord& b) const {
  if (normals_.empty()) return true;
  for (int i = 1; i < 8; ++i) {
    Coord m = point_at(a, b, dist(a, b) * i / 8.0);
    if (!contains(m, 1e-7)) return false;
  }
  return true;
}

std::vector<std::vector<Coord>> SphereChart::local_geodesics(
    const Coord& a, const Coord& b, double L_max, double sep) const {
  std::vector<std::vector<Coord>> out;
  double d = dist(a, b);
  if (d > M_PI - 1e-4) {
    // antipodal pair: one-parameter family of half great circles; sample
    // them at roughly `sep` separation (sup-norm gap ~ longitude gap)
    Vec3 ref = std::fabs(a.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
    Vec3 e1 = a.cross(ref).normalized();
    Vec3 e2 = a.cross(e1);
    int n = std::clamp(static_cast<int>(std::ceil(2 * M_PI / std::max(sep / 2, 1e-3))),
                       8, 2880);
    for (int i = 0; i < n; ++i) {
      double phi = 2 * M_PI * i / n;
      Vec3 u = e1 * std::cos(phi) + e2 * std::sin(phi);
      Coord mid = a * std::cos(M_PI / 2) + u * std::sin(M_PI / 2);
      // waypoints at quarter arcs
      Coord q1 = a * std::cos(M_PI / 4) + u * std::sin(M_PI / 4);
      Coord q3 = a * std::cos(3 * M_PI / 4) + u * std::sin(3 * M_PI / 4);
      if (!contains(q1, 1e-7) || !contains(mid, 1e-7) || !contains(q3, 1e-7))
        continue;
      if (M_PI <= L_max) out.push_back({a, q1, mid, q3, b});
    }
    return out;
  }
  if (d <= L_max && arc_inside(a, b)) {
    std::vector<Coord> minor{a};
    for (int i = 1; i < 4; ++i) minor.push_back(point_at(a, b, d * i / 4));
    minor.push_back(b);
    out.push_back(minor);
  }
  double dmaj = 2 * M_PI - d;
  if (d > 1e-9 && dmaj <= L_max) {
    Vec3 u = (b - a * std::cos(d)) / std::sin(d);
    std::vector<Coord> major{a};
    bool ok = true;
    for (int i = 1; i < 8; ++i) {
      double t = -dmaj * i / 8.0;  // walk the long way round
      Coord p = a * std::cos(t) + u * std::sin(t);
      if (!contains(p, 1e-7)) {
        ok = false;
        break;
      }
      major.push_back(p);
    }
    if (ok) {
      major.push_back(b);
      out.push_back(major);
    }
  }
  return out;
}

std::vector<Coord> SphereChart::ring(const Coord& center, double r,
                                     int n) const {
  std::vector<Coord> out;
  Vec3 ref = std::fabs(center.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
  Vec3 e1 = center.cross(ref).normalized();
  Vec3 e2 = center.cross(e1);
  for (int i = 0; i < n; ++i) {
    double phi = 2 * M_PI * i / n;
    Vec3 u = e1 * std::cos(phi) + e2 * std::sin(phi);
    Coord p = center * std::cos(r) + u * std::sin(r);
    if (contains(p)) out.push_back(p);
  }
  return out;
}

Coord SphereChart::sample(Rng& rng) const {
  std::normal_distribution<double> g(0, 1);
  for (;;) {
    Vec3 v{g(rng), g(rng), g(rng)};
    if (v.norm() < 1e-9) continue;
    Coord p = v.normalized();
    if (contains(p)) return p;
  }
}

// --------------------------------------------------------- ChartComplex ----

Coord ChartComplex::arc_point(int arc, int side, double s) const {
  const ArcSide& as = arcs[arc].sides[side];
  const Chart& ch = chart(as.chart);
  double l1 = ch.dist(as.a, as.via);
  if (s <= l1) return ch.point_at(as.a, as.via, s);
  return ch.point_at(as.via, as.b, s - l1);
}

std::pair<double, double> ChartComplex::arc_project(int arc, int side,
                                                    const Coord& c) const {
  const Chart& ch = chart(arcs[arc].sides[side].chart);
  double len = arcs[arc].length;
  // coarse scan + golden-section refinement
  int n = 32;
  double best_s = 0, best_d = 1e300;
  for (int i = 0; i <= n; ++i) {
    double s = len * i / n;
    double d = ch.dist(arc_point(arc, side, s), c);
    if (d < best_d) {
      best_d = d;
      best_s = s;
    }
  }
  double lo = std::max(0.0, best_s - len / n), hi = std::min(len, best_s + len / n);
  const double gr = 0.6180339887498949;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = ch.dist(arc_point(arc, side, x1), c);
  double f2 = ch.dist(arc_point(arc, side, x2), c);
  for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = ch.dist(arc_point(arc, side, x1), c);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = ch.dist(arc_point(arc, side, x2), c);
    }
  }
  double s = 0.5 * (lo + hi);
  return {s, ch.dist(arc_point(arc, side, s), c)};
}

std::vector<SpacePoint> ChartComplex::presences(const SpacePoint& p,
                                                double tol) const {
  std::vector<SpacePoint> out{p};
  auto add = [&](const SpacePoint& q) {
    for (auto& r : out)
      if (r.chart == q.chart && chart(r.chart).dist(r.c, q.c) < kTieTol) return;
    out.push_back(q);
  };
  // two passes so arc-endpoint / junction chains propagate
  for (int pass = 0; pass < 2; ++pass) {
    size_t cur = out.size();
    for (size_t idx = 0; idx < cur; ++idx) {
      SpacePoint base = out[idx];
      for (auto& pg : points) {
        bool member = false;
        for (auto& rep : pg.reps)
          if (rep.chart == base.chart &&
              chart(rep.chart).dist(rep.c, base.c) < tol)
            member = true;
        if (member)
          for (auto& rep : pg.reps) add(rep);
      }
      for (size_t ai = 0; ai < arcs.size(); ++ai) {
        for (size_t si = 0; si < arcs[ai].sides.size(); ++si) {
          if (arcs[ai].sides[si].chart != base.chart) continue;
          auto [s, d] = arc_project(static_cast<int>(ai), static_cast<int>(si),
                                    base.c);
          if (d < tol) {
            for (size_t sj = 0; sj < arcs[ai].sides.size(); ++sj)
              add({arcs[ai].sides[sj].chart,
                   arc_point(static_cast<int>(ai), static_cast<int>(sj), s)});
          }
        }
      }
    }
  }
  return out;
}

std::optional<Coord> ChartComplex::coord_in(const SpacePoint& p, int chart_id,
                                            double tol) const {
  if (p.chart == chart_id) return p.c;
  for (auto& q : presences(p, tol))
    if (q.chart == chart_id) return q.c;
  return std::nullopt;
}

bool ChartComplex::same_point(const SpacePoint& p, const SpacePoint& q,
                              double tol) const {
  if (p.chart == q.chart) {
    if (chart(p.chart).dist(p.c, q.c) < tol) return true;
  }
  for (auto& r : presences(p, 1e-7))
    if (r.chart == q.chart && chart(q.chart).dist(r.c, q.c) < tol) return true;
  return false;
}

void ChartComplex::finalize() {
  if (finalized_) return;
  // arc lengths from side 0, validated against the other sides
  for (auto& ag : arcs) {
    if (ag.sides.empty()) throw std::invalid_argument("arc gluing with no sides");
    double len0 = 0;
    for (size_t si = 0; si < ag.sides.size(); ++si) {
      const ArcSide& s = ag.sides[si];
      const Chart& ch = chart(s.chart);
      double l = ch.dist(s.a, s.via) + ch.dist(s.via, s.b);
      if (si == 0)
        len0 = l;
      else if (std::fabs(l - len0) > 1e-7)
        throw std::invalid_argument("arc gluing sides are not isometric");
    }
    ag.length = len0;
  }
  if (eta <= 0) eta = 1e-2 * min_chart_diameter();

  nodes_.clear();
  auto merge_or_add = [&](Node&& nd) {
    for (auto& ex : nodes_) {
      for (auto& r1 : ex.reps)
        for (auto& r2 : nd.reps)
          if (r1.chart == r2.chart &&
              chart(r1.chart).dist(r1.c, r2.c) < 1e-9) {
            // merge representative lists
            for (auto& r : nd.reps) {
              bool dup = false;
              for (auto& e : ex.reps)
                if (e.chart == r.chart && chart(e.chart).dist(e.c, r.c) < 1e-9)
                  dup = true;
              if (!dup) ex.reps.push_back(r);
            }
            return;
          }
    }
    nodes_.push_back(std::move(nd));
  };

  for (size_t pi = 0; pi < points.size(); ++pi) {
    Node nd;
    nd.pgl = static_cast<int>(pi);
    nd.reps = points[pi].reps;
    merge_or_add(std::move(nd));
  }
  for (size_t ai = 0; ai < arcs.size(); ++ai) {
    int nsamp = std::max(2, static_cast<int>(std::ceil(arcs[ai].length / eta)));
    for (int i = 0; i <= nsamp; ++i) {
      double s = arcs[ai].length * i / nsamp;
      Node nd;
      nd.arc = static_cast<int>(ai);
      nd.param = s;
      for (size_t si = 0; si < arcs[ai].sides.size(); ++si)
        nd.reps.push_back({arcs[ai].sides[si].chart,
                           arc_point(static_cast<int>(ai),
                                     static_cast<int>(si), s)});
      merge_or_add(std::move(nd));
    }
  }

  adj_.assign(nodes_.size(), {});
  for (size_t i = 0; i < nodes_.size(); ++i) {
    for (size_t j = i + 1; j < nodes_.size(); ++j) {
      double best = 1e300;
      int best_chart = -1;
      for (auto& ri : nodes_[i].reps)
        for (auto& rj : nodes_[j].reps)
          if (ri.chart == rj.chart) {
            double d = chart(ri.chart).dist(ri.c, rj.c);
            if (d < best) {
              best = d;
              best_chart = ri.chart;
            }
          }
      if (best_chart >= 0) {
        adj_[i].push_back({static_cast<int>(j), best_chart, best});
        adj_[j].push_back({static_cast<int>(i), best_chart, best});
      }
    }
  }
  finalized_ = true;
}

SpacePoint ChartComplex::sample_point(Rng& rng) const {
  // weight by squared diameter as a rough area proxy
  std::vector<double> w(charts.size());
  double tot = 0;
  for (size_t i = 0; i < charts.size(); ++i) {
    double d = charts[i]->diameter();
    w[i] = charts[i]->dim() == 1 ? d : d * d;
    tot += w[i];
  }
  std::uniform_real_distribution<double> u(0, tot);
  double r = u(rng);
  for (size_t i = 0; i < charts.size(); ++i) {
    if (r <= w[i] || i + 1 == charts.size())
      return {static_cast<int>(i), charts[i]->sample(rng)};
    r -= w[i];
  }
  return {0, charts[0]->sample(rng)};
}

double ChartComplex::min_chart_diameter() const {
  double m = 1e300;
  for (auto& c : charts) m = std::min(m, c->diameter());
  return m;
}

}  // namespace lengthlab
