#include "lengthlab/rauch.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lengthlab/parallel.hpp"

namespace lengthlab {

namespace {

// chart shared by every point of the list (checked through presences), or -1
int common_chart(const ChartComplex& X, const std::vector<SpacePoint>& pts) {
  for (int c = 0; c < X.num_charts(); ++c) {
    bool all = true;
    for (auto& p : pts)
      if (!X.coord_in(p, c)) {
        all = false;
        break;
      }
    if (all) return c;
  }
  return -1;
}

double finite_or(const ExtReal& e, double fallback) {
  return e.is_inf() ? fallback : e.value();
}

}  // namespace

// --------------------------------------------------------------- bridges ---

Bridge build_bridge_at(const ChartComplex& X, const GeodesicPath& gamma,
                       const GeodesicPath& sigma, std::vector<double> params,
                       double kappa) {
  if (params.size() < 2 || params.front() != 0 || params.back() != 1)
    throw std::invalid_argument("bridge partition must run from 0 to 1");
  if (!std::is_sorted(params.begin(), params.end()))
    throw std::invalid_argument("bridge partition must be sorted");
  Bridge b;
  b.space = &X;
  b.gamma = gamma;
  b.sigma = sigma;
  b.kappa = kappa;
  b.ts = params;
  b.ss = params;
  double Lg = gamma.length(), Ls = sigma.length();
  b.length = std::max(Lg, Ls);
  ExtReal Dk = model::diameter_bound(kappa);

  int N = static_cast<int>(params.size()) - 1;
  std::vector<SpacePoint> gpts(N + 1), spts(N + 1);
  for (int j = 0; j <= N; ++j) {
    gpts[j] = gamma.eval(params[j]);
    spts[j] = sigma.eval(params[j]);
  }
  std::vector<double> trans(N + 1);
  for (int j = 0; j <= N; ++j)
    trans[j] = distance(X, gpts[j], spts[j]).d;

  for (int j = 0; j < N; ++j) {
    Strut st;
    st.T = Lg * (params[j + 1] - params[j]);
    st.S = Ls * (params[j + 1] - params[j]);
    st.A = trans[j];
    st.B = trans[j + 1];
    st.D = distance(X, gpts[j], spts[j + 1]).d;
    if (!Dk.is_inf() &&
        (st.S + st.A + st.D >= Dk.value() || st.T + st.B + st.D >= Dk.value()))
      throw std::invalid_argument(
          "strut too large for a unique comparison strut; increase N");
    st.chart = common_chart(X, {gpts[j], gpts[j + 1], spts[j], spts[j + 1]});
    bool covered = false;
    if (st.chart >= 0 && X.chart(st.chart).curvature() <= kappa + 1e-12)
      covered = true;
    if (!covered && X.cba_kappa && *X.cba_kappa <= kappa + 1e-12) {
      // declared certificate: accept struts small against the uniformly
      // minimizing scale, where the local CAT neighborhoods live
      double scale = X.delta_witness > 0 ? X.delta_witness
                                         : 0.5 * X.min_chart_diameter();
      if (st.S + st.T + st.A + st.B <= 2 * scale) covered = true;
    }
    if (!covered)
      throw std::invalid_argument(
          "strut escapes every certified CAT(kappa) neighborhood; "
          "increase N or declare a curvature certificate");
    b.height = std::max({b.height, st.A, st.B, std::max(0.0, st.D - st.S),
                         std::max(0.0, st.D - st.T)});
    b.struts.push_back(st);
  }
  return b;
}

Bridge build_bridge(const ChartComplex& X, const GeodesicPath& gamma,
                    const GeodesicPath& sigma, int N, double kappa) {
  if (N < 1) throw std::invalid_argument("bridge needs N >= 1");
  std::vector<double> params(N + 1);
  for (int j = 0; j <= N; ++j) params[j] = static_cast<double>(j) / N;
  params.back() = 1.0;
  return build_bridge_at(X, gamma, sigma, std::move(params), kappa);
}

// ----------------------------------------------------------- development ---

ComparisonBridge develop_comparison_bridge(const Bridge& b, double kappa) {
  ComparisonBridge cb;
  cb.kappa = kappa;
  int N = b.N();
  if (N == 0) throw std::invalid_argument("empty bridge");

  std::vector<model::ModelPoint> gx(N + 1), sy(N + 1);
  gx[0] = model::model_origin(kappa);
  // start of the sigma deck at the initial transverse distance
  sy[0] = model::place_point(gx[0], gx[0], b.struts[0].A, b.struts[0].A, +1);

  auto pick = [&](const model::ModelPoint& X, const model::ModelPoint& Y,
                  double dx, double dy, const model::ModelPoint* away,
                  const model::ModelPoint* away2) {
    model::ModelPoint a = model::place_point(X, Y, dx, dy, +1);
    model::ModelPoint c = model::place_point(X, Y, dx, dy, -1);
    auto score = [&](const model::ModelPoint& z) {
      double s = 0;
      if (away) s += model::model_distance(z, *away);
      if (away2) s += 1e-3 * model::model_distance(z, *away2);
      return s;
    };
    return score(a) >= score(c) ? a : c;
  };

  for (int j = 0; j < N; ++j) {
    const Strut& st = b.struts[j];
    // triangle S-A-D: corners gx[j], sy[j], sy[j+1]; place sy[j+1] at
    // distance D from gx[j] and S from sy[j], forward (away from sy[j-1])
    const model::ModelPoint* back_s = j > 0 ? &sy[j - 1] : nullptr;
    if (model::model_distance(gx[j], sy[j]) < 1e-12) {
      if (j == 0) {
        sy[j + 1] = model::place_point(gx[j], gx[j], st.S, st.S, +1);
      } else {
        // decks touch mid-bridge: continue straight away from the previous
        // sigma deck point
        Vec3 u = model::tangent(sy[j], sy[j - 1]);
        sy[j + 1] = model::flow(sy[j], u * -1.0, st.S);
      }
    } else {
      sy[j + 1] = pick(gx[j], sy[j], st.D, st.S, back_s,
                       j > 0 ? &gx[j - 1] : nullptr);
    }
    // triangle T-B-D: corners gx[j], sy[j+1], gx[j+1]; place gx[j+1] at
    // distance T from gx[j] and B from sy[j+1], across the diagonal from
    // sy[j]
    if (model::model_distance(gx[j], sy[j + 1]) < 1e-12) {
      Vec3 u = j > 0 ? model::tangent(gx[j], gx[j - 1])
                     : model::tangent(gx[j], sy[j]);
      gx[j + 1] = model::flow(gx[j], u * -1.0, st.T);
    } else {
      const model::ModelPoint* away =
          model::model_distance(gx[j], sy[j]) >= 1e-12
              ? &sy[j]
              : (j > 0 ? &gx[j - 1] : nullptr);
      gx[j + 1] = pick(gx[j], sy[j + 1], st.T, st.B, away, nullptr);
    }

    auto err = [&](const model::ModelPoint& a, const model::ModelPoint& c,
                   double want) {
      return std::fabs(model::model_distance(a, c) - want);
    };
    cb.max_side_error = std::max(
        {cb.max_side_error, err(gx[j], sy[j], st.A),
         err(gx[j + 1], sy[j + 1], st.B), err(sy[j], sy[j + 1], st.S),
         err(gx[j], gx[j + 1], st.T), err(gx[j], sy[j + 1], st.D)});
  }

  cb.deck_gamma = gx;
  cb.deck_sigma = sy;
  for (int m = 1; m < N; ++m) {
    double ag = model::angle_at(gx[m], gx[m - 1], sy[m]) +
                model::angle_at(gx[m], sy[m], sy[m + 1]) +
                model::angle_at(gx[m], sy[m + 1], gx[m + 1]);
    double as = model::angle_at(sy[m], sy[m - 1], gx[m - 1]) +
                model::angle_at(sy[m], gx[m - 1], gx[m]) +
                model::angle_at(sy[m], gx[m], sy[m + 1]);
    cb.angle_sum_gamma.push_back(ag);
    cb.angle_sum_sigma.push_back(as);
  }
  return cb;
}

bool hemisphere_check(double L, double h) {
  return L < M_PI && h <= (M_PI - L) / 4;
}

// -------------------------------------------------------------- audit ------

RelRauchRecord rel_rauch_audit(const Bridge& b, double r, double R,
                               double kappa, double tol) {
  RelRauchRecord rec;
  rec.h = b.height;
  double L = b.length;
  double Dk = finite_or(model::diameter_bound(kappa), 0);  // 0 = infinite
  if (Dk > 0 && !(L < Dk && b.height <= (Dk - L) / 4))
    throw std::invalid_argument("bridge too long/tall for the audit window");
  double h = b.height;
  if (!(r > 4 * h && r < L && R > r + 4 * h && R < L - 4 * h))
    throw std::invalid_argument("audit radii outside the admissible windows");

  // snap to the nearest partition points (transverse sides live there)
  auto snap = [&](double x) {
    int best = -1;
    double bd = 1e300;
    for (size_t j = 0; j < b.ts.size(); ++j) {
      double arc = b.ts[j] * L;
      if (std::fabs(arc - x) < bd) {
        bd = std::fabs(arc - x);
        best = static_cast<int>(j);
      }
    }
    if (bd > h + 1e-9)
      throw std::invalid_argument(
          "audit radius not aligned with a partition point within h");
    return best;
  };
  int i = snap(r), j = snap(R);
  rec.r = b.ts[i] * L;
  rec.R = b.ts[j] * L;

  double num = i < b.N() ? b.struts[i].A : b.struts.back().B;
  double den = j < b.N() ? b.struts[j].A : b.struts.back().B;
  if (den <= 0) throw std::invalid_argument("zero transverse side at R");
  rec.lhs = num / den;

  double sup = 0, sup_plain = 0;
  int grid = 64;
  for (int k = 0; k <= grid; ++k) {
    double rb = rec.r - h + h * k / grid;
    if (rb <= 0) continue;
    double ratio = model::warping(kappa, rb) /
                   model::warping(kappa, rec.R - rec.r + rb);
    double term = ratio;
    if (Dk > 0) {
      term = (1 + 4 * h / Dk) * ratio +
             (4 * h + model::arc_chord_error(kappa, rec.R - rec.r + rb, h)) /
                 Dk;
    }
    sup = std::max(sup, term);
    sup_plain = std::max(sup_plain, ratio);
  }
  rec.rhs = sup;
  rec.sup_ratio = sup_plain;
  rec.holds = rec.lhs <= rec.rhs + tol;
  return rec;
}

// ------------------------------------------------------ sampled CAT tests --

ComparisonTestResult cat_triangle_test(const ChartComplex& X, double kappa,
                                       int n_triangles, int n_point_pairs,
                                       std::uint64_t seed, double tol) {
  ComparisonTestResult res;
  Rng rng(seed);
  std::vector<int> charts2d;
  for (int c = 0; c < X.num_charts(); ++c)
    if (X.chart(c).dim() == 2) charts2d.push_back(c);
  if (charts2d.empty()) {
    res.counterexample = "";
    return res;  // vacuous certificate: no 2-d charts to sample
  }
  ExtReal Dk = model::diameter_bound(kappa);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  for (int t = 0; t < n_triangles; ++t) {
    int ci = charts2d[t % charts2d.size()];
    const Chart& ch = X.chart(ci);
    double min_sep = 0.05 * ch.diameter();
    Coord A, B, C;
    double a = 0, bb = 0, c = 0;
    bool ok = false;
    for (int tries = 0; tries < 200 && !ok; ++tries) {
      A = ch.sample(rng);
      B = ch.sample(rng);
      C = ch.sample(rng);
      a = ch.dist(B, C);
      bb = ch.dist(C, A);
      c = ch.dist(A, B);
      ok = a > min_sep && bb > min_sep && c > min_sep;
      if (ok && !Dk.is_inf()) ok = a + bb + c < 1.9 * Dk.value();
    }
    if (!ok) continue;
    model::ModelTriangle tri;
    try {
      tri = model::comparison_triangle(kappa, a, bb, c);
    } catch (const std::exception& e) {
      res.certified = false;
      res.counterexample =
          std::string("comparison triangle infeasible: ") + e.what();
      return res;
    }
    double side_len[3] = {a, bb, c};
    auto side_point = [&](int side, double s) {
      // side 0 = B->C, 1 = C->A, 2 = A->B
      const Coord& from = side == 0 ? B : (side == 1 ? C : A);
      const Coord& to = side == 0 ? C : (side == 1 ? A : B);
      return ch.point_at(from, to, s);
    };
    for (int k = 0; k < n_point_pairs; ++k) {
      int s1 = static_cast<int>(u01(rng) * 3) % 3;
      int s2 = static_cast<int>(u01(rng) * 3) % 3;
      double t1 = u01(rng) * side_len[s1];
      double t2 = u01(rng) * side_len[s2];
      Coord x = side_point(s1, t1), y = side_point(s2, t2);
      double d = ch.dist(x, y);
      double dbar = model::comparison_points_distance(tri, s1, t1, s2, t2);
      ++res.n_checked;
      if (d > dbar + tol) {
        res.certified = false;
        res.worst_violation = std::max(res.worst_violation, d - dbar);
        std::ostringstream os;
        os << "chart " << ci << ": d(x,y)=" << d << " exceeds comparison "
           << dbar << " on triangle (" << a << "," << bb << "," << c << ")";
        res.counterexample = os.str();
        return res;
      }
    }
  }
  return res;
}

ComparisonTestResult angle_comparison_test(const ChartComplex& X, double kappa,
                                           int n_samples, std::uint64_t seed,
                                           double tol) {
  ComparisonTestResult res;
  Rng rng(seed);
  ExtReal Dk = model::diameter_bound(kappa);
  // small triangles: unique minimizers and perimeter well under 2 D_kappa
  double rho = 0.3 * X.min_chart_diameter();
  if (X.delta_witness > 0) rho = std::min(rho, 0.45 * X.delta_witness);
  if (!Dk.is_inf()) rho = std::min(rho, 0.3 * Dk.value());
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  for (int t = 0; t < n_samples; ++t) {
    SpacePoint p = X.sample_point(rng);
    auto pick_near = [&]() -> SpacePoint {
      for (int tries = 0; tries < 50; ++tries) {
        SpacePoint q = X.sample_point(rng);
        double d = distance(X, p, q).d;
        if (d > 0.2 * rho && d <= rho) return q;
      }
      // fall back to a ring point in p's chart
      auto ring = X.chart(p.chart).ring(p.c, 0.5 * rho, 8);
      if (ring.empty()) return p;
      return {p.chart, ring[static_cast<size_t>(u01(rng) * ring.size()) %
                            ring.size()]};
    };
    SpacePoint q = pick_near(), r = pick_near();
    double dpq = distance(X, p, q).d, dpr = distance(X, p, r).d;
    if (dpq < 1e-9 || dpr < 1e-9) continue;
    GeodesicPath gq = distance(X, p, q).path, gr = distance(X, p, r).path;
    double prev = -1;
    // shrink x, y toward p: comparison angles must be nonincreasing
    for (int i = 0; i < 5; ++i) {
      double f = std::pow(2.0, -i);
      SpacePoint x = gq.eval(f), y = gr.eval(f);
      double a = distance(X, p, x).d, b = distance(X, p, y).d;
      double cxy = distance(X, x, y).d;
      if (a < 1e-9 || b < 1e-9) break;
      double ang;
      try {
        ang = model::comparison_angle(kappa, a, b, cxy);
      } catch (const std::exception&) {
        break;  // perimeter window violated at this scale; skip
      }
      ++res.n_checked;
      // Distances carry the interface-net refinement error (~1e-6); the
      // induced angle error scales like (distance error) / (side length),
      // so the monotonicity slack must grow as the triangle shrinks.
      double slack = tol + 2e-5 / std::max(1e-9, std::min(a, b));
      if (prev >= 0 && ang > prev + slack) {
        res.certified = false;
        res.worst_violation = std::max(res.worst_violation, ang - prev);
        std::ostringstream os;
        os << "comparison angle grew from " << prev << " to " << ang
           << " while shrinking toward p (chart " << p.chart << ")";
        res.counterexample = os.str();
        return res;
      }
      prev = ang;
    }
  }
  return res;
}

// ------------------------------------------------- conjugate bound audit ---

RauchAuditReport rauch_conjugate_bound_audit(const ChartComplex& X,
                                             double kappa,
                                             const ShrinkSchedule& s,
                                             int n_geodesics, double horizon,
                                             std::uint64_t seed) {
  RauchAuditReport rep;
  ExtReal Dk = model::diameter_bound(kappa);
  double cap = Dk.is_inf() ? horizon : 0.9 * Dk.value();
  Rng rng(seed);
  std::vector<GeodesicPath> geos;
  for (int i = 0; i < n_geodesics * 30 &&
                  static_cast<int>(geos.size()) < n_geodesics;
       ++i) {
    SpacePoint p = X.sample_point(rng);
    SpacePoint q = X.sample_point(rng);
    double d = distance(X, p, q).d;
    if (d < 0.1 * cap || d > cap) continue;
    geos.push_back(distance(X, p, q).path);
  }
  rep.n_tested = static_cast<int>(geos.size());
  std::vector<int> verdicts(geos.size(), 0);
  par::parallel_for(geos.size(), [&](std::size_t i) {
    ConjugacyVerdict v = detect_symmetric(X, geos[i], s);
    verdicts[i] = static_cast<int>(v.kind);
  });
  for (size_t i = 0; i < geos.size(); ++i) {
    auto k = static_cast<VerdictKind>(verdicts[i]);
    if (k == VerdictKind::symmetric) {
      ++rep.n_symmetric;
      std::ostringstream os;
      os << "symmetric verdict on geodesic of length " << geos[i].length();
      rep.notes.push_back(os.str());
    } else if (k == VerdictKind::inconclusive) {
      ++rep.n_inconclusive;
    }
  }
  return rep;
}

}  // namespace lengthlab
