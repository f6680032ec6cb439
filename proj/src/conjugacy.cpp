#include "lengthlab/conjugacy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lengthlab {

// ---------------------------------------------------------- ShrinkSchedule -

ShrinkSchedule ShrinkSchedule::standard(double r1, double tau1, int K, int n) {
  if (r1 <= 0) throw std::invalid_argument("schedule needs r1 > 0");
  if (tau1 <= 0) tau1 = 2 * r1;
  ShrinkSchedule s;
  s.n = n;
  for (int k = 0; k < K; ++k) {
    s.radii.push_back(r1 * std::pow(4.0, -k));
    s.taus.push_back(tau1 * std::pow(4.0, -k));
  }
  return s;
}

std::uint64_t ShrinkSchedule::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  for (double r : radii) mix(static_cast<std::uint64_t>(r * 1e12));
  for (double t : taus) mix(static_cast<std::uint64_t>(t * 1e12));
  mix(static_cast<std::uint64_t>(n));
  mix(seed);
  return h;
}

const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::none: return "none";
    case VerdictKind::one_sided: return "one_sided";
    case VerdictKind::symmetric: return "symmetric";
    case VerdictKind::unreachable: return "unreachable";
    case VerdictKind::ultimate: return "ultimate";
    case VerdictKind::inconclusive: return "inconclusive";
  }
  return "?";
}

// ----------------------------------------------------------------- helpers -

namespace {

// deterministic candidate points at distance <= r around base
std::vector<SpacePoint> perturbations(const ChartComplex& X,
                                      const SpacePoint& base, double r, int n,
                                      Rng& rng) {
  std::vector<SpacePoint> out;
  auto pres = X.presences(base);
  std::uniform_real_distribution<double> u(0.3, 1.0);
  int per = std::max(2, n / std::max<int>(1, (int)pres.size()));
  for (auto& pp : pres) {
    auto ring = X.chart(pp.chart).ring(pp.c, r * u(rng), per);
    for (auto& c : ring) {
      out.push_back({pp.chart, c});
      if ((int)out.size() >= n) return out;
    }
  }
  return out;
}

// ring points (full circle / segment sides) at exact radius r
std::vector<SpacePoint> ring_points(const ChartComplex& X,
                                    const SpacePoint& base, double r, int n) {
  std::vector<SpacePoint> out;
  for (auto& pp : X.presences(base)) {
    auto ring = X.chart(pp.chart).ring(pp.c, r, n);
    for (auto& c : ring) out.push_back({pp.chart, c});
  }
  return out;
}

// geodesics p->q within tau of gamma in d_Gamma
std::vector<GeodesicPath> close_geodesics(const ChartComplex& X,
                                          const GeodesicPath& gamma,
                                          const SpacePoint& p,
                                          const SpacePoint& q, double tau) {
  double L = gamma.length();
  std::vector<GeodesicPath> close;
  auto cands = enumerate_geodesics(X, p, q, L + tau, tau / 4);
  for (auto& c : cands)
    if (gamma_distance(X, c, gamma, 12).d_gamma() <= tau)
      close.push_back(std::move(c));
  return close;
}

ConjugacyVerdict detect_pair_based(const ChartComplex& X, const GeodesicPath& g,
                                   const ShrinkSchedule& s, bool perturb_start,
                                   VerdictKind kind) {
  ConjugacyVerdict v;
  SpacePoint p = g.start(), q = g.end();
  Rng rng(s.seed);
  for (int k = 0; k < s.levels(); ++k) {
    double r = s.radii[k], tau = s.taus[k];
    std::vector<std::pair<SpacePoint, SpacePoint>> cands;
    cands.push_back({p, q});  // the unperturbed pair first
    auto qs = perturbations(X, q, r, s.n, rng);
    std::vector<SpacePoint> ps =
        perturb_start ? perturbations(X, p, r, s.n, rng)
                      : std::vector<SpacePoint>(qs.size(), p);
    for (size_t i = 0; i < qs.size() && i < ps.size(); ++i)
      cands.push_back({ps[i], qs[i]});

    bool found = false;
    for (auto& [pk, qk] : cands) {
      auto close = close_geodesics(X, g, pk, qk, tau);
      if (close.size() >= 2) {
        LevelWitness w;
        w.level = k + 1;
        w.p_k = pk;
        w.q_k = qk;
        w.sigma = close[0];
        w.gamma = close[1];
        w.d_sigma = gamma_distance(X, close[0], g, 12).d_gamma();
        w.d_gamma = gamma_distance(X, close[1], g, 12).d_gamma();
        v.witnesses.push_back(std::move(w));
        found = true;
        break;
      }
    }
    if (!found) {
      v.kind = VerdictKind::none;
      v.levels_completed = k;
      return v;
    }
    v.levels_completed = k + 1;
  }
  v.kind = kind;
  return v;
}

}  // namespace

// --------------------------------------------------------------- detectors -

ConjugacyVerdict detect_one_sided(const ChartComplex& X, const GeodesicPath& g,
                                  const ShrinkSchedule& s) {
  return detect_pair_based(X, g, s, false, VerdictKind::one_sided);
}

ConjugacyVerdict detect_symmetric(const ChartComplex& X, const GeodesicPath& g,
                                  const ShrinkSchedule& s) {
  return detect_pair_based(X, g, s, true, VerdictKind::symmetric);
}

ConjugacyVerdict detect_unreachable(const ChartComplex& X,
                                    const GeodesicPath& g,
                                    const ShrinkSchedule& s) {
  ConjugacyVerdict v;
  v.enumeration_caveat = true;
  v.note = "unreachable rests on the enumerated geodesic family";
  SpacePoint p = g.start(), q = g.end();
  double L = g.length();
  for (int k = 0; k < s.levels(); ++k) {
    double r = s.radii[k];
    // endpoint displacement alone moves the minimizer by up to ~3r in
    // d_Gamma (sup ~r plus length gap ~2r), so the margin must dominate it
    double mu = 10 * s.taus.back() + 4 * r;
    auto pring = ring_points(X, p, r, 16);
    auto qring = ring_points(X, q, r, 16);
    if (pring.empty() || qring.empty()) {
      v.kind = VerdictKind::inconclusive;
      v.levels_completed = k;
      return v;
    }
    // aligned and offset pairings first, deterministic order
    std::vector<std::pair<size_t, size_t>> order;
    size_t np = pring.size(), nq = qring.size();
    for (size_t i = 0; i < std::max(np, nq) && order.size() < (size_t)s.n; ++i)
      order.push_back({i % np, i % nq});
    for (size_t i = 0; order.size() < (size_t)s.n && i < np * nq; ++i)
      order.push_back({i % np, (i * 7 + 3) % nq});

    bool survivor = false;
    for (auto& [ip, iq] : order) {
      auto cands = enumerate_geodesics(X, pring[ip], qring[iq], L + 1, mu / 2);
      if (cands.empty()) continue;
      bool all_far = true;
      for (auto& c : cands)
        if (gamma_distance(X, c, g, 12).d_gamma() <= mu) {
          all_far = false;
          break;
        }
      if (all_far) {
        LevelWitness w;
        w.level = k + 1;
        w.p_k = pring[ip];
        w.q_k = qring[iq];
        v.witnesses.push_back(std::move(w));
        survivor = true;
        break;
      }
    }
    if (!survivor) {
      v.kind = VerdictKind::none;
      v.levels_completed = k;
      return v;
    }
    v.levels_completed = k + 1;
  }
  v.kind = VerdictKind::unreachable;
  return v;
}

ConjugacyVerdict detect_ultimate(const ChartComplex& X, const GeodesicPath& g,
                                 const ShrinkSchedule& s) {
  ConjugacyVerdict sym = detect_symmetric(X, g, s);
  if (sym.kind == VerdictKind::symmetric) {
    sym.sub_kind = VerdictKind::symmetric;
    sym.kind = VerdictKind::ultimate;
    return sym;
  }
  ConjugacyVerdict unr = detect_unreachable(X, g, s);
  if (unr.kind == VerdictKind::unreachable) {
    unr.sub_kind = VerdictKind::unreachable;
    unr.kind = VerdictKind::ultimate;
    return unr;
  }
  if (sym.kind == VerdictKind::inconclusive &&
      unr.kind == VerdictKind::inconclusive) {
    unr.kind = VerdictKind::inconclusive;
    return unr;
  }
  ConjugacyVerdict none;
  none.kind = VerdictKind::none;
  none.levels_completed = std::min(sym.levels_completed, unr.levels_completed);
  return none;
}

// ----------------------------------------------------------------- family --

FamilyGrid build_family(const ChartComplex& X, const GeodesicPath& gamma,
                        double radius_U, double radius_V, int grid_n) {
  FamilyGrid F;
  SpacePoint p = gamma.start(), q = gamma.end();
  auto make_grid = [&](const SpacePoint& c, double R) {
    std::vector<SpacePoint> g{c};
    for (double rr : {R / 2, R})
      for (auto& s : ring_points(X, c, rr, grid_n)) g.push_back(s);
    return g;
  };
  F.U = make_grid(p, radius_U);
  F.V = make_grid(q, radius_V);
  size_t nu = F.U.size(), nv = F.V.size();
  F.F.assign(nu, std::vector<GeodesicPath>(nv));
  F.assigned.assign(nu, std::vector<bool>(nv, false));

  double budget = 6 * (radius_U + radius_V) + 1e-6;
  double L = gamma.length();
  // inner-ring cells reference the center, outer-ring cells the inner ring
  auto pred = [&](size_t i) -> size_t {
    if (i == 0) return 0;
    if (i <= (size_t)grid_n) return 0;
    return i - grid_n;
  };
  // spiral order: by total ring depth
  std::vector<std::pair<size_t, size_t>> order;
  for (size_t iu = 0; iu < nu; ++iu)
    for (size_t iv = 0; iv < nv; ++iv) order.push_back({iu, iv});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return a.first + a.second < b.first + b.second;
  });

  for (auto& [iu, iv] : order) {
    const GeodesicPath& ref =
        (iu == 0 && iv == 0)
            ? gamma
            : (F.assigned[pred(iu)][pred(iv)] ? F.F[pred(iu)][pred(iv)] : gamma);
    auto cands =
        enumerate_geodesics(X, F.U[iu], F.V[iv], L + budget, budget / 8);
    double best = 1e300;
    int bi = -1;
    for (size_t i = 0; i < cands.size(); ++i) {
      double d = gamma_distance(X, cands[i], ref, 12).d_gamma();
      if (d < best) {
        best = d;
        bi = (int)i;
      }
    }
    if (bi < 0 || best > budget) {
      F.ok = false;
      F.failure = "family-break: no candidate within the continuity budget";
      return F;
    }
    F.F[iu][iv] = cands[bi];
    F.assigned[iu][iv] = true;
    if (!(iu == 0 && iv == 0)) F.omega = std::max(F.omega, best);
  }
  return F;
}

bool family_uniqueness_check(const ChartComplex& X, const GeodesicPath& gamma,
                             const FamilyGrid& F1, const FamilyGrid& F2,
                             double tau) {
  (void)gamma;
  int common = 0;
  for (size_t iu1 = 0; iu1 < F1.U.size(); ++iu1)
    for (size_t iv1 = 0; iv1 < F1.V.size(); ++iv1) {
      if (!F1.assigned[iu1][iv1]) continue;
      for (size_t iu2 = 0; iu2 < F2.U.size(); ++iu2) {
        if (!X.same_point(F1.U[iu1], F2.U[iu2], 1e-7)) continue;
        for (size_t iv2 = 0; iv2 < F2.V.size(); ++iv2) {
          if (!X.same_point(F1.V[iv1], F2.V[iv2], 1e-7)) continue;
          if (!F2.assigned[iu2][iv2]) continue;
          ++common;
          if (gamma_distance(X, F1.F[iu1][iv1], F2.F[iu2][iv2], 12).d_gamma() >
              tau)
            return false;
        }
      }
    }
  return common > 0;
}

// -------------------------------------------------------------- AB iterate -

bool ABConfig::constants_ok() const {
  if (T0 <= 0 || T <= 0) return false;
  if (std::sin(T0 / 6) / std::sin(2 * T0 / 6) >= 3.0 / 4) return false;
  if (std::cos(T0 / 6) + std::sin(T0 / 6) / std::sin(T0) >= 15.0 / 12)
    return false;
  return d4 <= d3 && d3 <= d2 && d2 <= d1 && d1 <= eps1;
}

ABResult extend_family_AB(const ChartComplex& X, const GeodesicPath& gamma,
                          const ABConfig& cfg, const SpacePoint& u,
                          const SpacePoint& w, const GeodesicSelector& family,
                          double tol) {
  if (!cfg.constants_ok())
    throw std::invalid_argument("AB constants violate the T0 inequalities");
  ABResult res;
  GeodesicPath prev = gamma;
  auto select = [&](const SpacePoint& a, const SpacePoint& b) {
    if (family) return family(a, b);
    auto cands = enumerate_geodesics(X, a, b, prev.length() + cfg.T0 + 0.5,
                                     1e-3, 4);
    if (cands.empty()) return distance(X, a, b).path;
    double best = 1e300;
    size_t bi = 0;
    for (size_t i = 0; i < cands.size(); ++i) {
      double d = gamma_distance(X, cands[i], prev, 12).d_gamma();
      if (d < best) {
        best = d;
        bi = i;
      }
    }
    return cands[bi];
  };

  SpacePoint y = gamma.end();
  double prev_disp = -1;
  int violations = 0;
  GeodesicPath gk;
  for (int it = 0; it < 200; ++it) {
    GeodesicPath sigma = distance(X, w, y).path;
    SpacePoint x = sigma.eval(0.5);
    gk = select(u, x);
    double Lk = gk.length();
    if (Lk < cfg.T0 / 6) {
      res.note = "degenerate family geodesic";
      return res;
    }
    SpacePoint y_new = gk.eval((Lk - cfg.T0 / 6) / Lk);
    double disp = distance(X, y_new, y).d;
    if (prev_disp > tol) {
      double ratio = disp / prev_disp;
      res.ratios.push_back(ratio);
      if (ratio > cfg.ratio_bound + cfg.slack) {
        if (++violations >= 3) {
          res.note = "contraction ratio exceeded 45/48 + slack 3x";
          res.iterations = it + 1;
          return res;
        }
      } else {
        violations = 0;
      }
    }
    prev_disp = disp;
    y = y_new;
    prev = gk;
    res.iterations = it + 1;
    if (disp < tol) {
      res.converged = true;
      break;
    }
  }
  if (!res.converged) {
    res.note = "no convergence in 200 iterations";
    return res;
  }
  // assemble the limit u -> x -> w
  GeodesicPath sigma = distance(X, w, y).path;  // w -> y
  SpacePoint x = sigma.eval(0.5);
  GeodesicPath head = select(u, x);
  GeodesicPath tail = sigma.prefix(0.5).reversed();  // x -> w
  res.limit = concatenate(X, head, tail);
  return res;
}

// ------------------------------------------------------- ultimate radius ---

ExtReal ult_conj_radius(const ChartComplex& X, const SpacePoint& p,
                        double L_max, const ShrinkSchedule& s, int n_dirs) {
  double s0 = std::min(0.05 * X.min_chart_diameter(), L_max / 20);
  ExtReal best = ExtReal::infinity();
  for (auto& pp : X.presences(p)) {
    auto ring = X.chart(pp.chart).ring(pp.c, s0, n_dirs);
    for (auto& d0 : ring) {
      GeodesicPath base = chart_segment(X, pp.chart, pp.c, d0);
      std::vector<GeodesicPath> fulls;
      try {
        fulls = extend_geodesic(X, base, L_max - s0, 1e-3);
      } catch (const std::exception&) {
        continue;
      }
      if (fulls.empty()) fulls.push_back(base);
      if (fulls.size() > 3) fulls.resize(3);
      for (auto& gf : fulls) {
        double L = gf.length();
        // first stop-minimizing parameter, bisected sharply so degenerate
        // endpoint configurations are hit exactly
        std::vector<double> cands;
        if (!is_minimizing(X, gf, 1e-6)) {
          double lo = 0, hi = L;
          for (int it = 0; it < 60 && hi - lo > 1e-7; ++it) {
            double mid = 0.5 * (lo + hi);
            if (is_minimizing(X, gf.prefix(mid / L), 1e-6))
              lo = mid;
            else
              hi = mid;
          }
          cands.push_back(hi);
        }
        cands.push_back(L);
        for (double t : cands) {
          if (best <= ExtReal(t)) break;
          ConjugacyVerdict v = detect_ultimate(X, gf.prefix(t / L), s);
          if (v.kind == VerdictKind::ultimate) {
            best = best.min(ExtReal(t));
            break;
          }
        }
      }
    }
  }
  return best;
}

ExtReal ult_conj_radius_space(const ChartComplex& X, double L_max,
                              const ShrinkSchedule& s, int n_points, Rng& rng) {
  ExtReal best = ExtReal::infinity();
  for (int i = 0; i < n_points; ++i) {
    SpacePoint p = X.sample_point(rng);
    best = best.min(ult_conj_radius(X, p, L_max, s, 4));
  }
  return best;
}

}  // namespace lengthlab
