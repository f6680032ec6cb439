#include "lengthlab/fans.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lengthlab {

// -------------------------------------------------------------- PolyCurve --

PolyCurve::PolyCurve(const ChartComplex& X, std::vector<SpacePoint> samples)
    : samples_(std::move(samples)) {
  if (samples_.size() < 1) throw std::invalid_argument("empty curve");
  cum_.push_back(0);
  for (size_t i = 0; i + 1 < samples_.size(); ++i) {
    DistanceResult r = distance(X, samples_[i], samples_[i + 1]);
    segs_.push_back(r.path);
    cum_.push_back(cum_.back() + r.d);
  }
}

SpacePoint PolyCurve::at(double s) const {
  if (s <= 0 || segs_.empty()) return samples_.front();
  if (s >= cum_.back()) return samples_.back();
  size_t i =
      std::upper_bound(cum_.begin(), cum_.end(), s) - cum_.begin() - 1;
  i = std::min(i, segs_.size() - 1);
  double seg_len = cum_[i + 1] - cum_[i];
  if (seg_len <= 0) return samples_[i];
  return segs_[i].eval((s - cum_[i]) / seg_len);
}

const char* to_string(FanStatus s) {
  switch (s) {
    case FanStatus::completed: return "completed";
    case FanStatus::hit_ultconj: return "hit_ultconj";
    case FanStatus::continuity_break: return "continuity_break";
  }
  return "?";
}

// --------------------------------------------------------------- fans ------

namespace {

GeodesicPath trivial_path(const ChartComplex& X, const SpacePoint& p) {
  return chart_segment(X, p.chart, p.c, p.c);
}

// candidate closest to ref in d_Gamma among geodesics p -> q below the cap
bool best_candidate(const ChartComplex& X, const SpacePoint& p,
                    const SpacePoint& q, double L_max, double sep,
                    const GeodesicPath& ref, GeodesicPath* out,
                    double* out_d) {
  std::vector<GeodesicPath> cands;
  try {
    cands = enumerate_geodesics(X, p, q, L_max, sep);
  } catch (const std::exception&) {
    return false;
  }
  double best = 1e300;
  int bi = -1;
  for (size_t i = 0; i < cands.size(); ++i) {
    double d = gamma_distance(X, cands[i], ref, 12).d_gamma();
    if (d < best) {
      best = d;
      bi = static_cast<int>(i);
    }
  }
  if (bi < 0) return false;
  *out = std::move(cands[bi]);
  *out_d = best;
  return true;
}

}  // namespace

Fan build_fan(const ChartComplex& X, const PolyCurve& C, double ult_bound,
              double continuity_budget, double step) {
  Fan f;
  f.base_length = C.length();
  double step0 = step > 0 ? step : std::max(C.length() / 32, 1e-9);
  f.step = step0;
  double budget = continuity_budget > 0 ? continuity_budget : 6 * step0;
  double min_step = step0 / 256;  // 8 halvings

  SpacePoint p = C.at(0);
  f.s_params.push_back(0);
  f.sigmas.push_back(trivial_path(X, p));
  if (f.base_length <= 1e-12) return f;

  double s = 0;
  double cur_step = step0;
  int guard = static_cast<int>(12 * C.length() / step0) + 200;
  while (s < C.length() - 1e-9 && guard-- > 0) {
    double trial = std::min(cur_step, C.length() - s);
    const GeodesicPath& prev = f.sigmas.back();
    bool accepted = false;
    for (int halv = 0; halv <= 8 && !accepted; ++halv) {
      SpacePoint q = C.at(s + trial);
      GeodesicPath g;
      double d = 0;
      double cap = std::min(ult_bound, prev.length() + budget);
      if (best_candidate(X, p, q, cap, std::min(budget / 4, 1e-3), prev, &g,
                         &d) &&
          d <= budget && g.length() < ult_bound) {
        s += trial;
        f.s_params.push_back(s);
        f.sigmas.push_back(std::move(g));
        accepted = true;
      } else {
        trial /= 2;
      }
    }
    if (!accepted || trial < min_step) {
      if (s >= C.length() - 1e-9) break;
      // stalled: decide whether the fan is climbing into the bound by
      // retrying the full step without the length cap
      SpacePoint q = C.at(std::min(s + cur_step, C.length()));
      GeodesicPath g;
      double d = 0;
      const GeodesicPath& last = f.sigmas.back();
      bool over = best_candidate(X, p, q, last.length() + budget,
                                 std::min(budget / 4, 1e-3), last, &g, &d) &&
                  d <= budget && g.length() >= ult_bound;
      f.status = over || last.length() >= ult_bound - budget
                     ? FanStatus::hit_ultconj
                     : FanStatus::continuity_break;
      f.break_s = s;
      break;
    }
    cur_step = std::min(step0, 2 * trial);
  }
  if (guard <= 0 && f.status == FanStatus::completed) {
    f.status = FanStatus::continuity_break;
    f.break_s = s;
  }
  for (auto& g : f.sigmas)
    f.limsup_length = std::max(f.limsup_length, g.length());
  return f;
}

FanLengthCheck fan_length_check(const PolyCurve& C, const Fan& fan,
                                double tol_fan, double tol_geo) {
  FanLengthCheck r;
  r.tol = tol_fan > 0 ? tol_fan : 5 * fan.step + 10 * tol_geo;
  for (size_t i = 0; i < fan.sigmas.size(); ++i) {
    double excess = fan.sigmas[i].length() - C.arc_to(fan.s_params[i]);
    if (excess > r.worst_excess) {
      r.worst_excess = excess;
      if (excess > r.tol) {
        r.ok = false;
        r.bad_s = fan.s_params[i];
      }
    }
  }
  return r;
}

Band fan_band(const Fan& fan, double r) {
  Band b;
  b.r = r;
  for (auto& g : fan.sigmas) {
    double L = g.length();
    if (L >= r && L > 0) b.points.push_back(g.eval(r / L));
  }
  return b;
}

// ----------------------------------------------------------- square fans ---

HomotopyGrid contraction_grid(const ChartComplex& X, int chart,
                              const std::vector<Coord>& loop,
                              const Coord& center, int T) {
  if (T < 1) throw std::invalid_argument("need T >= 1");
  const Chart& ch = X.chart(chart);
  HomotopyGrid H;
  for (int t = 0; t <= T; ++t) {
    std::vector<SpacePoint> row;
    double f = static_cast<double>(t) / T;
    for (auto& c : loop) {
      double d = ch.dist(center, c);
      row.push_back({chart, d <= 0 ? center : ch.point_at(center, c, f * d)});
    }
    H.rows.push_back(std::move(row));
  }
  return H;
}

SquareFan build_square_fan(const ChartComplex& X, const HomotopyGrid& H,
                           double ult_bound, double continuity_budget) {
  SquareFan sf;
  if (H.rows.empty() || H.rows[0].size() < 2) {
    sf.ok = false;
    sf.failure = "empty grid";
    return sf;
  }
  int T = H.T(), S = H.S();
  // grid resolution: the largest gap between neighboring samples
  double gap = 0;
  for (int t = 0; t <= T; ++t)
    for (int s = 0; s <= S; ++s) {
      if (s > 0)
        gap = std::max(gap, distance(X, H.rows[t][s - 1], H.rows[t][s]).d);
      if (t > 0)
        gap = std::max(gap, distance(X, H.rows[t - 1][s], H.rows[t][s]).d);
    }
  double budget = continuity_budget > 0 ? continuity_budget : 6 * gap;

  for (int t = 0; t <= T; ++t) {
    double row_len = 0;
    for (int s = 1; s <= S; ++s)
      row_len += distance(X, H.rows[t][s - 1], H.rows[t][s]).d;
    sf.max_row_length = std::max(sf.max_row_length, row_len);
    if (row_len >= ult_bound) {
      sf.ok = false;
      std::ostringstream os;
      os << "row " << t << " has length " << row_len
         << " >= the working bound " << ult_bound;
      sf.failure = os.str();
      return sf;
    }
  }

  SpacePoint base = H.rows[0][0];
  sf.sigma.assign(T + 1, std::vector<GeodesicPath>(S + 1));
  sf.sigma[0][0] = trivial_path(X, base);
  for (int t = 0; t <= T; ++t) {
    for (int s = 0; s <= S; ++s) {
      if (t == 0 && s == 0) continue;
      const GeodesicPath& ref = s > 0 ? sf.sigma[t][s - 1] : sf.sigma[t - 1][s];
      GeodesicPath g;
      double d = 0;
      double cap = std::min(ult_bound, ref.length() + budget);
      if (!best_candidate(X, base, H.rows[t][s], cap,
                          std::min(budget / 4, 1e-3), ref, &g, &d) ||
          d > budget) {
        sf.ok = false;
        std::ostringstream os;
        os << "continuity break at (s=" << s << ", t=" << t << ")";
        sf.failure = os.str();
        return sf;
      }
      sf.sigma[t][s] = std::move(g);
    }
  }
  return sf;
}

// --------------------------------------------------------- homotopy audit --

const char* to_string(HomotopyAuditStatus s) {
  switch (s) {
    case HomotopyAuditStatus::vacuous_pass: return "vacuous_pass";
    case HomotopyAuditStatus::grid_invalid: return "grid_invalid";
    case HomotopyAuditStatus::rows_exceed_bound: return "rows_exceed_bound";
    case HomotopyAuditStatus::bound_violation: return "bound_violation";
    case HomotopyAuditStatus::fan_hit_bound: return "fan_hit_bound";
    case HomotopyAuditStatus::closed_throughout: return "closed_throughout";
  }
  return "?";
}

namespace {

// samples of the initial piece of a closed row up to arclength `cut`,
// optionally traversed backward from the end
std::vector<SpacePoint> half_row(const ChartComplex& X,
                                 const std::vector<SpacePoint>& row,
                                 double cut, bool backward) {
  std::vector<SpacePoint> seq = row;
  if (backward) std::reverse(seq.begin(), seq.end());
  std::vector<SpacePoint> out{seq[0]};
  double acc = 0;
  for (size_t i = 1; i < seq.size(); ++i) {
    DistanceResult r = distance(X, seq[i - 1], seq[i]);
    if (acc + r.d >= cut) {
      double rem = cut - acc;
      if (rem > 1e-12) out.push_back(r.path.eval(rem / r.d));
      break;
    }
    acc += r.d;
    out.push_back(seq[i]);
  }
  return out;
}

}  // namespace

HomotopyAuditReport long_homotopy_audit(const ChartComplex& X,
                                        const GeodesicPath& c,
                                        const HomotopyGrid& H,
                                        double ult_bound, double tol_geo) {
  HomotopyAuditReport rep;
  if (c.length() <= 10 * tol_geo) {
    rep.status = HomotopyAuditStatus::vacuous_pass;
    rep.note = "trivial base curve";
    return rep;
  }
  int T = H.T(), S = H.S();
  if (T < 1 || S < 2) {
    rep.status = HomotopyAuditStatus::grid_invalid;
    rep.note = "grid too small";
    return rep;
  }
  // grid resolution, for the matching and closedness tolerances
  double gap = 0;
  for (int t = 0; t <= T; ++t)
    for (int s = 1; s <= S; ++s)
      gap = std::max(gap, distance(X, H.rows[t][s - 1], H.rows[t][s]).d);
  double match_tol = 3 * gap + 10 * tol_geo;

  for (int s = 0; s <= S; ++s)
    if (distance(X, H.rows[0][s], H.rows[0][0]).d > 10 * tol_geo) {
      rep.status = HomotopyAuditStatus::grid_invalid;
      rep.note = "row 0 is not a point curve";
      return rep;
    }
  for (int t = 0; t <= T; ++t)
    if (distance(X, H.rows[t][0], H.rows[t][S]).d > 10 * tol_geo) {
      rep.status = HomotopyAuditStatus::grid_invalid;
      rep.note = "rows are not closed";
      return rep;
    }
  for (int s = 0; s <= S; ++s) {
    SpacePoint on_c = c.eval(static_cast<double>(s) / S);
    if (distance(X, H.rows[T][s], on_c).d > match_tol) {
      rep.status = HomotopyAuditStatus::grid_invalid;
      rep.note = "final row does not trace the audited curve";
      return rep;
    }
  }

  std::vector<double> row_len(T + 1, 0);
  for (int t = 0; t <= T; ++t) {
    for (int s = 1; s <= S; ++s)
      row_len[t] += distance(X, H.rows[t][s - 1], H.rows[t][s]).d;
    rep.max_row_length = std::max(rep.max_row_length, row_len[t]);
  }
  if (rep.max_row_length >= 2 * ult_bound) {
    rep.status = HomotopyAuditStatus::rows_exceed_bound;
    std::ostringstream os;
    os << "longest row " << rep.max_row_length << " >= 2 * " << ult_bound;
    rep.note = os.str();
    return rep;
  }

  double close_tol = 6 * gap + 10 * tol_geo;
  for (int t = 0; t <= T; ++t) {
    double half = row_len[t] / 2;
    if (half <= 10 * tol_geo) continue;  // near-point rows are closed
    PolyCurve Cf(X, half_row(X, H.rows[t], half, false));
    PolyCurve Cb(X, half_row(X, H.rows[t], half, true));
    Fan hf = build_fan(X, Cf, ult_bound);
    Fan hb = build_fan(X, Cb, ult_bound);
    if (hf.status == FanStatus::hit_ultconj ||
        hb.status == FanStatus::hit_ultconj) {
      rep.status = HomotopyAuditStatus::fan_hit_bound;
      rep.break_t = t;
      rep.note = "a half-row fan climbed to the working bound";
      return rep;
    }
    if (hf.status == FanStatus::continuity_break ||
        hb.status == FanStatus::continuity_break) {
      rep.status = HomotopyAuditStatus::grid_invalid;
      rep.break_t = t;
      rep.note = "fan continuity broke; the grid does not support a "
                 "continuous unfolding";
      return rep;
    }
    double dmid =
        gamma_distance(X, hf.sigmas.back(), hb.sigmas.back(), 12).d_gamma();
    if (dmid > close_tol) {
      rep.status = HomotopyAuditStatus::bound_violation;
      rep.break_t = t;
      std::ostringstream os;
      os << "fan pair opened at row " << t << " (gap " << dmid
         << ") although every row is shorter than twice the bound; the "
            "working bound is too high or the grid is not a genuine "
            "null homotopy";
      rep.note = os.str();
      return rep;
    }
  }
  rep.status = HomotopyAuditStatus::closed_throughout;
  rep.note = "fan pairs stayed closed through the final row, which cannot "
             "happen for a genuine homotopy ending at a closed geodesic";
  return rep;
}

}  // namespace lengthlab
