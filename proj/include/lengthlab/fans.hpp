#ifndef LENGTHLAB_FANS_HPP
#define LENGTHLAB_FANS_HPP

#include <string>
#include <vector>

#include "lengthlab/geodesic.hpp"

namespace lengthlab {

// A continuous base curve realized as a polyline: consecutive samples are
// joined by minimizing segments, and the curve is parametrized by arclength.
class PolyCurve {
 public:
  PolyCurve(const ChartComplex& X, std::vector<SpacePoint> samples);

  double length() const { return cum_.back(); }
  // point at arclength s from the start
  SpacePoint at(double s) const;
  // arclength of the initial piece up to parameter s (identity by
  // construction, kept for readability at call sites)
  double arc_to(double s) const { return s; }
  const std::vector<SpacePoint>& samples() const { return samples_; }

 private:
  std::vector<SpacePoint> samples_;
  std::vector<GeodesicPath> segs_;
  std::vector<double> cum_;
};

enum class FanStatus { completed, hit_ultconj, continuity_break };

const char* to_string(FanStatus s);

// Family of geodesics from C(0) to C(s), unfolded by greedy continuation.
struct Fan {
  std::vector<double> s_params;      // arclength parameters reached
  std::vector<GeodesicPath> sigmas;  // sigma_s per sample; sigma_0 trivial
  FanStatus status = FanStatus::completed;
  double limsup_length = 0;  // largest accepted length (hit_ultconj)
  double break_s = -1;       // parameter where continuity broke
  double step = 0;           // the base step used
  double base_length = 0;    // L(C)
};

// Unfolds the fan of C: at each step the next geodesic is the enumerated
// candidate closest to its predecessor in d_Gamma, subject to the
// continuity budget; the step is halved up to 8 times on failure.
// Candidate lengths are capped at ult_bound; when no candidate below the
// cap fits the budget and the lengths have climbed near the cap, the fan
// terminates hit_ultconj with the limsup recorded.
// continuity_budget <= 0 selects 6 * step; step <= 0 selects L(C)/32.
Fan build_fan(const ChartComplex& X, const PolyCurve& C, double ult_bound,
              double continuity_budget = -1, double step = -1);

struct FanLengthCheck {
  bool ok = true;
  double worst_excess = 0;
  double bad_s = -1;
  double tol = 0;
};

// Verifies L(sigma_s) <= L(C([0,s])) + tol_fan on every fan sample.
// tol_fan <= 0 selects 5 * fan.step + 10 * tol_geo.
FanLengthCheck fan_length_check(const PolyCurve& C, const Fan& fan,
                                double tol_fan = -1, double tol_geo = 1e-7);

// The set H_r = { sigma_s(r / L(sigma_s)) } over fan samples with length
// >= r.
struct Band {
  double r = 0;
  std::vector<SpacePoint> points;
};

Band fan_band(const Fan& fan, double r);

// A sampled null homotopy: rows[t] is a closed curve (first sample = last),
// rows[0] a constant point curve, rows back() the target curve.
struct HomotopyGrid {
  std::vector<std::vector<SpacePoint>> rows;
  int T() const { return static_cast<int>(rows.size()) - 1; }
  int S() const { return rows.empty() ? 0 : (int)rows[0].size() - 1; }
};

// Rows obtained by sliding every sample of `loop` toward `center` along the
// in-chart geodesic: row t sits at fraction t/T of the way out. The chart
// must contain the loop and the center (flat charts give the radial
// contraction, sphere charts the rotate-to-pole contraction).
HomotopyGrid contraction_grid(const ChartComplex& X, int chart,
                              const std::vector<Coord>& loop,
                              const Coord& center, int T);

struct SquareFan {
  std::vector<std::vector<GeodesicPath>> sigma;  // [t][s]
  bool ok = true;
  std::string failure;
  double max_row_length = 0;
};

// Geodesics sigma_{s,t} from H(0,0) to H(s,t), built row-by-row; each cell
// continues the candidate closest to its already-assigned neighbors. Fails
// loudly when a row is as long as ult_bound or continuity breaks.
SquareFan build_square_fan(const ChartComplex& X, const HomotopyGrid& H,
                           double ult_bound, double continuity_budget = -1);

enum class HomotopyAuditStatus {
  vacuous_pass,        // trivial base curve
  grid_invalid,        // rows not closed / row 0 not a point / row T != c
  rows_exceed_bound,   // some row length >= 2 * ult_bound: theorem boundary
  bound_violation,     // fans completed and closedness still broke: the
                       // working ult_bound is too high (or H is not a
                       // genuine homotopy of c)
  fan_hit_bound,       // some half-row fan climbed to ult_bound
  closed_throughout    // closedness never broke: H cannot end at a geodesic
};

const char* to_string(HomotopyAuditStatus s);

struct HomotopyAuditReport {
  HomotopyAuditStatus status = HomotopyAuditStatus::vacuous_pass;
  int break_t = -1;          // first row where the fan pair is not closed
  double max_row_length = 0;
  std::string note;
};

// Two-fan audit of a null homotopy H of the closed geodesic c: for each row
// a fan from s=0 forward to 1/2 and one from s=1 backward to 1/2; the pair
// is "closed" when the two middle geodesics agree up to orientation. The
// pair is closed at t=0 and cannot be closed at the geodesic row, so the
// break row is reported and classified against the working ult_bound.
HomotopyAuditReport long_homotopy_audit(const ChartComplex& X,
                                        const GeodesicPath& c,
                                        const HomotopyGrid& H,
                                        double ult_bound,
                                        double tol_geo = 1e-7);

}  // namespace lengthlab

#endif
