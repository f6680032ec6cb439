#ifndef LENGTHLAB_CONJUGACY_HPP
#define LENGTHLAB_CONJUGACY_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lengthlab/ext_real.hpp"
#include "lengthlab/geodesic.hpp"

namespace lengthlab {

// Finite realization of the shrinking sequences p_i, q_i: perturbation radii
// r_1 > ... > r_K with per-level d_Gamma closeness thresholds tau_k.
struct ShrinkSchedule {
  std::vector<double> radii;
  std::vector<double> taus;
  int n = 32;  // perturbations tried per level
  std::uint64_t seed = 1234;

  int levels() const { return static_cast<int>(radii.size()); }
  // K levels, r_k = r1 * 4^(1-k), tau_k = tau1 * 4^(1-k)
  static ShrinkSchedule standard(double r1, double tau1 = 0, int K = 4,
                                 int n = 32);
  std::uint64_t hash() const;
};

enum class VerdictKind {
  none,
  one_sided,
  symmetric,
  unreachable,
  ultimate,
  inconclusive
};

const char* to_string(VerdictKind k);

struct LevelWitness {
  int level = 0;
  SpacePoint p_k, q_k;
  GeodesicPath sigma, gamma;  // the close pair (empty for unreachable levels)
  double d_sigma = 0, d_gamma = 0;
};

struct ConjugacyVerdict {
  VerdictKind kind = VerdictKind::none;
  VerdictKind sub_kind = VerdictKind::none;  // set for ultimate
  std::vector<LevelWitness> witnesses;
  int levels_completed = 0;
  bool enumeration_caveat = false;  // unreachable rests on enumeration
  std::string note;
  bool positive() const {
    return kind != VerdictKind::none && kind != VerdictKind::inconclusive;
  }
};

ConjugacyVerdict detect_one_sided(const ChartComplex& X, const GeodesicPath& g,
                                  const ShrinkSchedule& s);
ConjugacyVerdict detect_symmetric(const ChartComplex& X, const GeodesicPath& g,
                                  const ShrinkSchedule& s);
ConjugacyVerdict detect_unreachable(const ChartComplex& X,
                                    const GeodesicPath& g,
                                    const ShrinkSchedule& s);
ConjugacyVerdict detect_ultimate(const ChartComplex& X, const GeodesicPath& g,
                                 const ShrinkSchedule& s);

// Sampled continuous family of geodesics around gamma, assigned in spiral
// order from the center so continuity is enforced greedily.
struct FamilyGrid {
  std::vector<SpacePoint> U, V;  // U[0] = gamma(0), V[0] = gamma(1)
  std::vector<std::vector<GeodesicPath>> F;  // indexed [u][v]
  std::vector<std::vector<bool>> assigned;
  bool ok = true;
  std::string failure;
  double omega = 0;  // observed modulus of continuity
};

FamilyGrid build_family(const ChartComplex& X, const GeodesicPath& gamma,
                        double radius_U, double radius_V, int grid_n);

bool family_uniqueness_check(const ChartComplex& X, const GeodesicPath& gamma,
                             const FamilyGrid& F1, const FamilyGrid& F2,
                             double tau);

// Constants for the iterative family extension; T0 must satisfy
// sin(T0/6)/sin(2 T0/6) < 3/4 and cos(T0/6) + sin(T0/6)/sin(T0) < 15/12.
struct ABConfig {
  double T = 0, T0 = 0;
  double eps1 = 0.05, d1 = 0.04, d2 = 0.03, d3 = 0.02, d4 = 0.01;
  double h = 0.01;
  double ratio_bound = 45.0 / 48;
  double slack = 0.02;
  bool constants_ok() const;
};

using GeodesicSelector =
    std::function<GeodesicPath(const SpacePoint&, const SpacePoint&)>;

struct ABResult {
  GeodesicPath limit;
  std::vector<double> ratios;  // observed contraction ratios
  bool converged = false;
  int iterations = 0;
  std::string note;
};

// Iterative extension: sigma_k minimizing w -> y_{k-1}, x_k its midpoint,
// gamma_k = family(u, x_k), y_k at T0/6 before gamma_k's end; stops when the
// y displacement drops below tol. `family` defaults to the enumerated
// geodesic closest to the previous gamma_k in d_Gamma.
ABResult extend_family_AB(const ChartComplex& X, const GeodesicPath& gamma,
                          const ABConfig& cfg, const SpacePoint& u,
                          const SpacePoint& w,
                          const GeodesicSelector& family = nullptr,
                          double tol = 1e-7);

// Smallest length r <= L_max at which some sampled geodesic from p carries an
// ultimate verdict; infinite when none is found up to L_max.
ExtReal ult_conj_radius(const ChartComplex& X, const SpacePoint& p,
                        double L_max, const ShrinkSchedule& s, int n_dirs = 8);

// inf over sampled base points
ExtReal ult_conj_radius_space(const ChartComplex& X, double L_max,
                              const ShrinkSchedule& s, int n_points, Rng& rng);

}  // namespace lengthlab

#endif
