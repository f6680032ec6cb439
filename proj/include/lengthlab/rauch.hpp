#ifndef LENGTHLAB_RAUCH_HPP
#define LENGTHLAB_RAUCH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "lengthlab/conjugacy.hpp"
#include "lengthlab/geodesic.hpp"
#include "lengthlab/model_space.hpp"

namespace lengthlab {

// A quadrilateral with a diagonal between corresponding subsegments of two
// geodesics: sides S = L(sigma seg), T = L(gamma seg), transverse sides
// A = d(gamma(t_j), sigma(s_j)), B = d(gamma(t_{j+1}), sigma(s_{j+1})),
// diagonal D = d(gamma(t_j), sigma(s_{j+1})).
struct Strut {
  double S = 0, T = 0, A = 0, B = 0, D = 0;
  int chart = -1;  // common chart certifying the CAT(kappa) neighborhood,
                   // or -1 when covered by the space's declared certificate
};

// A partitioned chain of struts between two geodesics. Partitions are in
// curve parameter space [0,1]; both decks are parametrized proportionally to
// arclength, so equal parameter steps are equal arclength steps per deck.
struct Bridge {
  const ChartComplex* space = nullptr;
  GeodesicPath gamma, sigma;
  double kappa = 0;
  std::vector<double> ts, ss;  // N+1 partition parameters each
  std::vector<Strut> struts;   // N
  double length = 0;  // max of the two deck lengths
  double height = 0;  // max transverse extent over all struts
  int N() const { return static_cast<int>(struts.size()); }
};

// Equal-arclength partition into N struts. Every strut must fit a CAT(kappa)
// neighborhood: either all four corners share a chart of curvature <= kappa,
// or the space declares a CBA(kappa') certificate with kappa' <= kappa and
// the strut is small against the declared uniformly minimizing scale.
// Throws when a strut escapes every certified neighborhood (use a larger N)
// or when a comparison strut would not be unique (S+A+D or T+B+D >= D_kappa).
Bridge build_bridge(const ChartComplex& X, const GeodesicPath& gamma,
                    const GeodesicPath& sigma, int N, double kappa);

// Same, with explicit partition parameters (sorted, first 0, last 1) so
// audit radii can be aligned exactly with partition points.
Bridge build_bridge_at(const ChartComplex& X, const GeodesicPath& gamma,
                       const GeodesicPath& sigma, std::vector<double> params,
                       double kappa);

// The bridge developed into M^2_kappa: piecewise-geodesic decks built strut
// by strut from the common start, preserving all strut side lengths.
struct ComparisonBridge {
  double kappa = 0;
  std::vector<model::ModelPoint> deck_gamma, deck_sigma;  // N+1 each
  // Interior-angle sums of the three developed triangles meeting at each
  // interior partition point (index 1..N-1 of the corresponding deck).
  std::vector<double> angle_sum_gamma, angle_sum_sigma;
  double max_side_error = 0;  // worst |developed side - original side|
};

ComparisonBridge develop_comparison_bridge(const Bridge& b, double kappa);

// kappa = 1 context: a bridge of length L and height h has its comparison
// bridge inside a hemisphere iff L < pi and h <= (pi - L)/4.
bool hemisphere_check(double L, double h);

struct RelRauchRecord {
  double lhs = 0, rhs = 0;
  bool holds = false;
  double r = 0, R = 0;  // the partition-aligned radii actually used
  double h = 0;
  double sup_ratio = 0;  // sup over rbar of f(rbar)/f(R-r+rbar), no h terms
  std::string note;
};

// Audits the transverse-growth inequality on a bridge with common start:
// lhs = (transverse distance at arclength r) / (transverse distance at R),
// rhs = sup over rbar in [r-h, r] of
//       (1 + 4h/D_kappa) f_kappa(rbar)/f_kappa(R-r+rbar)
//       + (4h + alpha_kappa(R-r+rbar, h))/D_kappa.
// r and R are snapped to the nearest partition points, which must lie
// within h (throws otherwise); windows r in (4h, L), R in (r+4h, L-4h) and
// the hemisphere precondition for kappa > 0 are enforced.
RelRauchRecord rel_rauch_audit(const Bridge& b, double r, double R,
                               double kappa, double tol = 1e-6);

struct ComparisonTestResult {
  bool certified = true;
  int n_checked = 0;
  double worst_violation = 0;  // largest observed excess over the bound
  std::string counterexample;  // description of the first violation
};

// Samples triangles inside single 2-d charts and checks that intra-chart
// distances never exceed the corresponding comparison-point distances in
// M^2_kappa. Returns the first counterexample when the chart geometry is
// not curvature-bounded above by kappa.
ComparisonTestResult cat_triangle_test(const ChartComplex& X, double kappa,
                                       int n_triangles, int n_point_pairs,
                                       std::uint64_t seed = 1234,
                                       double tol = 1e-7);

// Samples small triangles (p, q, r) in the space and checks that the
// comparison angle at p is nondecreasing as x -> q, y -> r grow along the
// sides (equivalently: nonincreasing under shrinking toward p).
ComparisonTestResult angle_comparison_test(const ChartComplex& X, double kappa,
                                           int n_samples,
                                           std::uint64_t seed = 1234,
                                           double tol = 1e-7);

struct RauchAuditReport {
  int n_tested = 0;
  int n_symmetric = 0;      // violations of the conjugate-length bound
  int n_inconclusive = 0;   // quarantined detections
  std::vector<std::string> notes;
};

// On a space certified curvature-bounded-above by kappa, no geodesic shorter
// than D_kappa can have symmetric conjugate endpoints. Samples n geodesics
// of length <= 0.9 D_kappa (or <= horizon when D_kappa is infinite) and
// runs the symmetric detector on each; any symmetric verdict is reported as
// a violation.
RauchAuditReport rauch_conjugate_bound_audit(const ChartComplex& X,
                                             double kappa,
                                             const ShrinkSchedule& s,
                                             int n_geodesics,
                                             double horizon = 3.0,
                                             std::uint64_t seed = 1234);

}  // namespace lengthlab

#endif
