#ifndef LENGTHLAB_GEODESIC_HPP
#define LENGTHLAB_GEODESIC_HPP

#include <vector>

#include "lengthlab/charts.hpp"

namespace lengthlab {

// Where a path passes from one leg to the next: a slidable arc crossing
// (arc/param plus the side index used by each flanking leg) or a fixed
// point-gluing crossing.
struct Crossing {
  int arc = -1;
  double param = 0;
  int side_prev = -1, side_next = -1;
  int pgl = -1;
};

// A curve as a chain of within-chart polylines joined at gluing crossings.
// Legs hold chart-local coordinates; every leg has >= 2 points. Parametrized
// proportionally to arclength on [0,1].
class GeodesicPath {
 public:
  const ChartComplex* space = nullptr;
  std::vector<int> leg_chart;
  std::vector<std::vector<Coord>> legs;
  std::vector<Crossing> cross;  // legs.size()-1, or legs.size() when closed
  bool closed = false;

  double length() const;
  SpacePoint start() const;
  SpacePoint end() const;
  SpacePoint eval(double t) const;  // t in [0,1]
  GeodesicPath prefix(double t) const;
  GeodesicPath reversed() const;
  // inserts waypoints so consecutive polyline gaps are <= h
  void densify(double h);
  int num_segments() const;
  bool valid() const;
};

// single-chart geodesic arc a -> b (the chart's canonical one)
GeodesicPath chart_segment(const ChartComplex& X, int chart, const Coord& a,
                           const Coord& b);
// join end of a to start of b (must be the same space point)
GeodesicPath concatenate(const ChartComplex& X, const GeodesicPath& a,
                         const GeodesicPath& b);

struct DistanceResult {
  double d = 0;
  GeodesicPath path;
};

// Exact within charts, eta-accurate (then slide-refined) across gluings.
DistanceResult distance(const ChartComplex& X, const SpacePoint& p,
                        const SpacePoint& q, double tol = 1e-7);

// Birkhoff shortening of a polyline with fixed (or, for closed curves, free)
// endpoints. Consecutive gaps should be < delta_local. Throws on
// non-convergence after max_iter sweeps.
GeodesicPath shorten(const ChartComplex& X, const std::vector<SpacePoint>& poly,
                     bool closed, double tol = 1e-7, int max_iter = 10000);

// In-place shortening of an existing path (endpoints fixed unless closed).
// Returns the final length.
double shorten_path(const ChartComplex& X, GeodesicPath& g, double tol = 1e-7,
                    int max_iter = 10000);

// Local geodesics p -> q of length <= L_max, pairwise d_Gamma >= eps_sep.
// Complete relative to the seeding family: interface sequences up to the hop
// budget plus within-chart multiplicity (great-circle arcs, meridian fans).
std::vector<GeodesicPath> enumerate_geodesics(const ChartComplex& X,
                                              const SpacePoint& p,
                                              const SpacePoint& q, double L_max,
                                              double eps_sep = 1e-6,
                                              int max_hops = 6);

// All extensions of g by `delta` that remain local geodesics, pairwise
// eps_sep-separated. Branch points yield several, chart boundaries none.
std::vector<GeodesicPath> extend_geodesic(const ChartComplex& X,
                                          const GeodesicPath& g, double delta,
                                          double eps_sep = 1e-6);

struct PathMetricSample {
  int m = 0;
  double sup = 0;
  double length_gap = 0;
  double d_gamma() const { return sup + length_gap; }
};

PathMetricSample gamma_distance(const ChartComplex& X, const GeodesicPath& g1,
                                const GeodesicPath& g2, int m = 16);

bool is_minimizing(const ChartComplex& X, const GeodesicPath& g,
                   double tol = 1e-6);
// every subsegment of length <= delta realizes the distance of its endpoints
bool is_locally_minimizing(const ChartComplex& X, const GeodesicPath& g,
                           double delta, double tol = 1e-6);

// Largest delta from a dyadic ladder such that all sampled geodesic segments
// of length <= delta within the space are minimizing. 0 if even the smallest
// rung fails. With a region center, samples are drawn near the center at the
// scale of the rung under test (capped at region_radius), so scale-free
// failures (e.g. cone points) are caught at every rung.
double uniform_minimizing_radius(const ChartComplex& X, double delta_max,
                                 int samples, Rng& rng,
                                 const SpacePoint* center = nullptr,
                                 double region_radius = 0);

}  // namespace lengthlab

#endif
