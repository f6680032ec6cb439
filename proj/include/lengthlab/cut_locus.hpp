#ifndef LENGTHLAB_CUT_LOCUS_HPP
#define LENGTHLAB_CUT_LOCUS_HPP

#include <string>
#include <vector>

#include "lengthlab/conjugacy.hpp"
#include "lengthlab/ext_real.hpp"
#include "lengthlab/geodesic.hpp"

namespace lengthlab {

// A sampled cut/conjugate point of the base point, with its witnesses.
struct CutPoint {
  SpacePoint q;
  double dist = 0;  // d(p, q)
  std::vector<GeodesicPath> minimizers;  // >= 2 for genuine cut points
  bool first = false;      // >= 2 equal-length minimizers at distance dist
  bool minimal = false;    // every sampled extension past q stops minimizing
  bool symmetric = false;  // symmetric conjugacy verdict along the minimizer
  bool ultimate = false;   // ultimate conjugacy verdict along the minimizer
  GeodesicPath geodesic;   // the minimizing geodesic p -> q that found it
  GeodesicPath extension;  // MinCut witness: extension that stops minimizing
  bool extensible = false;
};

struct CutReport {
  SpacePoint p;
  double horizon = 0;
  std::vector<CutPoint> cuts;
  std::string note;
};

// The radii at a base point, all computed from one scan at one horizon.
struct RadiusReport {
  SpacePoint p;
  double horizon = 0;
  ExtReal first_inj, unique_inj, min_rad, sym_inj, ult_inj, ult_conj;
  std::uint64_t schedule_hash = 0;
  std::string caveats;
  CutReport cuts;  // the annotated scan behind the radii
};

// Scan of geodesics emanating from p: every point where some geodesic first
// stops minimizing, or where a non-extensible geodesic ends with multiple
// minimizers. Flags are filled for first/minimal membership only.
CutReport find_cut_points(const ChartComplex& X, const SpacePoint& p,
                          double L_max, int n_dirs = 8);

// find_cut_points restricted to members whose extensions all stop minimizing
CutReport min_cut(const ChartComplex& X, const SpacePoint& p, double L_max,
                  int n_dirs = 8);
ExtReal min_rad(const ChartComplex& X, const SpacePoint& p, double L_max,
                int n_dirs = 8);

// Global: largest r (dyadic + bisection, against `horizon`) such that all
// sampled pairs at distance <= r have a single geodesic realizing the
// distance up to a relative near-tie margin.
ExtReal unique_inj(const ChartComplex& X, int sample_n, double horizon,
                   Rng& rng);

// Cut points plus symmetric (resp. ultimate) conjugate points along the
// scanned minimizing geodesics.
CutReport sym_cut(const ChartComplex& X, const SpacePoint& p, double L_max,
                  const ShrinkSchedule& s, int n_dirs = 8);
CutReport ult_cut(const ChartComplex& X, const SpacePoint& p, double L_max,
                  const ShrinkSchedule& s, int n_dirs = 8);
ExtReal sym_inj(const ChartComplex& X, const SpacePoint& p, double L_max,
                const ShrinkSchedule& s, int n_dirs = 8);
ExtReal ult_inj(const ChartComplex& X, const SpacePoint& p, double L_max,
                const ShrinkSchedule& s, int n_dirs = 8);

// One scan, all radii.
RadiusReport radius_report(const ChartComplex& X, const SpacePoint& p,
                           double L_max, const ShrinkSchedule& s,
                           int n_dirs = 8);

double default_tol_rad(const ChartComplex& X, double tol_geo = 1e-7);

struct ChainCheck {
  bool ok = true;
  std::vector<std::string> violations;
};

// first = unique = sym <= min_rad, ult <= sym, ult = min(ult_conj, unique),
// all within tol_rad; plus: every minimal member has a sym member nearby.
ChainCheck check_radius_chain(const ChartComplex& X, const RadiusReport& r,
                              double tol_rad = -1);

struct KlingenbergResult {
  bool ultimate_branch = false;
  SpacePoint p, q;
  GeodesicPath geodesic;  // minimizing p -> q (ultimate branch)
  GeodesicPath loop;      // closed geodesic (loop branch)
  double min_rad = 0;
  bool caveat = false;
  std::string note;
};

// Finds the pair realizing the minimal injectivity radius over sampled base
// points; returns the ultimate pair when the minimizer carries an ultimate
// verdict, otherwise the closed geodesic of length 2 * min_rad obtained by
// shortening the two minimizers as a loop.
KlingenbergResult klingenberg_search(const ChartComplex& X, double L_max,
                                     const ShrinkSchedule& s, int n_base = 8,
                                     std::uint64_t seed = 1234);

}  // namespace lengthlab

#endif
