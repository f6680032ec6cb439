#ifndef LENGTHLAB_CHARTS_HPP
#define LENGTHLAB_CHARTS_HPP

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lengthlab/vec3.hpp"

namespace lengthlab {

using Rng = std::mt19937_64;

// Local coordinates within a chart:
//   segment charts:   (t, 0, 0), t in [0, len]
//   flat charts:      (x, y, 0) in the plane
//   sphere charts:    unit vector on S^2
using Coord = Vec3;

// A constant-curvature building block. All catalog charts are convex in
// their model space, so the in-chart distance is the model distance and
// minimizing arcs stay inside.
class Chart {
 public:
  virtual ~Chart() = default;

  virtual int dim() const = 0;
  virtual double curvature() const = 0;
  virtual double diameter() const = 0;
  virtual bool contains(const Coord& c, double tol = 1e-9) const = 0;
  virtual double dist(const Coord& a, const Coord& b) const = 0;

  // Point at arclength `len` along a minimizing geodesic a -> b, chosen
  // inside the chart (ambiguous cases, e.g. antipodal sphere points, are
  // resolved deterministically toward the chart interior).
  virtual Coord point_at(const Coord& a, const Coord& b, double len) const = 0;

  // Straight continuation: point at distance `step` beyond b along the
  // geodesic a -> b. Returns false when it leaves the chart.
  virtual bool extend(const Coord& a, const Coord& b, double step,
                      Coord* out) const;

  // Distinct local geodesics a -> b inside the chart with length <= L_max,
  // pairwise separated; each returned as a sparse list of waypoints
  // (consecutive waypoints closer than the injectivity scale of the model).
  virtual std::vector<std::vector<Coord>> local_geodesics(
      const Coord& a, const Coord& b, double L_max, double sep) const;

  // Points at in-chart distance r around `center` (a direction ring; for
  // 1-d charts at most the two sides). Points outside the chart are omitted.
  virtual std::vector<Coord> ring(const Coord& center, double r,
                                  int n) const = 0;

  virtual Coord sample(Rng& rng) const = 0;
};

class SegmentChart : public Chart {
 public:
  explicit SegmentChart(double length);
  int dim() const override { return 1; }
  double curvature() const override { return 0; }
  double diameter() const override { return length_; }
  double length() const { return length_; }
  bool contains(const Coord& c, double tol = 1e-9) const override;
  double dist(const Coord& a, const Coord& b) const override;
  Coord point_at(const Coord& a, const Coord& b, double len) const override;
  bool extend(const Coord& a, const Coord& b, double step,
              Coord* out) const override;
  std::vector<Coord> ring(const Coord& center, double r, int n) const override;
  Coord sample(Rng& rng) const override;

 private:
  double length_;
};

// Convex planar region: polygon (CCW vertex list) or disk.
class FlatChart : public Chart {
 public:
  // convex polygon
  explicit FlatChart(std::vector<Vec3> polygon);
  // disk of given radius centered at the origin
  explicit FlatChart(double disk_radius);

  int dim() const override { return 2; }
  double curvature() const override { return 0; }
  double diameter() const override { return diameter_; }
  bool contains(const Coord& c, double tol = 1e-9) const override;
  double dist(const Coord& a, const Coord& b) const override;
  Coord point_at(const Coord& a, const Coord& b, double len) const override;
  std::vector<Coord> ring(const Coord& center, double r, int n) const override;
  Coord sample(Rng& rng) const override;

  bool is_disk() const { return disk_radius_ > 0; }
  const std::vector<Vec3>& polygon() const { return poly_; }

 private:
  std::vector<Vec3> poly_;
  double disk_radius_ = 0;
  double diameter_ = 0;
};

// Spherically convex region of the unit sphere: intersection of closed
// hemispheres {u : n_i . u >= 0}. No constraints = the full sphere.
class SphereChart : public Chart {
 public:
  explicit SphereChart(std::vector<Vec3> inward_normals = {});

  int dim() const override { return 2; }
  double curvature() const override { return 1; }
  double diameter() const override { return M_PI; }
  bool contains(const Coord& c, double tol = 1e-9) const override;
  double dist(const Coord& a, const Coord& b) const override;
  Coord point_at(const Coord& a, const Coord& b, double len) const override;
  bool extend(const Coord& a, const Coord& b, double step,
              Coord* out) const override;
  std::vector<std::vector<Coord>> local_geodesics(const Coord& a,
                                                  const Coord& b, double L_max,
                                                  double sep) const override;
  std::vector<Coord> ring(const Coord& center, double r, int n) const override;
  Coord sample(Rng& rng) const override;

  const std::vector<Vec3>& normals() const { return normals_; }
  const Vec3& anchor() const { return anchor_; }

 private:
  bool arc_inside(const Coord& a, const Coord& b) const;
  std::vector<Vec3> normals_;
  Vec3 anchor_;  // interior reference used to break antipodal ties
};

// A point of the glued space.
struct SpacePoint {
  int chart = -1;
  Coord c;
};

// One side of a glued arc: the geodesic a -> via -> b inside `chart`,
// parametrized by arclength from a. The via point disambiguates long arcs.
struct ArcSide {
  int chart = -1;
  Coord a, via, b;
};

// Isometric identification of the same-length arcs on every listed side.
struct ArcGluing {
  std::vector<ArcSide> sides;
  double length = 0;  // filled in by finalize()
};

// Identification of single boundary points across charts.
struct PointGluing {
  std::vector<SpacePoint> reps;
};

// A geodesic space assembled from constant-curvature charts glued along
// points and arcs, with an interface net used for cross-chart distances.
class ChartComplex {
 public:
  std::string name;
  std::vector<std::unique_ptr<Chart>> charts;
  std::vector<ArcGluing> arcs;
  std::vector<PointGluing> points;

  double eta = 0;            // interface net spacing (0 = auto)
  double delta_witness = 0;  // declared local-uniform-minimizing witness
  std::optional<double> cba_kappa;  // declared CBA(kappa) certificate

  // Samples the arc nets, builds the interface graph. Must be called after
  // charts/gluings are set and before any query.
  void finalize();

  const Chart& chart(int i) const { return *charts[i]; }
  int num_charts() const { return static_cast<int>(charts.size()); }

  // Point on the given side of an arc at arclength s from its start.
  Coord arc_point(int arc, int side, double s) const;
  // Arclength parameter of the projection of c onto the given arc side, and
  // the projection distance.
  std::pair<double, double> arc_project(int arc, int side,
                                        const Coord& c) const;

  // All (chart, coord) incarnations of p: p itself plus identified copies
  // when p lies on a glued arc or point (within tol).
  std::vector<SpacePoint> presences(const SpacePoint& p,
                                    double tol = 1e-7) const;

  // Coordinates of p in the requested chart, if p (or an identified copy)
  // lies there.
  std::optional<Coord> coord_in(const SpacePoint& p, int chart,
                                double tol = 1e-7) const;

  bool same_point(const SpacePoint& p, const SpacePoint& q,
                  double tol = 1e-9) const;

  // Interface graph --------------------------------------------------------
  struct Node {
    std::vector<SpacePoint> reps;
    int arc = -1;     // source arc (or -1 for point gluings)
    double param = 0;  // arclength parameter on that arc
    int pgl = -1;      // source point gluing index
  };
  const std::vector<Node>& nodes() const { return nodes_; }
  struct Edge {
    int to;
    int chart;
    double w;
  };
  const std::vector<std::vector<Edge>>& adjacency() const { return adj_; }

  // Random point of the complex (area-weighted over charts, roughly).
  SpacePoint sample_point(Rng& rng) const;

  double min_chart_diameter() const;

 private:
  std::vector<Node> nodes_;
  std::vector<std::vector<Edge>> adj_;
  bool finalized_ = false;
};

}  // namespace lengthlab

#endif
