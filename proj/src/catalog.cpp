#include "lengthlab/catalog.hpp"

#include <cmath>
#include <stdexcept>

namespace lengthlab::catalog {

namespace {

double get(const std::map<std::string, double>& p, const std::string& key,
           double dflt) {
  auto it = p.find(key);
  return it == p.end() ? dflt : it->second;
}

std::unique_ptr<FlatChart> square_chart(double side) {
  return std::make_unique<FlatChart>(
      std::vector<Vec3>{{0, 0, 0}, {side, 0, 0}, {side, side, 0}, {0, side, 0}});
}

}  // namespace

SpacePtr build_line_pile(int J, bool with_unit_segment) {
  if (J < 1) throw std::invalid_argument("line pile needs J >= 1");
  auto sp = std::make_shared<ChartComplex>();
  sp->name = "line_pile";
  PointGluing p, q;
  for (int j = 1; j <= J; ++j) {
    double len = 1.0 + 1.0 / j;
    sp->charts.push_back(std::make_unique<SegmentChart>(len));
    int id = static_cast<int>(sp->charts.size()) - 1;
    p.reps.push_back({id, {0, 0, 0}});
    q.reps.push_back({id, {len, 0, 0}});
  }
  double shortest_cycle = J >= 2 ? (1.0 + 1.0 / 1) + (1.0 + 1.0 / 2) : 1e300;
  if (with_unit_segment) {
    sp->charts.push_back(std::make_unique<SegmentChart>(1.0));
    int id = static_cast<int>(sp->charts.size()) - 1;
    p.reps.push_back({id, {0, 0, 0}});
    q.reps.push_back({id, {1, 0, 0}});
    shortest_cycle = std::min(shortest_cycle, 1.0 + 2.0);
  }
  sp->points.push_back(p);
  sp->points.push_back(q);
  sp->delta_witness = J >= 2 || with_unit_segment ? 0.45 * shortest_cycle : 1.8;
  sp->cba_kappa = 0;  // metric graph: locally a tree
  sp->finalize();
  return sp;
}

SpacePtr build_pinned_sector(double lune_angle, double segment_length) {
  if (lune_angle <= 0 || lune_angle > M_PI)
    throw std::invalid_argument("lune angle must lie in (0, pi]");
  auto sp = std::make_shared<ChartComplex>();
  sp->name = lune_angle == M_PI ? "pinned_hemisphere" : "pinned_sector";
  std::vector<Vec3> normals{{0, 1, 0}};
  if (lune_angle < M_PI)
    normals.push_back({std::sin(lune_angle), -std::cos(lune_angle), 0});
  sp->charts.push_back(std::make_unique<SphereChart>(normals));
  sp->charts.push_back(std::make_unique<SegmentChart>(segment_length));
  sp->charts.push_back(std::make_unique<SegmentChart>(segment_length));
  sp->points.push_back({{{0, {0, 0, 1}}, {1, {0, 0, 0}}}});
  sp->points.push_back({{{0, {0, 0, -1}}, {2, {0, 0, 0}}}});
  sp->delta_witness = 0.9 * M_PI;
  sp->cba_kappa = 1;
  sp->finalize();
  return sp;
}

SpacePtr build_pinned_hemisphere(double segment_length) {
  return build_pinned_sector(M_PI, segment_length);
}

SpacePtr build_rationally_attached_line(int depth, double window) {
  if (depth < 1 || window <= 0)
    throw std::invalid_argument("need depth >= 1 and window > 0");
  auto sp = std::make_shared<ChartComplex>();
  sp->name = "rational_line";
  sp->charts.push_back(std::make_unique<SegmentChart>(window));
  for (int k = 1; k <= depth; ++k) {
    sp->charts.push_back(std::make_unique<SegmentChart>(window));
    for (int m = 0; m * 1.0 / k <= window + 1e-12; ++m) {
      double t = std::min(window, m * 1.0 / k);
      sp->points.push_back({{{0, {t, 0, 0}}, {k, {t, 0, 0}}}});
    }
  }
  sp->delta_witness = 0.45 / depth;
  sp->cba_kappa = 0;
  sp->finalize();
  return sp;
}

SpacePtr build_circle_with_chord(double r0, double chord) {
  if (r0 <= 0 || r0 >= 2 * M_PI || chord <= 0)
    throw std::invalid_argument("need 0 < r0 < 2 pi and chord > 0");
  auto sp = std::make_shared<ChartComplex>();
  sp->name = "circle_with_chord";
  sp->charts.push_back(std::make_unique<SegmentChart>(r0));
  sp->charts.push_back(std::make_unique<SegmentChart>(2 * M_PI - r0));
  sp->charts.push_back(std::make_unique<SegmentChart>(chord));
  sp->points.push_back({{{0, {0, 0, 0}}, {1, {0, 0, 0}}, {2, {0, 0, 0}}}});
  sp->points.push_back(
      {{{0, {r0, 0, 0}}, {1, {2 * M_PI - r0, 0, 0}}, {2, {chord, 0, 0}}}});
  double cyc = std::min({2 * M_PI, r0 + chord, 2 * M_PI - r0 + chord});
  sp->delta_witness = 0.45 * cyc;
  sp->cba_kappa = 0;
  sp->finalize();
  return sp;
}

SpacePtr build_tetra_bisphere() {
  auto sp = std::make_shared<ChartComplex>();
  sp->name = "tetra_bisphere";
  sp->charts.push_back(std::make_unique<SphereChart>());
  sp->charts.push_back(std::make_unique<SphereChart>());
  const double s = 1.0 / std::sqrt(3.0);
  const Vec3 verts[4] = {
      {s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};
  for (auto& v : verts) sp->points.push_back({{{0, v}, {1, v}}});
  sp->delta_witness = 1.2;  // < 2/3 of the inter-vertex distance acos(-1/3)
  sp->cba_kappa = 1;
  sp->finalize();
  return sp;
}

SpacePtr build_triple_hemisphere() {
  auto sp = std::make_shared<ChartComplex>();
  sp->name = "triple_hemisphere";
  for (int i = 0; i < 3; ++i)
    sp->charts.push_back(
        std::make_unique<SphereChart>(std::vector<Vec3>{{0, 0, 1}}));
  // the common equator, as two half arcs so each side has a via point
  ArcGluing front, back;
  for (int i = 0; i < 3; ++i) {
    front.sides.push_back({i, {1, 0, 0}, {0, 1, 0}, {-1, 0, 0}});
    back.sides.push_back({i, {-1, 0, 0}, {0, -1, 0}, {1, 0, 0}});
  }
  sp->arcs.push_back(front);
  sp->arcs.push_back(back);
  sp->delta_witness = 0.45 * M_PI;
  sp->cba_kappa = 1;
  sp->finalize();
  return sp;
}

SpacePtr build_flat_disk(double radius) {
  auto sp = std::make_shared<ChartComplex>();
  sp->name = "flat_disk";
  sp->charts.push_back(std::make_unique<FlatChart>(radius));
  sp->delta_witness = 2 * radius;
  sp->cba_kappa = 0;
  sp->finalize();
  return sp;
}

SpacePtr build_cube_surface(double edge) {
  auto sp = std::make_shared<ChartComplex>();
  sp->name = "cube";
  struct Face {
    Vec3 O, U, V;
  };
  const double e = edge;
  const Face faces[6] = {
      {{0, 0, e}, {1, 0, 0}, {0, 1, 0}},  // top
      {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}},  // bottom
      {{e, 0, 0}, {0, 1, 0}, {0, 0, 1}},  // +x
      {{0, 0, 0}, {0, 1, 0}, {0, 0, 1}},  // -x
      {{0, e, 0}, {1, 0, 0}, {0, 0, 1}},  // +y
      {{0, 0, 0}, {1, 0, 0}, {0, 0, 1}},  // -y
  };
  auto embed = [&](const Face& f, const Coord& c) {
    return f.O + f.U * c.x + f.V * c.y;
  };
  auto pull = [&](const Face& f, const Vec3& p) -> Coord {
    Vec3 d = p - f.O;
    return {d.dot(f.U), d.dot(f.V), 0};
  };
  for (int i = 0; i < 6; ++i) sp->charts.push_back(square_chart(e));
  for (int f = 0; f < 6; ++f) {
    for (int g = f + 1; g < 6; ++g) {
      // shared 3-d corners of the two squares
      std::vector<Vec3> shared;
      const Coord corners[4] = {{0, 0, 0}, {e, 0, 0}, {e, e, 0}, {0, e, 0}};
      for (auto& cf : corners) {
        Vec3 pf = embed(faces[f], cf);
        for (auto& cg : corners)
          if ((pf - embed(faces[g], cg)).norm() < 1e-9) shared.push_back(pf);
      }
      if (shared.size() != 2) continue;
      Vec3 mid = (shared[0] + shared[1]) * 0.5;
      ArcGluing ag;
      ag.sides.push_back(
          {f, pull(faces[f], shared[0]), pull(faces[f], mid),
           pull(faces[f], shared[1])});
      ag.sides.push_back(
          {g, pull(faces[g], shared[0]), pull(faces[g], mid),
           pull(faces[g], shared[1])});
      sp->arcs.push_back(ag);
    }
  }
  sp->delta_witness = 0;  // no uniform witness: cut points shrink near corners
  sp->finalize();
  return sp;
}

SpacePtr build_flat_torus(double side) {
  auto sp = std::make_shared<ChartComplex>();
  sp->name = "flat_torus";
  sp->charts.push_back(square_chart(side));
  double s = side;
  ArcGluing lr, bt;
  lr.sides.push_back({0, {0, 0, 0}, {0, s / 2, 0}, {0, s, 0}});
  lr.sides.push_back({0, {s, 0, 0}, {s, s / 2, 0}, {s, s, 0}});
  bt.sides.push_back({0, {0, 0, 0}, {s / 2, 0, 0}, {s, 0, 0}});
  bt.sides.push_back({0, {0, s, 0}, {s / 2, s, 0}, {s, s, 0}});
  sp->arcs.push_back(lr);
  sp->arcs.push_back(bt);
  sp->delta_witness = 0.45 * side;  // systole is `side`
  sp->cba_kappa = 0;
  sp->finalize();
  return sp;
}

SpacePtr build_cylinder_line(int J, double window) {
  if (J < 1 || window <= 0)
    throw std::invalid_argument("need J >= 1 and window > 0");
  auto sp = std::make_shared<ChartComplex>();
  sp->name = "cylinder_line";
  double H = 2 * window;
  sp->charts.push_back(std::make_unique<SegmentChart>(H));
  for (int j = 1; j <= J; ++j) {
    double c = 2 * M_PI / j;
    sp->charts.push_back(std::make_unique<FlatChart>(std::vector<Vec3>{
        {0, 0, 0}, {c, 0, 0}, {c, H, 0}, {0, H, 0}}));
    ArcGluing seam;  // left edge = right edge = the common line
    seam.sides.push_back({j, {0, 0, 0}, {0, H / 2, 0}, {0, H, 0}});
    seam.sides.push_back({j, {c, 0, 0}, {c, H / 2, 0}, {c, H, 0}});
    seam.sides.push_back({0, {0, 0, 0}, {H / 2, 0, 0}, {H, 0, 0}});
    sp->arcs.push_back(seam);
  }
  sp->delta_witness = 0.9 * M_PI / J;  // half the smallest circumference
  sp->cba_kappa = 0;
  sp->finalize();
  return sp;
}

SpacePtr build_unit_sphere() {
  auto sp = std::make_shared<ChartComplex>();
  sp->name = "sphere";
  sp->charts.push_back(std::make_unique<SphereChart>());
  sp->delta_witness = 0.9 * M_PI;
  sp->cba_kappa = 1;
  sp->finalize();
  return sp;
}

SpacePtr build_flat_plane(double half_width) {
  auto sp = std::make_shared<ChartComplex>();
  sp->name = "flat_plane";
  double a = half_width;
  sp->charts.push_back(std::make_unique<FlatChart>(
      std::vector<Vec3>{{-a, -a, 0}, {a, -a, 0}, {a, a, 0}, {-a, a, 0}}));
  sp->delta_witness = 2 * a * std::sqrt(2.0);
  sp->cba_kappa = 0;
  sp->finalize();
  return sp;
}

SpacePtr build_by_name(const std::string& name,
                       const std::map<std::string, double>& p) {
  if (name == "line_pile")
    return build_line_pile(static_cast<int>(get(p, "J", 3)),
                           get(p, "unit", 0) != 0);
  if (name == "pinned_sector")
    return build_pinned_sector(get(p, "angle", M_PI / 3), get(p, "seg", 1.0));
  if (name == "pinned_hemisphere")
    return build_pinned_hemisphere(get(p, "seg", 1.0));
  if (name == "rational_line")
    return build_rationally_attached_line(static_cast<int>(get(p, "depth", 3)),
                                          get(p, "window", 2.0));
  if (name == "circle_with_chord" || name == "circle_chord")
    return build_circle_with_chord(get(p, "r0", 1.0), get(p, "chord", 1.0));
  if (name == "tetra_bisphere") return build_tetra_bisphere();
  if (name == "triple_hemisphere") return build_triple_hemisphere();
  if (name == "flat_disk") return build_flat_disk(get(p, "radius", 1.0));
  if (name == "cube") return build_cube_surface(get(p, "edge", 1.0));
  if (name == "flat_torus") return build_flat_torus(get(p, "side", 1.0));
  if (name == "cylinder_line")
    return build_cylinder_line(static_cast<int>(get(p, "J", 2)),
                               get(p, "window", 3.0));
  if (name == "sphere") return build_unit_sphere();
  if (name == "flat_plane") return build_flat_plane(get(p, "half", 2.0));
  throw std::invalid_argument("unknown catalog space: " + name);
}

}  // namespace lengthlab::catalog
