#ifndef LENGTHLAB_MODEL_SPACE_HPP
#define LENGTHLAB_MODEL_SPACE_HPP

#include <stdexcept>

#include "lengthlab/ext_real.hpp"
#include "lengthlab/vec3.hpp"

namespace lengthlab::model {

// Diameter of the simply connected constant-curvature surface:
// pi/sqrt(kappa) for kappa > 0, infinite otherwise.
ExtReal diameter_bound(double kappa);

// Point of the model surface M^2_kappa.
//   kappa > 0 : vector of norm 1/sqrt(kappa) (sphere of radius 1/sqrt(kappa))
//   kappa = 0 : planar (x, y), z ignored
//   kappa < 0 : upper hyperboloid sheet, ldot(x,x) = 1/kappa, z > 0
struct ModelPoint {
  double kappa = 0;
  Vec3 x;
};

// Chart-constraint residual (unit-norm / hyperboloid equation); 0 when valid.
double chart_residual(const ModelPoint& p);

ModelPoint model_origin(double kappa);

// Intrinsic distance; throws on mismatched curvature tags.
double model_distance(const ModelPoint& a, const ModelPoint& b);

// Unit tangent vector at a pointing toward b (ambient coordinates).
// For coincident points returns zero; for antipodal sphere points picks a
// deterministic orthogonal direction.
Vec3 tangent(const ModelPoint& a, const ModelPoint& b);

// Point at arclength len along the geodesic leaving `base` with unit
// tangent u.
ModelPoint flow(const ModelPoint& base, const Vec3& u, double len);

// Point at arclength len along the minimizing geodesic a -> b.
ModelPoint geodesic_point(const ModelPoint& a, const ModelPoint& b, double len);

// Warping function f_kappa.
double warping(double kappa, double r);

// Arc-chord error alpha_kappa(s, h). The closed forms are exact for
// kappa in {0, 1}; other curvatures use the rescaled analog
// alpha_kappa(s,h) = alpha_sign(sqrt|kappa| s, sqrt|kappa| h)/sqrt|kappa|,
// which is our extrapolation beyond the quoted cases.
double arc_chord_error(double kappa, double s, double h);

struct ModelTriangle {
  double kappa = 0;
  double a = 0, b = 0, c = 0;  // a = d(B,C), b = d(C,A), c = d(A,B)
  ModelPoint A, B, C;
  double angle_A = 0, angle_B = 0, angle_C = 0;
};

// Comparison triangle with the given side lengths, canonically placed
// (A at the model origin, B along the first frame direction, C on the
// positive side). Throws on triangle-inequality violation or perimeter
// >= 2 D_kappa.
ModelTriangle comparison_triangle(double kappa, double a, double b, double c);

// Angle at the vertex between sides of lengths a and b, opposite c.
double comparison_angle(double kappa, double a, double b, double c);

// Distance between comparison points placed at arclengths t1, t2 from the
// corners of sides side1, side2 (side 0 = B->C, 1 = C->A, 2 = A->B).
double comparison_points_distance(const ModelTriangle& tri, int side1,
                                  double t1, int side2, double t2);

// Angle at V between the directions toward P and Q (law of cosines on the
// three pairwise distances). Zero-length sides give angle 0.
double angle_at(const ModelPoint& V, const ModelPoint& P, const ModelPoint& Q);

// Place a point at distances dx from X and dy from Y, on the given side
// (+1 / -1) of the oriented geodesic X -> Y. Used for bridge development.
ModelPoint place_point(const ModelPoint& X, const ModelPoint& Y, double dx,
                       double dy, int side);

}  // namespace lengthlab::model

#endif
