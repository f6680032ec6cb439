#include "lengthlab/model_space.hpp"

#include <algorithm>
#include <cmath>

namespace lengthlab::model {

namespace {

constexpr double kClampTol = 1e-12;

// Clamp a law-of-cosines argument to [-1,1] when within tolerance; beyond
// tolerance is a genuine domain violation.
double clamp_unit(double v) {
  if (v > 1.0) {
    if (v > 1.0 + kClampTol) throw std::domain_error("cosine argument > 1");
    return 1.0;
  }
  if (v < -1.0) {
    if (v < -1.0 - kClampTol) throw std::domain_error("cosine argument < -1");
    return -1.0;
  }
  return v;
}

double clamp_ge1(double v) {
  if (v < 1.0) {
    if (v < 1.0 - kClampTol) throw std::domain_error("cosh argument < 1");
    return 1.0;
  }
  return v;
}

void check_same_space(const ModelPoint& a, const ModelPoint& b) {
  if (a.kappa != b.kappa)
    throw std::invalid_argument("model points with mismatched curvature");
}

}  // namespace

ExtReal diameter_bound(double kappa) {
  if (kappa > 0) return ExtReal(M_PI / std::sqrt(kappa));
  return ExtReal::infinity();
}

double chart_residual(const ModelPoint& p) {
  if (p.kappa > 0) {
    return std::fabs(p.x.dot(p.x) - 1.0 / p.kappa);
  }
  if (p.kappa < 0) {
    double r = std::fabs(ldot(p.x, p.x) - 1.0 / p.kappa);
    if (p.x.z <= 0) r += 1.0;  // wrong sheet
    return r;
  }
  return std::fabs(p.x.z);
}

ModelPoint model_origin(double kappa) {
  if (kappa == 0) return {kappa, {0, 0, 0}};
  double s = std::sqrt(std::fabs(kappa));
  return {kappa, {0, 0, 1.0 / s}};
}

double model_distance(const ModelPoint& a, const ModelPoint& b) {
  check_same_space(a, b);
  double k = a.kappa;
  if (k == 0) return (a.x - b.x).norm();
  double s = std::sqrt(std::fabs(k));
  if (k > 0) {
    // cos(s d) = kappa <a,b>; chord form is exact near 0
    double c = clamp_unit(k * a.x.dot(b.x));
    if (c > -0.5)
      return 2 * std::asin(std::min(1.0, s * (a.x - b.x).norm() / 2)) / s;
    return std::acos(c) / s;
  }
  // cosh(s d) = kappa <a,b>_L; sinh(s d / 2) form is exact near 0
  Vec3 d = a.x - b.x;
  double u = -k * ldot(d, d);  // = 2 cosh(s d) - 2 >= 0
  return 2 * std::asinh(std::sqrt(std::max(0.0, u)) / 2) / s;
}

Vec3 tangent(const ModelPoint& a, const ModelPoint& b) {
  check_same_space(a, b);
  double k = a.kappa;
  if (k == 0) {
    Vec3 d = b.x - a.x;
    return d.normalized();
  }
  double s = std::sqrt(std::fabs(k));
  double d = model_distance(a, b);
  if (k > 0) {
    double sd = std::sin(s * d);
    if (sd < 1e-14) {
      if (d < 1.0 / s) return {0, 0, 0};  // coincident
      // antipodal: pick a deterministic orthogonal direction
      Vec3 n = a.x.normalized();
      Vec3 ref = std::fabs(n.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
      return n.cross(ref).normalized();
    }
    Vec3 u = (b.x - a.x * std::cos(s * d)) * (s / sd);
    return u;
  }
  double sh = std::sinh(s * d);
  if (sh < 1e-14) return {0, 0, 0};
  return (b.x - a.x * std::cosh(s * d)) * (s / sh);
}

ModelPoint flow(const ModelPoint& base, const Vec3& u, double len) {
  double k = base.kappa;
  if (k == 0) return {k, base.x + u * len};
  double s = std::sqrt(std::fabs(k));
  if (k > 0)
    return {k, base.x * std::cos(s * len) + u * (std::sin(s * len) / s)};
  return {k, base.x * std::cosh(s * len) + u * (std::sinh(s * len) / s)};
}

ModelPoint geodesic_point(const ModelPoint& a, const ModelPoint& b,
                          double len) {
  return flow(a, tangent(a, b), len);
}

double warping(double kappa, double r) {
  if (r < 0) throw std::domain_error("warping: negative arclength");
  if (kappa > 0) {
    double s = std::sqrt(kappa);
    if (r >= M_PI / s) throw std::domain_error("warping: r >= D_kappa");
    return std::sin(s * r) / s;
  }
  if (kappa == 0) return r;
  double s = std::sqrt(-kappa);
  return std::sinh(s * r) / s;
}

double arc_chord_error(double kappa, double s, double h) {
  if (h < 0 || h > s) throw std::domain_error("arc_chord_error: need 0<=h<=s");
  if (h == 0) return 0.0;
  if (kappa == 0) {
    return 2.0 * (s - std::sqrt(s * s - h * h));
  }
  double sc = std::sqrt(std::fabs(kappa));
  double ss = sc * s, hh = sc * h;
  if (kappa > 0) {
    double ch = std::cos(hh);
    if (ch <= 0) throw std::domain_error("arc_chord_error: h too large");
    double ratio = clamp_unit(std::cos(ss) / ch);
    return std::fabs(ss - std::acos(ratio)) / sc;
  }
  double ratio = clamp_ge1(std::cosh(ss) / std::cosh(hh));
  return std::fabs(ss - std::acosh(ratio)) / sc;
}

double comparison_angle(double kappa, double a, double b, double c) {
  if (a < 0 || b < 0 || c < 0)
    throw std::domain_error("comparison_angle: negative side");
  if (a == 0 || b == 0) return 0.0;
  if (c > a + b + kClampTol || a > b + c + kClampTol || b > a + c + kClampTol)
    throw std::domain_error("comparison_angle: triangle inequality violated");
  ExtReal Dk = diameter_bound(kappa);
  if (!Dk.is_inf() && a + b + c >= 2 * Dk.value())
    throw std::domain_error("comparison_angle: perimeter >= 2 D_kappa");
  if (kappa == 0) {
    return std::acos(clamp_unit((a * a + b * b - c * c) / (2 * a * b)));
  }
  double s = std::sqrt(std::fabs(kappa));
  if (kappa > 0) {
    double num = std::cos(s * c) - std::cos(s * a) * std::cos(s * b);
    double den = std::sin(s * a) * std::sin(s * b);
    if (den < 1e-300) return 0.0;
    return std::acos(clamp_unit(num / den));
  }
  double num = std::cosh(s * a) * std::cosh(s * b) - std::cosh(s * c);
  double den = std::sinh(s * a) * std::sinh(s * b);
  if (den < 1e-300) return 0.0;
  return std::acos(clamp_unit(num / den));
}

namespace {

// Orthonormal frame (e1, e2) of the tangent plane at the canonical origin.
void origin_frame(double kappa, Vec3* e1, Vec3* e2) {
  *e1 = {1, 0, 0};
  *e2 = {0, 1, 0};
  (void)kappa;
}

// Unit normal to the tangent direction t at point p, within the tangent
// plane, picking the side by sign.
Vec3 perp(const ModelPoint& p, const Vec3& t, int side) {
  double k = p.kappa;
  Vec3 n;
  if (k == 0) {
    n = {-t.y, t.x, 0};
  } else if (k > 0) {
    n = p.x.normalized().cross(t);
  } else {
    double s = std::sqrt(-k);
    n = lcross(p.x * s, t);
    // normalize in the Lorentzian sense (n is spacelike)
    double nn = std::sqrt(std::fabs(ldot(n, n)));
    if (nn > 0) n = n / nn;
  }
  return side >= 0 ? n : -n;
}

}  // namespace

ModelTriangle comparison_triangle(double kappa, double a, double b, double c) {
  if (a < 0 || b < 0 || c < 0)
    throw std::domain_error("comparison_triangle: negative side");
  if (c > a + b + kClampTol || a > b + c + kClampTol || b > a + c + kClampTol)
    throw std::domain_error("comparison_triangle: triangle inequality");
  ExtReal Dk = diameter_bound(kappa);
  if (!Dk.is_inf() && a + b + c >= 2 * Dk.value())
    throw std::domain_error("comparison_triangle: perimeter >= 2 D_kappa");

  ModelTriangle tri;
  tri.kappa = kappa;
  tri.a = a;
  tri.b = b;
  tri.c = c;
  tri.A = model_origin(kappa);
  Vec3 e1, e2;
  origin_frame(kappa, &e1, &e2);
  tri.B = flow(tri.A, e1, c);
  tri.angle_A = comparison_angle(kappa, b, c, a);
  Vec3 dirC = e1 * std::cos(tri.angle_A) + e2 * std::sin(tri.angle_A);
  tri.C = flow(tri.A, dirC, b);
  tri.angle_B = comparison_angle(kappa, a, c, b);
  tri.angle_C = comparison_angle(kappa, a, b, c);
  return tri;
}

double comparison_points_distance(const ModelTriangle& tri, int side1,
                                  double t1, int side2, double t2) {
  auto point_on = [&](int side, double t) -> ModelPoint {
    const ModelPoint* from;
    const ModelPoint* to;
    double len;
    switch (side) {
      case 0: from = &tri.B; to = &tri.C; len = tri.a; break;
      case 1: from = &tri.C; to = &tri.A; len = tri.b; break;
      case 2: from = &tri.A; to = &tri.B; len = tri.c; break;
      default: throw std::invalid_argument("side index must be 0, 1, or 2");
    }
    if (t < -kClampTol || t > len + kClampTol)
      throw std::domain_error("comparison point arclength out of range");
    t = std::clamp(t, 0.0, len);
    if (len == 0) return *from;
    return geodesic_point(*from, *to, t);
  };
  return model_distance(point_on(side1, t1), point_on(side2, t2));
}

double angle_at(const ModelPoint& V, const ModelPoint& P,
                const ModelPoint& Q) {
  double a = model_distance(V, P);
  double b = model_distance(V, Q);
  double c = model_distance(P, Q);
  if (a == 0 || b == 0) return 0.0;
  return comparison_angle(V.kappa, a, b, c);
}

ModelPoint place_point(const ModelPoint& X, const ModelPoint& Y, double dx,
                       double dy, int side) {
  if (dx == 0) return X;
  double dxy = model_distance(X, Y);
  if (dxy == 0) {
    // direction undefined; place along the side normal of an arbitrary frame
    Vec3 e1, e2;
    origin_frame(X.kappa, &e1, &e2);
    return flow(X, e1, dx);
  }
  double theta = comparison_angle(X.kappa, dx, dxy, dy);
  Vec3 t = tangent(X, Y);
  Vec3 n = perp(X, t, side);
  Vec3 dir = t * std::cos(theta) + n * std::sin(theta);
  return flow(X, dir, dx);
}

}  // namespace lengthlab::model
