#ifndef LENGTHLAB_VEC3_HPP
#define LENGTHLAB_VEC3_HPP

#include <cmath>

namespace lengthlab {

struct Vec3 {
  double x = 0, y = 0, z = 0;

  Vec3() = default;
  Vec3(double x_, double y_, double z_ = 0) : x(x_), y(y_), z(z_) {}

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3 operator-() const { return {-x, -y, -z}; }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 normalized() const {
    double n = norm();
    return n > 0 ? *this / n : Vec3{0, 0, 0};
  }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// Minkowski form with signature (+,+,-), used for the hyperboloid model.
inline double ldot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y - a.z * b.z;
}

// Lorentz cross product: for spacelike a, b this gives the vector
// L-orthogonal to both.
inline Vec3 lcross(const Vec3& a, const Vec3& b) {
  Vec3 c = a.cross(b);
  return {c.x, c.y, -c.z};
}

}  // namespace lengthlab

#endif
