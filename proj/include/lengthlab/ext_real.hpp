#ifndef LENGTHLAB_EXT_REAL_HPP
#define LENGTHLAB_EXT_REAL_HPP

#include <cmath>
#include <limits>
#include <string>

namespace lengthlab {

// Extended nonnegative real with a dedicated infinity, used for radii and
// diameter bounds. Infinity is a flag, never a large float, so arithmetic
// and comparisons stay exact.
class ExtReal {
 public:
  ExtReal() : v_(0), inf_(false) {}
  explicit ExtReal(double v) : v_(v), inf_(false) {}
  static ExtReal infinity() {
    ExtReal e;
    e.inf_ = true;
    e.v_ = std::numeric_limits<double>::infinity();
    return e;
  }

  bool is_inf() const { return inf_; }
  // Only valid when finite.
  double value() const { return v_; }

  bool operator<(const ExtReal& o) const {
    if (inf_) return false;
    if (o.inf_) return true;
    return v_ < o.v_;
  }
  bool operator<=(const ExtReal& o) const { return !(o < *this); }
  bool operator>(const ExtReal& o) const { return o < *this; }
  bool operator>=(const ExtReal& o) const { return !(*this < o); }

  ExtReal min(const ExtReal& o) const { return *this <= o ? *this : o; }

  // |a - b| treating inf-inf as 0 and inf-finite as inf.
  ExtReal gap(const ExtReal& o) const {
    if (inf_ && o.inf_) return ExtReal(0);
    if (inf_ || o.inf_) return infinity();
    return ExtReal(std::fabs(v_ - o.v_));
  }

  // Equality within tol; two infinities are equal.
  bool approx(const ExtReal& o, double tol) const {
    if (inf_ && o.inf_) return true;
    if (inf_ || o.inf_) return false;
    return std::fabs(v_ - o.v_) <= tol;
  }

  // "le within tol": a <= b + tol with infinities handled.
  bool le(const ExtReal& o, double tol) const {
    if (o.inf_) return true;
    if (inf_) return false;
    return v_ <= o.v_ + tol;
  }

  std::string str() const { return inf_ ? "inf" : std::to_string(v_); }

  // Report string for a radius computed up to a horizon: infinite answers
  // print as ">= horizon".
  std::string str_at_horizon(double horizon) const {
    return inf_ ? (">=" + std::to_string(horizon)) : std::to_string(v_);
  }

 private:
  double v_;
  bool inf_;
};

}  // namespace lengthlab

#endif
