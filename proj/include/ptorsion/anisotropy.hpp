#pragma once

#include "ptorsion/geometry.hpp"

namespace ptorsion {

struct Mat2 {
  double xx = 0.0, xy = 0.0, yx = 0.0, yy = 0.0;

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Mat2 outer(Vec2 a, Vec2 b) { return {a.x * b.x, a.x * b.y, a.y * b.x, a.y * b.y}; }
};

inline Mat2 operator+(const Mat2& a, const Mat2& b) {
  return {a.xx + b.xx, a.xy + b.xy, a.yx + b.yx, a.yy + b.yy};
}
inline Mat2 operator-(const Mat2& a, const Mat2& b) {
  return {a.xx - b.xx, a.xy - b.xy, a.yx - b.yx, a.yy - b.yy};
}
inline Mat2 operator*(double s, const Mat2& a) {
  return {s * a.xx, s * a.xy, s * a.yx, s * a.yy};
}
inline Vec2 operator*(const Mat2& a, Vec2 v) {
  return {a.xx * v.x + a.xy * v.y, a.yx * v.x + a.yy * v.y};
}
inline double quadratic_form(const Mat2& a, Vec2 v) { return dot(v, a * v); }

enum class NormKind { euclidean, ellipse, smoothed_ls };

// Admissible anisotropy: a 1-homogeneous norm, smooth and positive away from
// the origin, whose p-th power is strictly convex for the exponents we solve
// with.  Value, gradient, and Hessian are all analytic.
//
//   euclidean    F(x) = |x|
//   ellipse      F(x) = sqrt(x . A x) with A symmetric positive definite
//   smoothed_ls  F(x) = (sum_i (x_i^2 + delta^2 |x|^2)^(s/2))^(1/s),
//                a C^2 regularization of the l_s norm, s >= 2, delta > 0
class AnisotropicNorm {
public:
  static AnisotropicNorm euclidean();
  static AnisotropicNorm ellipse(const Mat2& A);
  static AnisotropicNorm smoothed_ls(double s, double delta = 1e-3);

  NormKind kind() const { return kind_; }
  const Mat2& ellipse_matrix() const { return A_; }
  double ls_exponent() const { return s_; }
  double ls_delta() const { return delta_; }

  double operator()(Vec2 xi) const;
  // Gradient of F; degree-0 homogeneous.  Raises ZeroArgument at the origin.
  Vec2 gradient(Vec2 xi) const;
  // Hessian of F itself (degree -1 homogeneous, singular along xi).
  Mat2 hessian(Vec2 xi) const;

private:
  AnisotropicNorm(NormKind kind, Mat2 A, double s, double delta)
      : kind_(kind), A_(A), s_(s), delta_(delta) {}
  NormKind kind_;
  Mat2 A_;      // ellipse only
  double s_;    // smoothed_ls only
  double delta_;
};

// Hessian of F^p / p at xi, assembled from the value/gradient/Hessian of F.
Mat2 hessian_norm_power(const AnisotropicNorm& F, double p, Vec2 xi);

// Dual norm F^o(xi) = max over unit v of <xi, v> / F(v), approximated on a
// uniform grid of directions.
double dual_norm(const AnisotropicNorm& F, Vec2 xi, int resolution = 4096);

struct DualData {
  ConvexPolygon wulff_body;  // polygonal approximation of { F^o <= 1 }
  double kappa = 0.0;        // its area
};

// Polygonal Wulff shape of F over `resolution` uniform directions, which is
// exactly the unit ball of the dual norm, together with its area.
DualData dual_and_wulff(const AnisotropicNorm& F, int resolution = 4096);

}  // namespace ptorsion
