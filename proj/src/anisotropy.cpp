#include "ptorsion/anisotropy.hpp"

#include <cmath>
#include <numbers>

namespace ptorsion {

AnisotropicNorm AnisotropicNorm::euclidean() {
  return AnisotropicNorm(NormKind::euclidean, Mat2::identity(), 2.0, 0.0);
}

AnisotropicNorm AnisotropicNorm::ellipse(const Mat2& A) {
  const double scale = std::max({std::abs(A.xx), std::abs(A.xy), std::abs(A.yy)});
  if (std::abs(A.xy - A.yx) > 1e-12 * scale)
    throw InvalidArgument("ellipse matrix must be symmetric");
  const double det = A.xx * A.yy - A.xy * A.yx;
  if (!(A.xx > 0.0) || !(det > 0.0))
    throw InvalidArgument("ellipse matrix must be positive definite");
  return AnisotropicNorm(NormKind::ellipse, A, 2.0, 0.0);
}

AnisotropicNorm AnisotropicNorm::smoothed_ls(double s, double delta) {
  if (!(s >= 2.0)) throw InvalidArgument("smoothed-ls exponent must satisfy s >= 2");
  if (!(delta > 0.0)) throw InvalidArgument("smoothed-ls delta must be positive");
  return AnisotropicNorm(NormKind::smoothed_ls, Mat2::identity(), s, delta);
}

namespace {

// Shared intermediates of the smoothed l_s norm: t_i = x_i^2 + delta^2 |x|^2,
// G = sum t_i^(s/2), F = G^(1/s).
struct LsEval {
  double t1, t2, G, F;
};

LsEval ls_eval(Vec2 xi, double s, double delta) {
  const double r2 = norm2(xi);
  const double t1 = xi.x * xi.x + delta * delta * r2;
  const double t2 = xi.y * xi.y + delta * delta * r2;
  const double G = std::pow(t1, 0.5 * s) + std::pow(t2, 0.5 * s);
  return {t1, t2, G, std::pow(G, 1.0 / s)};
}

}  // namespace

double AnisotropicNorm::operator()(Vec2 xi) const {
  switch (kind_) {
    case NormKind::euclidean:
      return norm(xi);
    case NormKind::ellipse:
      return std::sqrt(quadratic_form(A_, xi));
    case NormKind::smoothed_ls:
      if (!(norm2(xi) > 0.0)) return 0.0;
      return ls_eval(xi, s_, delta_).F;
  }
  return 0.0;
}

Vec2 AnisotropicNorm::gradient(Vec2 xi) const {
  if (!(norm2(xi) > 0.0)) throw ZeroArgument("norm gradient undefined at the origin");
  switch (kind_) {
    case NormKind::euclidean:
      return xi / norm(xi);
    case NormKind::ellipse: {
      const Vec2 Ax = A_ * xi;
      return Ax / std::sqrt(dot(xi, Ax));
    }
    case NormKind::smoothed_ls: {
      const LsEval e = ls_eval(xi, s_, delta_);
      const double P = std::pow(e.t1, 0.5 * s_ - 1.0) + std::pow(e.t2, 0.5 * s_ - 1.0);
      const double d2 = delta_ * delta_;
      const Vec2 w{xi.x * (std::pow(e.t1, 0.5 * s_ - 1.0) + d2 * P),
                   xi.y * (std::pow(e.t2, 0.5 * s_ - 1.0) + d2 * P)};
      return std::pow(e.G, 1.0 / s_ - 1.0) * w;
    }
  }
  return {};
}

Mat2 AnisotropicNorm::hessian(Vec2 xi) const {
  if (!(norm2(xi) > 0.0)) throw ZeroArgument("norm Hessian undefined at the origin");
  switch (kind_) {
    case NormKind::euclidean: {
      const double r = norm(xi);
      const Vec2 u = xi / r;
      return (1.0 / r) * (Mat2::identity() - Mat2::outer(u, u));
    }
    case NormKind::ellipse: {
      const Vec2 Ax = A_ * xi;
      const double F = std::sqrt(dot(xi, Ax));
      return (1.0 / F) * A_ - (1.0 / (F * F * F)) * Mat2::outer(Ax, Ax);
    }
    case NormKind::smoothed_ls: {
      const LsEval e = ls_eval(xi, s_, delta_);
      const double d2 = delta_ * delta_;
      const double p1 = std::pow(e.t1, 0.5 * s_ - 1.0);
      const double p2 = std::pow(e.t2, 0.5 * s_ - 1.0);
      const double q1 = std::pow(e.t1, 0.5 * s_ - 2.0);
      const double q2 = std::pow(e.t2, 0.5 * s_ - 2.0);
      const double P = p1 + p2;
      const double Q = q1 + q2;
      const Vec2 w{xi.x * (p1 + d2 * P), xi.y * (p2 + d2 * P)};
      const Vec2 a{xi.x * q1, xi.y * q2};
      Mat2 W{p1 + d2 * P, 0.0, 0.0, p2 + d2 * P};
      Mat2 corr = Mat2{xi.x * xi.x * q1, 0.0, 0.0, xi.y * xi.y * q2} +
                  d2 * (Mat2::outer(a, xi) + Mat2::outer(xi, a)) +
                  (d2 * d2 * Q) * Mat2::outer(xi, xi);
      W = W + (s_ - 2.0) * corr;
      return (1.0 - s_) * std::pow(e.G, 1.0 / s_ - 2.0) * Mat2::outer(w, w) +
             std::pow(e.G, 1.0 / s_ - 1.0) * W;
    }
  }
  return {};
}

Mat2 hessian_norm_power(const AnisotropicNorm& F, double p, Vec2 xi) {
  const double v = F(xi);
  const Vec2 g = F.gradient(xi);
  const Mat2 H = F.hessian(xi);
  return (p - 1.0) * std::pow(v, p - 2.0) * Mat2::outer(g, g) +
         std::pow(v, p - 1.0) * H;
}

double dual_norm(const AnisotropicNorm& F, Vec2 xi, int resolution) {
  if (resolution < 8) throw InvalidArgument("dual norm grid too coarse");
  double best = 0.0;
  for (int i = 0; i < resolution; ++i) {
    const Vec2 v = direction(2.0 * std::numbers::pi * i / resolution);
    best = std::max(best, dot(xi, v) / F(v));
  }
  return best;
}

DualData dual_and_wulff(const AnisotropicNorm& F, int resolution) {
  if (resolution < 8) throw InvalidArgument("dual ball grid too coarse");
  SupportVector sv;
  sv.directions.reserve(resolution);
  sv.values.reserve(resolution);
  for (int i = 0; i < resolution; ++i) {
    const Vec2 v = direction(2.0 * std::numbers::pi * i / resolution);
    sv.directions.push_back(v);
    sv.values.push_back(F(v));
  }
  // { x : <x, v> <= F(v) for all v } is the unit ball of the dual norm.
  WulffShape w = wulff_shape(sv);
  const double kappa = w.polygon.area();
  return DualData{std::move(w.polygon), kappa};
}

}  // namespace ptorsion
