#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "ptorsion/anisotropy.hpp"

using namespace ptorsion;

namespace {

constexpr double kPi = std::numbers::pi;

Vec2 fd_gradient(const AnisotropicNorm& F, Vec2 x, double step) {
  return {(F({x.x + step, x.y}) - F({x.x - step, x.y})) / (2 * step),
          (F({x.x, x.y + step}) - F({x.x, x.y - step})) / (2 * step)};
}

Mat2 fd_hessian(const AnisotropicNorm& F, Vec2 x, double step) {
  const Vec2 gx1 = F.gradient({x.x + step, x.y});
  const Vec2 gx0 = F.gradient({x.x - step, x.y});
  const Vec2 gy1 = F.gradient({x.x, x.y + step});
  const Vec2 gy0 = F.gradient({x.x, x.y - step});
  return {(gx1.x - gx0.x) / (2 * step), (gy1.x - gy0.x) / (2 * step),
          (gx1.y - gx0.y) / (2 * step), (gy1.y - gy0.y) / (2 * step)};
}

std::vector<Vec2> probe_points(unsigned seed, int count) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  std::vector<Vec2> pts;
  while (static_cast<int>(pts.size()) < count) {
    const Vec2 x{coord(rng), coord(rng)};
    if (norm(x) > 0.3) pts.push_back(x);
  }
  return pts;
}

// smallest eigenvalue of a symmetric 2x2
double min_eig(const Mat2& m) {
  const double tr = m.xx + m.yy;
  const double det = m.xx * m.yy - m.xy * m.yx;
  return tr / 2.0 - std::sqrt(std::max(tr * tr / 4.0 - det, 0.0));
}

}  // namespace

TEST_CASE("euclidean norm basics") {
  const AnisotropicNorm F = AnisotropicNorm::euclidean();
  CHECK(F({3, 4}) == doctest::Approx(5.0));
  const Vec2 g = F.gradient({3, 4});
  CHECK(g.x == doctest::Approx(0.6));
  CHECK(g.y == doctest::Approx(0.8));
  CHECK_THROWS_AS(F.gradient({0, 0}), ZeroArgument);
}

TEST_CASE("ellipse norm value and validation") {
  const AnisotropicNorm F = AnisotropicNorm::ellipse({4, 0, 0, 1});
  CHECK(F({1, 0}) == doctest::Approx(2.0));
  CHECK(F({0, 1}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(AnisotropicNorm::ellipse({4, 1, 0, 1}), InvalidArgument);   // asymmetric
  CHECK_THROWS_AS(AnisotropicNorm::ellipse({-1, 0, 0, 1}), InvalidArgument);  // not PD
  CHECK_THROWS_AS(AnisotropicNorm::ellipse({1, 2, 2, 1}), InvalidArgument);   // det < 0
}

TEST_CASE("smoothed ls with s=2 is a scaled euclidean norm") {
  const double delta = 1e-3;
  const AnisotropicNorm F = AnisotropicNorm::smoothed_ls(2.0, delta);
  const double factor = std::sqrt(1.0 + 2.0 * delta * delta);
  for (const Vec2& x : probe_points(21, 20))
    CHECK(F(x) == doctest::Approx(factor * norm(x)).epsilon(1e-12));
  CHECK_THROWS_AS(AnisotropicNorm::smoothed_ls(1.5), InvalidArgument);
  CHECK_THROWS_AS(AnisotropicNorm::smoothed_ls(4.0, 0.0), InvalidArgument);
}

TEST_CASE("gradients and hessians match finite differences") {
  const std::vector<AnisotropicNorm> norms = {
      AnisotropicNorm::euclidean(),
      AnisotropicNorm::ellipse({4, 1, 1, 2}),
      AnisotropicNorm::smoothed_ls(4.0, 1e-3),
      AnisotropicNorm::smoothed_ls(2.5, 0.05),
  };
  for (const AnisotropicNorm& F : norms) {
    for (const Vec2& x : probe_points(5, 12)) {
      const Vec2 g = F.gradient(x);
      const Vec2 gfd = fd_gradient(F, x, 1e-6);
      CHECK(std::abs(g.x - gfd.x) < 1e-7 * (1.0 + std::abs(g.x)));
      CHECK(std::abs(g.y - gfd.y) < 1e-7 * (1.0 + std::abs(g.y)));
      const Mat2 H = F.hessian(x);
      const Mat2 Hfd = fd_hessian(F, x, 1e-6);
      for (double d : {H.xx - Hfd.xx, H.xy - Hfd.xy, H.yx - Hfd.yx, H.yy - Hfd.yy})
        CHECK(std::abs(d) < 1e-6 * (1.0 + std::abs(H.xx) + std::abs(H.yy)));
    }
  }
}

TEST_CASE("norm gradient is homogeneous of degree zero") {
  const AnisotropicNorm F = AnisotropicNorm::smoothed_ls(3.0, 1e-2);
  for (const Vec2& x : probe_points(9, 10)) {
    const Vec2 g1 = F.gradient(x);
    const Vec2 g2 = F.gradient(3.7 * x);
    CHECK(g1.x == doctest::Approx(g2.x).epsilon(1e-12));
    CHECK(g1.y == doctest::Approx(g2.y).epsilon(1e-12));
    // Euler identity: <grad F(x), x> = F(x)
    CHECK(dot(g1, x) == doctest::Approx(F(x)).epsilon(1e-12));
  }
}

TEST_CASE("hessian of F^p/p is positive definite away from zero") {
  const std::vector<AnisotropicNorm> norms = {
      AnisotropicNorm::euclidean(),
      AnisotropicNorm::ellipse({4, 1, 1, 2}),
      AnisotropicNorm::smoothed_ls(4.0, 1e-3),
  };
  for (const AnisotropicNorm& F : norms)
    for (double p : {1.5, 2.0, 3.0})
      for (const Vec2& x : probe_points(13, 10)) {
        const Mat2 Hp = hessian_norm_power(F, p, x);
        CHECK(std::abs(Hp.xy - Hp.yx) < 1e-10 * (1.0 + std::abs(Hp.xy)));
        CHECK(min_eig(Hp) > 0.0);
      }
}

TEST_CASE("dual norm of the euclidean norm is euclidean") {
  const AnisotropicNorm F = AnisotropicNorm::euclidean();
  for (const Vec2& x : probe_points(31, 8))
    CHECK(dual_norm(F, x) == doctest::Approx(norm(x)).epsilon(1e-6));
}

TEST_CASE("dual norm of an ellipse norm uses the inverse matrix") {
  const AnisotropicNorm F = AnisotropicNorm::ellipse({4, 0, 0, 1});
  // F^o(xi) = sqrt(xi . A^{-1} xi)
  CHECK(dual_norm(F, {1, 0}) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(dual_norm(F, {0, 1}) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(dual_norm(F, {1, 1}) == doctest::Approx(std::sqrt(1.25)).epsilon(1e-6));
}

TEST_CASE("wulff body area matches closed forms and a polar integral") {
  // euclidean: unit disk, kappa = pi
  const DualData disk = dual_and_wulff(AnisotropicNorm::euclidean(), 2048);
  CHECK(disk.kappa == doctest::Approx(kPi).epsilon(1e-5));

  // ellipse with matrix A: dual ball area pi sqrt(det A)
  const AnisotropicNorm ell = AnisotropicNorm::ellipse({4, 0, 0, 1});
  const DualData dell = dual_and_wulff(ell, 2048);
  CHECK(dell.kappa == doctest::Approx(2.0 * kPi).epsilon(1e-5));

  // independent polar-integral path for a norm without a closed form
  const AnisotropicNorm ls = AnisotropicNorm::smoothed_ls(4.0, 1e-3);
  const DualData dls = dual_and_wulff(ls, 2048);
  const int m = 8192;
  double area = 0.0;
  for (int i = 0; i < m; ++i) {
    const double rho = 1.0 / dual_norm(ls, direction((i + 0.5) * 2.0 * kPi / m), 8192);
    area += 0.5 * rho * rho * 2.0 * kPi / m;
  }
  CHECK(dls.kappa == doctest::Approx(area).epsilon(1e-3));
}
