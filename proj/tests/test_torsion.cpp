#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <doctest.h>

#include "fixtures.hpp"
#include "ptorsion/mesh.hpp"
#include "ptorsion/torsion.hpp"

using namespace ptorsion;

namespace {

constexpr double kPi = std::numbers::pi;

double tau_of(const TriangleMesh& mesh, const TorsionSolution& sol) {
  double tau = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    tau += mesh.triangle_area(t) *
           (sol.nodal_values[tri[0]] + sol.nodal_values[tri[1]] + sol.nodal_values[tri[2]]) /
           3.0;
  }
  return tau;
}

double max_value(const TorsionSolution& sol) {
  return *std::max_element(sol.nodal_values.begin(), sol.nodal_values.end());
}

TorsionSolution solve_on(const ConvexPolygon& K, const AnisotropicNorm& F, double p,
                         const TriangleMesh& mesh, double tol = 1e-8) {
  return solve_torsion(K, F, p, mesh, 1e-6 * K.diameter(), tol);
}

// Exact values for the unit disk: u(r) = c (1 - r^p') with p' = p/(p-1) and
// c = 2^(1-p') / p', tau = 2 pi c (1/2 - 1/(p'+2)).
double disk_center_value(double p) {
  const double pp = p / (p - 1.0);
  return std::pow(2.0, 1.0 - pp) / pp;
}

double disk_tau(double p) {
  const double pp = p / (p - 1.0);
  return 2.0 * kPi * disk_center_value(p) * (0.5 - 1.0 / (pp + 2.0));
}

}  // namespace

TEST_CASE("argument validation") {
  const ConvexPolygon K = fixtures::square();
  const TriangleMesh mesh = triangulate(K, 0.5);
  const AnisotropicNorm F = AnisotropicNorm::euclidean();
  CHECK_THROWS_AS(solve_torsion(K, F, 1.0, mesh, 1e-6, 1e-8), InvalidArgument);
  CHECK_THROWS_AS(solve_torsion(K, F, 0.5, mesh, 1e-6, 1e-8), InvalidArgument);
  CHECK_THROWS_AS(solve_torsion(K, F, 2.0, mesh, 0.0, 1e-8), InvalidArgument);
  CHECK_THROWS_AS(solve_torsion(K, F, 2.0, mesh, 1e-6, 0.0), InvalidArgument);
}

TEST_CASE("disk torsion matches the radial solution for several exponents") {
  const ConvexPolygon disk = fixtures::disk_ngon(64);
  const TriangleMesh mesh = triangulate(disk, 0.06);
  const AnisotropicNorm F = AnisotropicNorm::euclidean();
  const struct {
    double p, tau_tol, max_tol;
  } cases[] = {{1.5, 0.02, 0.02}, {2.0, 0.01, 0.005}, {3.0, 0.015, 0.01}};
  for (const auto& c : cases) {
    const TorsionSolution sol = solve_on(disk, F, c.p, mesh);
    CHECK(sol.residual <= 1e-8);
    CHECK(tau_of(mesh, sol) == doctest::Approx(disk_tau(c.p)).epsilon(c.tau_tol));
    CHECK(max_value(sol) == doctest::Approx(disk_center_value(c.p)).epsilon(c.max_tol));
  }
}

TEST_CASE("anisotropic torsion on a matched ellipse has a closed form") {
  // With F(x)^2 = 4 x1^2 + x2^2 on the domain x1^2/4 + x2^2 <= 1 the exact
  // solution is u = (1 - x1^2/4 - x2^2)/4, so tau = pi/4 and u(0) = 1/4.
  std::vector<Vec2> verts;
  const int n = 64;
  for (int i = 0; i < n; ++i) {
    const double th = 2.0 * kPi * i / n;
    verts.push_back({2.0 * std::cos(th), std::sin(th)});
  }
  const ConvexPolygon E = ConvexPolygon::from_vertices(verts);
  const AnisotropicNorm F = AnisotropicNorm::ellipse({4, 0, 0, 1});
  const TriangleMesh mesh = triangulate(E, 0.1);
  const TorsionSolution sol = solve_on(E, F, 2.0, mesh);
  CHECK(tau_of(mesh, sol) == doctest::Approx(kPi / 4.0).epsilon(0.015));
  CHECK(max_value(sol) == doctest::Approx(0.25).epsilon(0.01));
}

TEST_CASE("p=2 solution equals an independently assembled poisson solve") {
  const ConvexPolygon K = fixtures::square();
  const TriangleMesh mesh = triangulate(K, 0.15);
  const TorsionSolution sol = solve_on(K, AnisotropicNorm::euclidean(), 2.0, mesh, 1e-12);

  // textbook P1 assembly of -lap u = 1 with homogeneous Dirichlet data
  const std::vector<bool> bnd = mesh.boundary_flags();
  std::vector<int> dof(mesh.node_count(), -1);
  std::vector<int> node_of;
  for (int i = 0; i < mesh.node_count(); ++i)
    if (!bnd[i]) {
      dof[i] = static_cast<int>(node_of.size());
      node_of.push_back(i);
    }
  const int nd = static_cast<int>(node_of.size());
  std::vector<Eigen::Triplet<double>> trips;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nd);
  for (const auto& tri : mesh.triangles) {
    const Vec2 v0 = mesh.nodes[tri[0]];
    const Vec2 v1 = mesh.nodes[tri[1]];
    const Vec2 v2 = mesh.nodes[tri[2]];
    const double area = 0.5 * cross(v1 - v0, v2 - v0);
    const Vec2 g[3] = {perp(v2 - v1) / (2 * area), perp(v0 - v2) / (2 * area),
                       perp(v1 - v0) / (2 * area)};
    for (int s = 0; s < 3; ++s) {
      if (dof[tri[s]] < 0) continue;
      rhs[dof[tri[s]]] += area / 3.0;
      for (int r = 0; r < 3; ++r)
        if (dof[tri[r]] >= 0)
          trips.emplace_back(dof[tri[s]], dof[tri[r]], area * dot(g[s], g[r]));
    }
  }
  Eigen::SparseMatrix<double> A(nd, nd);
  A.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
  REQUIRE(ldlt.info() == Eigen::Success);
  const Eigen::VectorXd u = ldlt.solve(rhs);

  double worst = 0.0;
  for (int i = 0; i < nd; ++i)
    worst = std::max(worst, std::abs(u[i] - sol.nodal_values[node_of[i]]));
  CHECK(worst <= 1e-8 * max_value(sol));
}

TEST_CASE("discrete euler-lagrange identity: int F^p(grad u) = int u") {
  const ConvexPolygon K = fixtures::hexagon();
  const TriangleMesh mesh = triangulate(K, 0.08);
  const AnisotropicNorm F = AnisotropicNorm::euclidean();
  for (double p : {2.0, 3.0}) {
    const TorsionSolution sol = solve_on(K, F, p, mesh);
    double lhs = 0.0;
    for (int t = 0; t < mesh.triangle_count(); ++t)
      lhs += mesh.triangle_area(t) * std::pow(F(sol.element_gradients[t]), p);
    const double rhs = tau_of(mesh, sol);
    CHECK(std::abs(lhs - rhs) <= 1e-6 * rhs);
  }
}

TEST_CASE("boundary values vanish and the solution is nonnegative") {
  const ConvexPolygon K = fixtures::random_12gon(5);
  const TriangleMesh mesh = triangulate(K, 0.1);
  const TorsionSolution sol = solve_on(K, AnisotropicNorm::euclidean(), 3.0, mesh);
  const std::vector<bool> bnd = mesh.boundary_flags();
  for (int i = 0; i < mesh.node_count(); ++i) {
    if (bnd[i])
      CHECK(sol.nodal_values[i] == 0.0);
    else
      CHECK(sol.nodal_values[i] >= -1e-10);
  }
  CHECK(max_value(sol) > 0.0);
}

TEST_CASE("rigidity increases under nested refinement at the expected rate") {
  const ConvexPolygon disk = fixtures::disk_ngon(64);
  const TriangleMesh m0 = triangulate(disk, 0.24);
  const TriangleMesh m1 = refine_uniform(m0);
  const TriangleMesh m2 = refine_uniform(m1);
  const AnisotropicNorm F = AnisotropicNorm::euclidean();
  const double t0 = tau_of(m0, solve_on(disk, F, 2.0, m0));
  const double t1 = tau_of(m1, solve_on(disk, F, 2.0, m1));
  const double t2 = tau_of(m2, solve_on(disk, F, 2.0, m2));
  CHECK(t0 < t1);
  CHECK(t1 < t2);
  // P1 energies converge at O(h^2), so increments shrink by about 1/4
  const double ratio = (t2 - t1) / (t1 - t0);
  CHECK(ratio > 0.15);
  CHECK(ratio < 0.35);
}

TEST_CASE("larger domains have larger rigidity") {
  const AnisotropicNorm F = AnisotropicNorm::euclidean();
  const ConvexPolygon square = fixtures::square();
  const ConvexPolygon diamond = regular_polygon(4, 1.0);  // inscribed in the square
  const TriangleMesh ms = triangulate(square, 0.1);
  const TriangleMesh md = triangulate(diamond, 0.1);
  const double tau_square = tau_of(ms, solve_on(square, F, 2.0, ms));
  const double tau_diamond = tau_of(md, solve_on(diamond, F, 2.0, md));
  CHECK(tau_diamond > 0.0);
  CHECK(tau_square > tau_diamond);
}

TEST_CASE("disk boundary flux density approaches its constant value") {
  const ConvexPolygon disk = fixtures::disk_ngon(64);
  const TriangleMesh mesh = triangulate(disk, 0.06);
  const AnisotropicNorm F = AnisotropicNorm::euclidean();
  const TorsionSolution sol = solve_on(disk, F, 2.0, mesh);
  const std::vector<FacetFlux> flux = boundary_flux(disk, F, 2.0, mesh, sol);
  REQUIRE(flux.size() == 64);

  // |grad u| = 1/2 on the unit circle, so the p = 2 density is 1/4
  double total = 0.0, length = 0.0;
  for (const FacetFlux& f : flux) {
    REQUIRE(!f.samples.empty());
    REQUIRE(f.samples.size() == f.edge_lengths.size());
    double integral = 0.0;
    for (size_t i = 0; i < f.samples.size(); ++i) {
      CHECK(f.samples[i] == doctest::Approx(0.25).epsilon(0.10));
      integral += f.samples[i] * f.edge_lengths[i];
    }
    CHECK(integral == doctest::Approx(f.integral).epsilon(1e-12));
    total += f.integral;
    for (double len : f.edge_lengths) length += len;
  }
  CHECK(length == doctest::Approx(disk.perimeter()).epsilon(1e-12));
  CHECK(total / length == doctest::Approx(0.25).epsilon(0.02));

  const TriangleMesh other = refine_uniform(mesh);
  CHECK_THROWS_AS(boundary_flux(disk, F, 2.0, other, sol), InvalidArgument);
}

TEST_CASE("the p=2 problem is linear: one newton step and no epsilon dependence") {
  const ConvexPolygon K = fixtures::hexagon();
  const TriangleMesh mesh = triangulate(K, 0.1);
  const AnisotropicNorm F = AnisotropicNorm::euclidean();
  const TorsionSolution a = solve_torsion(K, F, 2.0, mesh, 1e-3, 1e-10);
  const TorsionSolution b = solve_torsion(K, F, 2.0, mesh, 1e-8, 1e-10);
  CHECK(a.iterations <= 2);
  CHECK(tau_of(mesh, a) == doctest::Approx(tau_of(mesh, b)).epsilon(1e-10));
}

TEST_CASE("repeated solves are bitwise deterministic") {
  const ConvexPolygon K = fixtures::hexagon();
  const TriangleMesh mesh = triangulate(K, 0.12);
  const AnisotropicNorm F = AnisotropicNorm::smoothed_ls(4.0, 1e-3);
  const TorsionSolution a = solve_on(K, F, 3.0, mesh);
  const TorsionSolution b = solve_on(K, F, 3.0, mesh);
  REQUIRE(a.nodal_values.size() == b.nodal_values.size());
  for (size_t i = 0; i < a.nodal_values.size(); ++i)
    CHECK(a.nodal_values[i] == b.nodal_values[i]);
}
