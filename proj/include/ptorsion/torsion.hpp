#pragma once

#include <vector>

#include "ptorsion/anisotropy.hpp"
#include "ptorsion/mesh.hpp"

namespace ptorsion {

struct TorsionSolution {
  std::vector<double> nodal_values;     // one per mesh node, zero on the boundary
  std::vector<Vec2> element_gradients;  // one per triangle
  double energy = 0.0;                  // regularized p-Dirichlet energy at the minimizer
  double epsilon = 0.0;
  int iterations = 0;
  double residual = 0.0;                // final gradient norm relative to the load
};

// Minimizes J(u) = sum_T A_T (eps^2 + F(grad u)^2)^(p/2) / p - int u over P1
// fields vanishing on the boundary, by damped Newton with an Armijo line
// search.  The integrand is evaluated exactly on each triangle since P1
// gradients are constant.  Converges when the energy gradient drops below
// tol relative to the load vector; raises NonConvergence past max_iters and
// IllConditioned if the Hessian cannot be factored or a step cannot be
// accepted.
TorsionSolution solve_torsion(const ConvexPolygon& K, const AnisotropicNorm& F,
                              double p, const TriangleMesh& mesh, double epsilon,
                              double tol, int max_iters = 400);

struct FacetFlux {
  int facet = -1;
  double integral = 0.0;            // int over the facet of F(grad u)^p
  std::vector<double> samples;      // per boundary edge, in boundary order
  std::vector<double> edge_lengths;
};

// Per-facet boundary density F(grad u)^p sampled from the triangles adjacent
// to each boundary edge.
std::vector<FacetFlux> boundary_flux(const ConvexPolygon& K, const AnisotropicNorm& F,
                                     double p, const TriangleMesh& mesh,
                                     const TorsionSolution& sol);

// Thread cap for assembly loops: TM_THREADS when set, else hardware
// concurrency, always at least 1.  Partial sums are reduced in fixed block
// order so results are identical for any thread count.
int assembly_threads();

}  // namespace ptorsion
