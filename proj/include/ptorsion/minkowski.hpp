#pragma once

#include "ptorsion/measures.hpp"

namespace ptorsion {

// Finitely supported candidate measure: atoms alpha_k at unit directions u_k.
struct DiscreteMeasure {
  std::vector<Vec2> directions;
  std::vector<double> weights;

  int size() const { return static_cast<int>(directions.size()); }
  double total() const;
  // At least 3 atoms, unit pairwise-distinct directions, positive finite
  // weights, and no closed half-circle containing every direction (raises
  // NonConcentration otherwise; the solvers require that spread).
  void validate() const;
};

struct MinkowskiConfig {
  double rel_h = 0.02;         // mesh pitch of iterate solves, relative to diameter
  double verify_rel_h = 0.01;  // pitch of the final residual evaluation
  double tol = 1e-3;           // target for the first-order residual
  int max_outer = 200;
  double pde_tol = 1e-8;
  int pde_max_iters = 400;
  int dual_resolution = 1024;  // grid for kappa in the volume diagnostic
};

struct SolveOutcome {
  ConvexPolygon body;
  std::vector<double> support;   // support values of body at the atom directions
  double lambda = 1.0;           // measure multiplier; 1 in the q > 1 regime
  std::vector<double> residuals; // per atom |alpha_k - lambda S_pq_k| / alpha_k
  double first_order_residual = 0.0;  // max of residuals
  int iterations = 0;
  std::vector<double> objective_trace;  // accepted iterates, non-increasing
  // tol was met or descent stalled at a stationary point of the discrete
  // objective; false only when the iteration budget ran out first
  bool converged = false;
  double tau = 0.0;              // rigidity of the returned body
  bool volume_bound_ok = true;   // isoperimetric volume floor held along the run
};

// Log-scaled objective of the q > 1 regime,
//   Psi(h) = (1/q) log sum_k alpha_k h_k^q - beta log tau([h]);
// degree-0 homogeneous in h, evaluated with a fresh Wulff shape + solve.
// h must sample the atom directions of mu.
double objective_q_gt_1(const SupportVector& h, const DiscreteMeasure& mu,
                        const AnisotropicNorm& F, double p, double q,
                        const MinkowskiConfig& cfg = {});

// Projected descent on Psi over log support values, with snap-to-body after
// each accepted step.  The converged polytope is rescaled so its L_q measure
// matches mu with multiplier 1.  q must be > 1 and stay away from the scaling-
// critical exponent n + p/(p-1) (ExcludedExponent).
SolveOutcome solve_q_gt_1(const DiscreteMeasure& mu, const AnisotropicNorm& F,
                          double p, double q, const MinkowskiConfig& cfg = {});

struct TranslateResult {
  Vec2 xi{0.0, 0.0};
  double value = 0.0;  // sum_k alpha_k (f_k - <xi, u_k>)^q at the maximizer
  int iterations = 0;
};

// Maximizes the strictly concave xi -> sum_k alpha_k (f_k - <xi, u_k>)^q over
// the interior of the Wulff shape of f, by damped Newton.  Requires 0 < q < 1.
TranslateResult translate_maximize(const SupportVector& f, const DiscreteMeasure& mu,
                                   double q, double grad_tol = 1e-11);

// Descent for the 0 < q < 1 regime on the scale-reduced objective
//   G(h) = tau([h])^(-q beta) * sup_xi sum_k alpha_k (h_k - <xi, u_k>)^q,
// recentering each iterate at the maximizing translation.  The returned body
// carries tau = 1, its measure identity holds with multiplier
// lambda = beta * sum_k alpha_k h_k^q, reproducible from the output fields.
SolveOutcome solve_0_lt_q_lt_1(const DiscreteMeasure& mu, const AnisotropicNorm& F,
                               double p, double q, const MinkowskiConfig& cfg = {});

struct VerifyReport {
  std::vector<double> residuals;  // per atom, against the outcome's lambda
  double max_residual = 0.0;
  double tau = 0.0;
  double tau_gap = 0.0;  // relative two-formula gap at the finer resolution
};

// Recomputes the measure of a returned body on a finer mesh.
VerifyReport verify_solution(const SolveOutcome& outcome, const DiscreteMeasure& mu,
                             const AnisotropicNorm& F, double p, double q,
                             double rel_h);

}  // namespace ptorsion
