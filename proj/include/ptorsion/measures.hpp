#pragma once

#include "ptorsion/torsion.hpp"

namespace ptorsion {

// (p - 1) / (n(p - 1) + p): the constant tying the boundary representation
// of the rigidity to the volume one, and the prefactor of the alternative
// L_q measure normalization.
double beta_constant(double p, int n = kDim);
// Scaling degree of the rigidity: tau(s K) = s^(n + p/(p-1)) tau(K).
double tau_scaling_exponent(double p, int n = kDim);
// Scaling degree of the L_q measure total: n + p/(p-1) - q.
double lq_measure_scaling_exponent(double p, double q, int n = kDim);

struct TorsionReport {
  double tau_volume = 0.0;    // int of u over K
  double tau_boundary = 0.0;  // beta * sum_k h_k S_p(facet k)
  double relative_gap = 0.0;
  double p = 0.0;
};

// Both representations of the rigidity from one solution; their gap is a
// pure discretization diagnostic.
TorsionReport torsional_rigidity(const ConvexPolygon& K, const AnisotropicNorm& F,
                                 double p, const TriangleMesh& mesh,
                                 const TorsionSolution& sol);

struct FacetMeasureEntry {
  Vec2 normal;
  double h = 0.0;       // support value of the facet (origin inside K)
  double length = 0.0;
  double S_p = 0.0;     // int over the facet of F(grad u)^p
  double S_pq = 0.0;    // h^(1-q) S_p, optionally times beta
};

struct FacetMeasure {
  std::vector<FacetMeasureEntry> facets;
  double p = 0.0;
  double q = 1.0;
  bool prefactor = false;
  double total_S_p = 0.0;
  double total_S_pq = 0.0;
};

// The q = 1 torsional surface measure of the facets.
FacetMeasure torsional_measure(const ConvexPolygon& K, const AnisotropicNorm& F,
                               double p, const TriangleMesh& mesh,
                               const TorsionSolution& sol);

// L_q torsional measure: density h^(1-q) against the q = 1 measure.  Needs
// the origin strictly inside K when q != 1.  With prefactor = true every
// S_pq is multiplied by beta_constant(p), matching the alternative
// normalization of the measure.
FacetMeasure lq_torsional_measure(const ConvexPolygon& K, const AnisotropicNorm& F,
                                  double p, double q, const TriangleMesh& mesh,
                                  const TorsionSolution& sol, bool prefactor = false);

struct PipelineConfig {
  double target_h = 0.0;  // absolute mesh pitch; 0 means rel_h * diameter
  double rel_h = 0.01;
  double epsilon = -1.0;  // regularization; negative means 1e-6 * diameter
  double tol = 1e-8;
  int max_iters = 400;
  // Solve at epsilon and epsilon/2 and extrapolate the fields in epsilon^2.
  // Skipped for p = 2, where the minimizer does not depend on epsilon.
  bool richardson = true;
};

struct TorsionAnalysis {
  TriangleMesh mesh;
  TorsionSolution solution;
  TorsionReport report;
  double max_u = 0.0;
};

// Mesh + solve + report in one step; the usual entry point.
TorsionAnalysis compute_torsion(const ConvexPolygon& K, const AnisotropicNorm& F,
                                double p, const PipelineConfig& cfg = {});

struct PolyaSzegoReport {
  double tau = 0.0;
  double bound = 0.0;  // beta * n^(-1/(p-1)) * kappa^(-p/(n(p-1))) * V^((n(p-1)+p)/(n(p-1)))
  double ratio = 0.0;  // tau / bound, 1 exactly for the ball of the norm
  bool satisfied = false;
};

PolyaSzegoReport polya_szego_from(double tau, double volume, double p, double kappa,
                                  double slack = 0.05);
// Solves for tau internally; kappa comes from dual_and_wulff of the norm.
PolyaSzegoReport polya_szego_bound(const ConvexPolygon& K, const AnisotropicNorm& F,
                                   double p, double kappa,
                                   const PipelineConfig& cfg = {}, double slack = 0.05);

struct VariationalCheck {
  double quotient = 0.0;   // extrapolated symmetric difference quotient of tau
  double predicted = 0.0;  // (1/q) sum_k f_k^q S_pq(facet k)
  double relative_gap = 0.0;
};

// Differentiates t -> tau of the Wulff shape of (h_K^q + t f^q)^(1/q) at
// t = 0 and compares with the L_q measure integral it should equal.  All
// perturbed bodies are meshed with the layout of the base body so the
// quotient is not polluted by topology changes.
VariationalCheck variational_derivative_check(const ConvexPolygon& K,
                                              const AnisotropicNorm& F, double p,
                                              double q, const std::vector<double>& f,
                                              double t, const PipelineConfig& cfg = {});

}  // namespace ptorsion
