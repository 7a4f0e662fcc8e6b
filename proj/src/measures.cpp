#include "ptorsion/measures.hpp"

#include <algorithm>
#include <cmath>

namespace ptorsion {

double beta_constant(double p, int n) { return (p - 1.0) / (n * (p - 1.0) + p); }

double tau_scaling_exponent(double p, int n) { return n + p / (p - 1.0); }

double lq_measure_scaling_exponent(double p, double q, int n) {
  return tau_scaling_exponent(p, n) - q;
}

namespace {

double integral_of_solution(const TriangleMesh& mesh, const TorsionSolution& sol) {
  double acc = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    acc += mesh.triangle_area(t) / 3.0 *
           (sol.nodal_values[tri[0]] + sol.nodal_values[tri[1]] + sol.nodal_values[tri[2]]);
  }
  return acc;
}

}  // namespace

TorsionReport torsional_rigidity(const ConvexPolygon& K, const AnisotropicNorm& F,
                                 double p, const TriangleMesh& mesh,
                                 const TorsionSolution& sol) {
  TorsionReport report;
  report.p = p;
  report.tau_volume = integral_of_solution(mesh, sol);
  const std::vector<FacetFlux> flux = boundary_flux(K, F, p, mesh, sol);
  double acc = 0.0;
  for (int k = 0; k < K.facet_count(); ++k) acc += K.facet(k).support * flux[k].integral;
  report.tau_boundary = beta_constant(p) * acc;
  report.relative_gap = std::abs(report.tau_volume - report.tau_boundary) /
                        std::abs(report.tau_volume);
  return report;
}

FacetMeasure torsional_measure(const ConvexPolygon& K, const AnisotropicNorm& F,
                               double p, const TriangleMesh& mesh,
                               const TorsionSolution& sol) {
  return lq_torsional_measure(K, F, p, 1.0, mesh, sol, false);
}

FacetMeasure lq_torsional_measure(const ConvexPolygon& K, const AnisotropicNorm& F,
                                  double p, double q, const TriangleMesh& mesh,
                                  const TorsionSolution& sol, bool prefactor) {
  if (!std::isfinite(q)) throw InvalidArgument("measure exponent must be finite");
  if (q != 1.0 && !(K.origin_margin() > 0.0))
    throw OriginNotInterior("L_q measure needs the origin strictly inside K");

  const std::vector<FacetFlux> flux = boundary_flux(K, F, p, mesh, sol);
  const double factor = prefactor ? beta_constant(p) : 1.0;

  FacetMeasure out;
  out.p = p;
  out.q = q;
  out.prefactor = prefactor;
  out.facets.reserve(K.facet_count());
  for (int k = 0; k < K.facet_count(); ++k) {
    const Facet f = K.facet(k);
    FacetMeasureEntry e;
    e.normal = f.normal;
    e.h = f.support;
    e.length = f.length;
    e.S_p = flux[k].integral;
    e.S_pq = factor * std::pow(f.support, 1.0 - q) * e.S_p;
    out.total_S_p += e.S_p;
    out.total_S_pq += e.S_pq;
    out.facets.push_back(e);
  }
  return out;
}

TorsionAnalysis compute_torsion(const ConvexPolygon& K, const AnisotropicNorm& F,
                                double p, const PipelineConfig& cfg) {
  const double diam = K.diameter();
  const double target_h = cfg.target_h > 0.0 ? cfg.target_h : cfg.rel_h * diam;
  const double eps = cfg.epsilon > 0.0 ? cfg.epsilon : 1e-6 * diam;

  TorsionAnalysis a;
  a.mesh = triangulate(K, target_h);
  a.solution = solve_torsion(K, F, p, a.mesh, eps, cfg.tol, cfg.max_iters);

  if (cfg.richardson && p != 2.0) {
    // The energy perturbs quadratically in epsilon, so one extrapolation
    // step in epsilon^2 removes the leading regularization error.
    TorsionSolution half = solve_torsion(K, F, p, a.mesh, 0.5 * eps, cfg.tol,
                                         cfg.max_iters);
    for (size_t i = 0; i < a.solution.nodal_values.size(); ++i)
      a.solution.nodal_values[i] =
          (4.0 * half.nodal_values[i] - a.solution.nodal_values[i]) / 3.0;
    for (size_t t = 0; t < a.solution.element_gradients.size(); ++t)
      a.solution.element_gradients[t] =
          (1.0 / 3.0) * (4.0 * half.element_gradients[t] - a.solution.element_gradients[t]);
    a.solution.iterations += half.iterations;
    a.solution.residual = std::max(a.solution.residual, half.residual);
  }

  a.report = torsional_rigidity(K, F, p, a.mesh, a.solution);
  a.max_u = *std::max_element(a.solution.nodal_values.begin(),
                              a.solution.nodal_values.end());
  return a;
}

PolyaSzegoReport polya_szego_from(double tau, double volume, double p, double kappa,
                                  double slack) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw InvalidArgument("isoperimetric bound requires 1 < p < infinity");
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw InvalidArgument("kappa must be a positive volume");
  if (!(volume > 0.0) || !std::isfinite(volume))
    throw InvalidArgument("volume must be positive");
  if (!(tau >= 0.0) || !std::isfinite(tau))
    throw InvalidArgument("tau must be nonnegative");
  const int n = kDim;
  PolyaSzegoReport r;
  r.tau = tau;
  r.bound = beta_constant(p) * std::pow(static_cast<double>(n), -1.0 / (p - 1.0)) *
            std::pow(kappa, -p / (n * (p - 1.0))) *
            std::pow(volume, (n * (p - 1.0) + p) / (n * (p - 1.0)));
  r.ratio = r.tau / r.bound;
  r.satisfied = r.tau <= r.bound * (1.0 + slack);
  return r;
}

PolyaSzegoReport polya_szego_bound(const ConvexPolygon& K, const AnisotropicNorm& F,
                                   double p, double kappa, const PipelineConfig& cfg,
                                   double slack) {
  if (!(kappa > 0.0)) throw InvalidArgument("kappa must be positive");
  const TorsionAnalysis a = compute_torsion(K, F, p, cfg);
  return polya_szego_from(a.report.tau_volume, K.area(), p, kappa, slack);
}

VariationalCheck variational_derivative_check(const ConvexPolygon& K,
                                              const AnisotropicNorm& F, double p,
                                              double q, const std::vector<double>& f,
                                              double t, const PipelineConfig& cfg) {
  if (!(q > 0.0)) throw InvalidArgument("variational check requires q > 0");
  if (!(t > 0.0)) throw InvalidArgument("perturbation size must be positive");
  if (static_cast<int>(f.size()) != K.facet_count())
    throw InvalidArgument("perturbation must assign a value to every facet");
  if (!(K.origin_margin() > 0.0))
    throw OriginNotInterior("variational check needs the origin strictly inside K");
  bool any = false;
  for (double v : f) {
    if (v < 0.0) throw InvalidArgument("perturbation values must be nonnegative");
    any = any || v > 0.0;
  }
  if (!any) throw InvalidArgument("perturbation must not vanish identically");

  const double diam = K.diameter();
  const double target_h = cfg.target_h > 0.0 ? cfg.target_h : cfg.rel_h * diam;
  const double eps = cfg.epsilon > 0.0 ? cfg.epsilon : 1e-6 * diam;
  const MeshLayout layout = mesh_layout(K, target_h);

  SupportVector base;
  base.directions.reserve(K.facet_count());
  base.values.reserve(K.facet_count());
  for (int k = 0; k < K.facet_count(); ++k) {
    const Facet fc = K.facet(k);
    base.directions.push_back(fc.normal);
    base.values.push_back(fc.support);
  }

  PipelineConfig base_cfg = cfg;
  base_cfg.target_h = target_h;
  base_cfg.epsilon = eps;
  const TorsionAnalysis a = compute_torsion(K, F, p, base_cfg);
  const FacetMeasure measure = lq_torsional_measure(K, F, p, q, a.mesh, a.solution, false);

  double predicted = 0.0;
  for (int k = 0; k < K.facet_count(); ++k)
    predicted += std::pow(f[k], q) * measure.facets[k].S_pq;
  predicted /= q;

  // tau of the body with support (h^q + s f^q)^(1/q), meshed with the base
  // layout so s -> tau(s) is smooth.
  auto tau_at = [&](double s) {
    SupportVector sv = base;
    for (int k = 0; k < K.facet_count(); ++k) {
      const double v = std::pow(base.values[k], q) + s * std::pow(f[k], q);
      if (!(v > 0.0))
        throw InvalidArgument("perturbation too large: support power went nonpositive");
      sv.values[k] = std::pow(v, 1.0 / q);
    }
    const WulffShape w = wulff_shape(sv);
    MeshLayout perturbed = layout;
    for (int k = 0; k < K.facet_count(); ++k) {
      const int facet = w.facet_of_direction[k];
      if (facet < 0)
        throw DegenerateFacet(k, "perturbation deactivated a facet; reduce t");
      perturbed.facet_segments[facet] = layout.facet_segments[k];
    }
    const TriangleMesh mesh = triangulate(w.polygon, perturbed);
    const TorsionSolution sol = solve_torsion(w.polygon, F, p, mesh, eps, cfg.tol,
                                              cfg.max_iters);
    return torsional_rigidity(w.polygon, F, p, mesh, sol).tau_volume;
  };

  const double slope_t = (tau_at(t) - tau_at(-t)) / (2.0 * t);
  const double slope_half = (tau_at(0.5 * t) - tau_at(-0.5 * t)) / t;
  const double quotient = (4.0 * slope_half - slope_t) / 3.0;

  VariationalCheck check;
  check.quotient = quotient;
  check.predicted = predicted;
  check.relative_gap = std::abs(quotient - predicted) / std::abs(predicted);
  return check;
}

}  // namespace ptorsion
