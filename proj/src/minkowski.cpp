#include "ptorsion/minkowski.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ptorsion {

double DiscreteMeasure::total() const {
  double acc = 0.0;
  for (double w : weights) acc += w;
  return acc;
}

void DiscreteMeasure::validate() const {
  if (directions.size() != weights.size())
    throw InvalidArgument("measure atom counts differ");
  if (size() < 3) throw InvalidArgument("measure needs at least 3 atoms");
  for (const Vec2& u : directions)
    if (std::abs(norm(u) - 1.0) > 1e-9)
      throw InvalidArgument("atom directions must be unit vectors");
  for (double w : weights)
    if (!(w > 0.0) || !std::isfinite(w))
      throw InvalidArgument("atom weights must be positive and finite");
  std::vector<double> angles;
  angles.reserve(directions.size());
  for (const Vec2& u : directions) angles.push_back(std::atan2(u.y, u.x));
  std::sort(angles.begin(), angles.end());
  for (size_t i = 0; i + 1 < angles.size(); ++i)
    if (angles[i + 1] - angles[i] < 1e-9)
      throw InvalidArgument("atom directions must be pairwise distinct");
  double max_gap = angles.front() + 2.0 * std::numbers::pi - angles.back();
  for (size_t i = 0; i + 1 < angles.size(); ++i)
    max_gap = std::max(max_gap, angles[i + 1] - angles[i]);
  // The solved measures cannot charge a closed half-circle exclusively.
  if (max_gap >= std::numbers::pi - 1e-12)
    throw NonConcentration("atom directions lie in a closed half-circle");
}

namespace {

// One full evaluation of a candidate support vector: Wulff shape, torsion
// solve, and the per-atom surface data everything else is assembled from.
struct IterateEval {
  WulffShape shape;
  double tau = 0.0;
  double area = 0.0;
  double diameter = 0.0;
  std::vector<double> h_body;  // body support value per atom
  std::vector<double> S_p;     // facet measure per atom, 0 when inactive
};

IterateEval evaluate_iterate(const std::vector<double>& h, const DiscreteMeasure& mu,
                             const AnisotropicNorm& F, double p,
                             const MinkowskiConfig& cfg, double rel_h) {
  SupportVector sv{mu.directions, h};
  IterateEval ev{wulff_shape(sv)};
  const ConvexPolygon& body = ev.shape.polygon;
  ev.area = body.area();
  ev.diameter = body.diameter();

  const TriangleMesh mesh = triangulate(body, rel_h * ev.diameter);
  const TorsionSolution sol = solve_torsion(body, F, p, mesh, 1e-6 * ev.diameter,
                                            cfg.pde_tol, cfg.pde_max_iters);
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    ev.tau += mesh.triangle_area(t) / 3.0 *
              (sol.nodal_values[tri[0]] + sol.nodal_values[tri[1]] +
               sol.nodal_values[tri[2]]);
  }

  const std::vector<FacetFlux> flux = boundary_flux(body, F, p, mesh, sol);
  ev.h_body.reserve(mu.size());
  ev.S_p.reserve(mu.size());
  for (int k = 0; k < mu.size(); ++k) {
    ev.h_body.push_back(support_function(body, mu.directions[k]));
    const int facet = ev.shape.facet_of_direction[k];
    ev.S_p.push_back(facet >= 0 ? flux[facet].integral : 0.0);
  }
  return ev;
}

double measure_term(const DiscreteMeasure& mu, const std::vector<double>& h, double q) {
  double acc = 0.0;
  for (int k = 0; k < mu.size(); ++k) acc += mu.weights[k] * std::pow(h[k], q);
  return acc;
}

// Shared first-order residuals: at a critical point of either regime the
// atom weights equal beta * (sum alpha h^q) * h^(1-q) S_p / tau.
std::vector<double> first_order_residuals(const DiscreteMeasure& mu,
                                          const std::vector<double>& h,
                                          const IterateEval& ev, double p, double q) {
  const double mterm = measure_term(mu, h, q);
  const double beta = beta_constant(p);
  std::vector<double> r(mu.size());
  for (int k = 0; k < mu.size(); ++k) {
    const double predicted =
        beta * mterm * std::pow(h[k], 1.0 - q) * ev.S_p[k] / ev.tau;
    r[k] = std::abs(predicted - mu.weights[k]) / mu.weights[k];
  }
  return r;
}

double volume_floor(double mu_total, double p, double kappa) {
  const int n = kDim;
  const double base = mu_total / beta_constant(p) *
                      std::pow(static_cast<double>(n), 1.0 / (p - 1.0)) *
                      std::pow(kappa, p / (n * (p - 1.0)));
  return std::pow(base, n * (p - 1.0) / (n * (p - 1.0) + p));
}

void require_same_atoms(const SupportVector& h, const DiscreteMeasure& mu) {
  if (h.size() != mu.size())
    throw InvalidArgument("support vector does not sample the measure's atoms");
  for (int k = 0; k < mu.size(); ++k)
    if (dot(h.directions[k], mu.directions[k]) < 1.0 - 1e-12)
      throw InvalidArgument("support vector directions differ from the atom directions");
}

TranslateResult translate_newton(const std::vector<Vec2>& dirs,
                                 const std::vector<double>& f,
                                 const std::vector<double>& alpha, double q,
                                 Vec2 xi, double grad_tol) {
  const int n = static_cast<int>(dirs.size());
  double mean_f = 0.0;
  double total_alpha = 0.0;
  for (int k = 0; k < n; ++k) {
    mean_f += f[k] / n;
    total_alpha += alpha[k];
  }
  const double grad_scale = q * total_alpha * std::pow(mean_f, q - 1.0);

  auto slack = [&](Vec2 at, int k) { return f[k] - dot(at, dirs[k]); };
  auto value = [&](Vec2 at) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k) acc += alpha[k] * std::pow(slack(at, k), q);
    return acc;
  };

  double val = value(xi);
  for (int iter = 1; iter <= 100; ++iter) {
    Vec2 grad{0.0, 0.0};
    Mat2 hess{};
    for (int k = 0; k < n; ++k) {
      const double s = slack(xi, k);
      grad -= (q * alpha[k] * std::pow(s, q - 1.0)) * dirs[k];
      hess = hess + (q * (q - 1.0) * alpha[k] * std::pow(s, q - 2.0)) *
                        Mat2::outer(dirs[k], dirs[k]);
    }
    if (std::max(std::abs(grad.x), std::abs(grad.y)) <= grad_tol * grad_scale)
      return {xi, val, iter - 1};

    // hess is negative definite; solve hess * delta = -grad for the ascent step
    const double det = hess.xx * hess.yy - hess.xy * hess.yx;
    if (!(std::abs(det) > 0.0))
      throw IllConditioned("translation Hessian is singular");
    const Vec2 delta{(-grad.x * hess.yy + grad.y * hess.xy) / det,
                     (-hess.xx * grad.y + hess.yx * grad.x) / det};

    // keep every slack strictly positive, then backtrack on the increase
    double t = 1.0;
    for (int k = 0; k < n; ++k) {
      const double d = dot(delta, dirs[k]);
      if (d > 0.0) t = std::min(t, 0.95 * slack(xi, k) / d);
    }
    const double ascent = dot(grad, delta);
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
      const Vec2 trial = xi + t * delta;
      const double tv = value(trial);
      if (tv >= val + 1e-4 * t * ascent) {
        xi = trial;
        val = tv;
        accepted = true;
        break;
      }
    }
    if (!accepted) return {xi, val, iter};
  }
  throw NonConvergence(100, 0.0, "translation maximizer did not converge");
}

}  // namespace

double objective_q_gt_1(const SupportVector& h, const DiscreteMeasure& mu,
                        const AnisotropicNorm& F, double p, double q,
                        const MinkowskiConfig& cfg) {
  mu.validate();
  h.validate();
  require_same_atoms(h, mu);
  if (!(q > 1.0)) throw InvalidArgument("objective requires q > 1");
  const IterateEval ev = evaluate_iterate(h.values, mu, F, p, cfg, cfg.rel_h);
  return std::log(measure_term(mu, h.values, q)) / q -
         beta_constant(p) * std::log(ev.tau);
}

SolveOutcome solve_q_gt_1(const DiscreteMeasure& mu, const AnisotropicNorm& F,
                          double p, double q, const MinkowskiConfig& cfg) {
  mu.validate();
  if (!(p > 1.0) || !std::isfinite(p))
    throw InvalidArgument("solver requires 1 < p < infinity");
  if (!(q > 1.0)) throw InvalidArgument("this regime requires q > 1");
  const double excluded = tau_scaling_exponent(p);
  if (std::abs(q - excluded) <= 1e-9)
    throw ExcludedExponent("q equals the scaling-critical exponent n + p/(p-1)");

  const int N = mu.size();
  const double A = mu.total();
  const double beta = beta_constant(p);
  const double kappa = dual_and_wulff(F, cfg.dual_resolution).kappa;

  std::vector<double> h(N, 1.0);
  IterateEval ev = evaluate_iterate(h, mu, F, p, cfg, cfg.rel_h);
  const double diam0 = ev.diameter;
  h = ev.h_body;  // snap onto the body; tau and S_p are unchanged

  auto objective = [&](const std::vector<double>& hh, const IterateEval& e) {
    return std::log(measure_term(mu, hh, q)) / q - beta * std::log(e.tau);
  };

  SolveOutcome out;
  double psi = objective(h, ev);
  out.objective_trace.push_back(psi);
  out.volume_bound_ok = true;

  double step = 1.0;
  int iter = 0;
  for (; iter < cfg.max_outer; ++iter) {
    const std::vector<double> res = first_order_residuals(mu, h, ev, p, q);
    out.first_order_residual = *std::max_element(res.begin(), res.end());
    if (out.first_order_residual <= cfg.tol) {
      out.converged = true;
      break;
    }

    const double mterm = measure_term(mu, h, q);
    std::vector<double> g(N);
    double mean_g = 0.0;
    for (int k = 0; k < N; ++k) {
      g[k] = mu.weights[k] * std::pow(h[k], q) / mterm -
             beta * h[k] * ev.S_p[k] / ev.tau;
      mean_g += g[k] / N;
    }
    // Psi is exactly invariant under scaling of h; drop the gauge component.
    double gnorm2 = 0.0;
    for (int k = 0; k < N; ++k) {
      g[k] -= mean_g;
      gnorm2 += g[k] * g[k];
    }
    if (!(gnorm2 > 0.0)) {
      out.converged = true;  // exact stationary point
      break;
    }

    bool accepted = false;
    double t = step;
    for (int ls = 0; ls < 30; ++ls, t *= 0.5) {
      std::vector<double> trial(N);
      for (int k = 0; k < N; ++k)
        trial[k] = h[k] * std::exp(std::clamp(-t * g[k], -40.0, 40.0));
      IterateEval trial_ev = evaluate_iterate(trial, mu, F, p, cfg, cfg.rel_h);
      trial = trial_ev.h_body;
      const double trial_psi = objective(trial, trial_ev);
      if (trial_psi <= psi - 1e-4 * t * gnorm2) {
        h.swap(trial);
        ev = std::move(trial_ev);
        psi = trial_psi;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      out.converged = true;  // no descent direction left at this resolution
      break;
    }

    const double drop = out.objective_trace.back() - psi;
    out.objective_trace.push_back(psi);
    if (drop <= 1e-12 * std::max(1.0, std::abs(psi))) {
      ++iter;
      out.converged = true;  // progress fell below fp resolution
      break;
    }
    step = std::min(2.0 * t, 4.0);

    if (ev.diameter > 1e3 * diam0)
      throw NonConcentration("iterates grew unboundedly; measure too concentrated");
    if ((iter + 1) % 10 == 0) {
      const double v_at_mu = ev.area * std::pow(A / ev.tau, kDim / excluded);
      if (v_at_mu < 0.95 * volume_floor(A, p, kappa)) out.volume_bound_ok = false;
    }
  }
  out.iterations = iter;

  // Normalize tau to the measure's mass, then apply the critical-point
  // rescaling that turns the multiplier into 1.
  const double s1 = std::pow(A / ev.tau, 1.0 / excluded);
  for (double& v : h) v *= s1;
  const double c = beta * measure_term(mu, h, q) / A;
  const double s2 = std::pow(c, 1.0 / (excluded - q));
  for (double& v : h) v *= s2;

  IterateEval fin = evaluate_iterate(h, mu, F, p, cfg, cfg.verify_rel_h);
  const double perimeter = fin.shape.polygon.perimeter();
  for (int k = 0; k < N; ++k) {
    const int facet = fin.shape.facet_of_direction[k];
    const double len = facet >= 0 ? fin.shape.polygon.facet(facet).length : 0.0;
    if (len < 1e-8 * perimeter)
      throw DegenerateFacet(k, "an atom's facet vanished from the solution");
  }

  out.body = fin.shape.polygon;
  out.support = fin.h_body;
  out.lambda = 1.0;
  out.tau = fin.tau;
  out.residuals.resize(N);
  for (int k = 0; k < N; ++k) {
    const double S_pq = std::pow(fin.h_body[k], 1.0 - q) * fin.S_p[k];
    out.residuals[k] = std::abs(S_pq - mu.weights[k]) / mu.weights[k];
  }
  out.first_order_residual =
      *std::max_element(out.residuals.begin(), out.residuals.end());
  return out;
}

TranslateResult translate_maximize(const SupportVector& f, const DiscreteMeasure& mu,
                                   double q, double grad_tol) {
  mu.validate();
  f.validate();
  require_same_atoms(f, mu);
  if (!(q > 0.0) || !(q < 1.0))
    throw InvalidArgument("translation step requires 0 < q < 1");
  const WulffShape w = wulff_shape(f);
  return translate_newton(mu.directions, f.values, mu.weights, q,
                          w.polygon.centroid(), grad_tol);
}

SolveOutcome solve_0_lt_q_lt_1(const DiscreteMeasure& mu, const AnisotropicNorm& F,
                               double p, double q, const MinkowskiConfig& cfg) {
  mu.validate();
  if (!(p > 1.0) || !std::isfinite(p))
    throw InvalidArgument("solver requires 1 < p < infinity");
  if (!(q > 0.0) || !(q < 1.0)) throw InvalidArgument("this regime requires 0 < q < 1");

  const int N = mu.size();
  const double beta = beta_constant(p);
  const double scaling = tau_scaling_exponent(p);
  const double kappa = dual_and_wulff(F, cfg.dual_resolution).kappa;

  std::vector<double> h(N, 1.0);
  IterateEval ev = evaluate_iterate(h, mu, F, p, cfg, cfg.rel_h);
  const double diam0 = ev.diameter;

  // Snap onto the body and shift the origin to the maximizing translation;
  // both leave tau and the facet measures untouched.
  auto settle = [&](std::vector<double>& hh, IterateEval& e) {
    hh = e.h_body;
    const TranslateResult tr = translate_newton(mu.directions, hh, mu.weights, q,
                                                e.shape.polygon.centroid(), 1e-11);
    for (int k = 0; k < N; ++k) {
      const double shift = dot(tr.xi, mu.directions[k]);
      hh[k] -= shift;
      e.h_body[k] -= shift;
    }
    return tr.value;  // sum alpha h^q at the recentered support
  };

  auto reduced = [&](double G, const IterateEval& e) {
    return std::pow(e.tau, -q * beta) * G;
  };

  SolveOutcome out;
  double G = settle(h, ev);
  double Gt = reduced(G, ev);
  out.objective_trace.push_back(Gt);
  out.volume_bound_ok = true;

  double step = 1.0;
  int iter = 0;
  for (; iter < cfg.max_outer; ++iter) {
    const std::vector<double> res = first_order_residuals(mu, h, ev, p, q);
    out.first_order_residual = *std::max_element(res.begin(), res.end());
    if (out.first_order_residual <= cfg.tol) {
      out.converged = true;
      break;
    }

    std::vector<double> g(N);
    double gnorm2 = 0.0;
    const double scale_out = std::pow(ev.tau, -q * beta) * q;
    for (int k = 0; k < N; ++k) {
      g[k] = scale_out * (mu.weights[k] * std::pow(h[k], q) -
                          beta * G * h[k] * ev.S_p[k] / ev.tau);
      gnorm2 += g[k] * g[k];
    }
    if (!(gnorm2 > 0.0)) {
      out.converged = true;  // exact stationary point
      break;
    }

    bool accepted = false;
    double t = step;
    for (int ls = 0; ls < 30; ++ls, t *= 0.5) {
      std::vector<double> trial(N);
      for (int k = 0; k < N; ++k)
        trial[k] = h[k] * std::exp(std::clamp(-t * g[k], -40.0, 40.0));
      IterateEval trial_ev;
      try {
        trial_ev = evaluate_iterate(trial, mu, F, p, cfg, cfg.rel_h);
      } catch (const EmptyInterior&) {
        continue;  // stepped past the feasible cone; shorten
      }
      const double trial_G = settle(trial, trial_ev);
      const double trial_Gt = reduced(trial_G, trial_ev);
      if (trial_Gt <= Gt - 1e-4 * t * gnorm2) {
        h.swap(trial);
        ev = std::move(trial_ev);
        G = trial_G;
        Gt = trial_Gt;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      out.converged = true;  // no descent direction left at this resolution
      break;
    }

    const double drop = out.objective_trace.back() - Gt;
    out.objective_trace.push_back(Gt);
    if (drop <= 1e-12 * std::max(1.0, std::abs(Gt))) {
      ++iter;
      out.converged = true;  // progress fell below fp resolution
      break;
    }
    step = std::min(2.0 * t, 4.0);

    if (ev.diameter > 1e3 * diam0)
      throw NonConcentration("iterates grew unboundedly; measure too concentrated");
    if ((iter + 1) % 10 == 0) {
      const double v_normalized = ev.area * std::pow(ev.tau, -kDim / scaling);
      if (v_normalized < 0.95 * volume_floor(1.0, p, kappa))
        out.volume_bound_ok = false;
    }
  }
  out.iterations = iter;

  // Final normalization to tau = 1, measured on the finer verification mesh
  // and applied through exact homogeneity.
  const double s_pre = std::pow(ev.tau, -1.0 / scaling);
  for (double& v : h) v *= s_pre;
  IterateEval fin = evaluate_iterate(h, mu, F, p, cfg, cfg.verify_rel_h);
  const double s_fin = std::pow(fin.tau, -1.0 / scaling);
  for (double& v : h) v *= s_fin;
  for (double& v : fin.h_body) v *= s_fin;
  for (double& v : fin.S_p) v *= std::pow(s_fin, scaling - 1.0);
  fin.tau = 1.0;

  const WulffShape final_shape = wulff_shape(SupportVector{mu.directions, h});
  const double perimeter = final_shape.polygon.perimeter();
  for (int k = 0; k < N; ++k) {
    const int facet = final_shape.facet_of_direction[k];
    const double len = facet >= 0 ? final_shape.polygon.facet(facet).length : 0.0;
    if (len < 1e-8 * perimeter)
      throw DegenerateFacet(k, "an atom's facet vanished from the solution");
  }

  out.body = final_shape.polygon;
  out.support = h;
  out.lambda = beta * measure_term(mu, h, q);
  out.tau = 1.0;
  out.residuals.resize(N);
  for (int k = 0; k < N; ++k) {
    const double S_pq = std::pow(h[k], 1.0 - q) * fin.S_p[k];
    out.residuals[k] = std::abs(mu.weights[k] - out.lambda * S_pq) / mu.weights[k];
  }
  out.first_order_residual =
      *std::max_element(out.residuals.begin(), out.residuals.end());
  return out;
}

VerifyReport verify_solution(const SolveOutcome& outcome, const DiscreteMeasure& mu,
                             const AnisotropicNorm& F, double p, double q,
                             double rel_h) {
  mu.validate();
  if (outcome.support.size() != static_cast<size_t>(mu.size()))
    throw InvalidArgument("outcome does not match the measure");
  MinkowskiConfig cfg;
  const IterateEval ev = evaluate_iterate(outcome.support, mu, F, p, cfg, rel_h);

  VerifyReport report;
  report.tau = ev.tau;
  double tau_boundary = 0.0;
  for (int k = 0; k < mu.size(); ++k)
    tau_boundary += beta_constant(p) * ev.h_body[k] * ev.S_p[k];
  report.tau_gap = std::abs(ev.tau - tau_boundary) / ev.tau;
  report.residuals.resize(mu.size());
  for (int k = 0; k < mu.size(); ++k) {
    const double S_pq = std::pow(ev.h_body[k], 1.0 - q) * ev.S_p[k];
    report.residuals[k] =
        std::abs(mu.weights[k] - outcome.lambda * S_pq) / mu.weights[k];
  }
  report.max_residual =
      *std::max_element(report.residuals.begin(), report.residuals.end());
  return report;
}

}  // namespace ptorsion
