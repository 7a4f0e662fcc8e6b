#include "ptorsion/torsion.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

namespace ptorsion {

int assembly_threads() {
  static const int cap = [] {
    if (const char* env = std::getenv("TM_THREADS")) {
      const long n = std::strtol(env, nullptr, 10);
      if (n >= 1) return static_cast<int>(std::min(n, 64L));
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(std::min(hw, 16u)) : 1;
  }();
  return cap;
}

namespace {

// Element-level data of the P1 discretization.
struct Element {
  int n[3];
  double area;
  Vec2 grad[3];  // gradients of the three hat functions
};

struct Discretization {
  std::vector<Element> elements;
  std::vector<int> dof;          // node -> dof index, -1 on the boundary
  std::vector<int> dof_node;     // dof -> node
  std::vector<double> load;      // per dof, int of the hat function
  double load_norm = 0.0;
};

Discretization build_discretization(const TriangleMesh& mesh) {
  Discretization d;
  d.elements.reserve(mesh.triangles.size());
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Vec2 v0 = mesh.nodes[tri[0]];
    const Vec2 v1 = mesh.nodes[tri[1]];
    const Vec2 v2 = mesh.nodes[tri[2]];
    Element e;
    e.n[0] = tri[0];
    e.n[1] = tri[1];
    e.n[2] = tri[2];
    e.area = 0.5 * cross(v1 - v0, v2 - v0);
    if (!(e.area > 0.0)) throw MeshFailure("non-positive triangle area");
    const double inv = 1.0 / (2.0 * e.area);
    e.grad[0] = inv * perp(v2 - v1);
    e.grad[1] = inv * perp(v0 - v2);
    e.grad[2] = inv * perp(v1 - v0);
    d.elements.push_back(e);
  }

  const std::vector<bool> on_boundary = mesh.boundary_flags();
  d.dof.assign(mesh.nodes.size(), -1);
  for (int i = 0; i < mesh.node_count(); ++i) {
    if (!on_boundary[i]) {
      d.dof[i] = static_cast<int>(d.dof_node.size());
      d.dof_node.push_back(i);
    }
  }
  if (d.dof_node.empty()) throw MeshFailure("mesh has no interior nodes");

  d.load.assign(d.dof_node.size(), 0.0);
  for (const Element& e : d.elements)
    for (int s = 0; s < 3; ++s)
      if (d.dof[e.n[s]] >= 0) d.load[d.dof[e.n[s]]] += e.area / 3.0;
  double sq = 0.0;
  for (double v : d.load) sq += v * v;
  d.load_norm = std::sqrt(sq);
  return d;
}

// Integrand psi(g) = (eps^2 + F(g)^2)^(p/2) / p with gradient and Hessian.
// At g = 0 the gradient vanishes and the Hessian limit (eps^2)^(p/2-1) times
// half the Hessian of F^2 is used; for quadratic norms that limit is exact.
struct Integrand {
  const AnisotropicNorm* F;
  double p;
  double eps2;

  double value(Vec2 g) const {
    const double f = (*F)(g);
    return std::pow(eps2 + f * f, 0.5 * p) / p;
  }
  Vec2 gradient(Vec2 g) const {
    if (!(norm2(g) > 0.0)) return {0.0, 0.0};
    const double f = (*F)(g);
    return std::pow(eps2 + f * f, 0.5 * p - 1.0) * f * F->gradient(g);
  }
  Mat2 hessian(Vec2 g) const {
    if (!(norm2(g) > 0.0)) {
      const Vec2 fallback{1.0, 0.0};
      const Vec2 gf = F->gradient(fallback);
      const Mat2 Hf = F->hessian(fallback);
      const Mat2 half_hess_f2 = Mat2::outer(gf, gf) + (*F)(fallback)*Hf;
      return std::pow(eps2, 0.5 * p - 1.0) * half_hess_f2;
    }
    const double f = (*F)(g);
    const Vec2 gf = F->gradient(g);
    const Mat2 Hf = F->hessian(g);
    const double w = eps2 + f * f;
    return (p - 2.0) * std::pow(w, 0.5 * p - 2.0) * (f * f) * Mat2::outer(gf, gf) +
           std::pow(w, 0.5 * p - 1.0) * (Mat2::outer(gf, gf) + f * Hf);
  }
};

Vec2 element_gradient(const Element& e, const std::vector<double>& u) {
  return u[e.n[0]] * e.grad[0] + u[e.n[1]] * e.grad[1] + u[e.n[2]] * e.grad[2];
}

// Fixed-size blocks reduced in block order keep the sum independent of the
// thread count.
constexpr int kBlock = 8192;

template <typename PerBlock>
void run_blocks(int count, int blocks, const PerBlock& body) {
  const int threads = std::min(assembly_threads(), blocks);
  if (threads <= 1 || count < 4 * kBlock) {
    for (int b = 0; b < blocks; ++b) body(b);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (int b = w; b < blocks; b += threads) body(b);
    });
  }
  for (auto& th : pool) th.join();
}

double energy(const Discretization& d, const Integrand& psi,
              const std::vector<double>& u) {
  const int nt = static_cast<int>(d.elements.size());
  const int blocks = (nt + kBlock - 1) / kBlock;
  std::vector<double> partial(blocks, 0.0);
  run_blocks(nt, blocks, [&](int b) {
    double acc = 0.0;
    const int hi = std::min(nt, (b + 1) * kBlock);
    for (int t = b * kBlock; t < hi; ++t) {
      const Element& e = d.elements[t];
      acc += e.area * psi.value(element_gradient(e, u));
    }
    partial[b] = acc;
  });
  double bulk = 0.0;
  for (double v : partial) bulk += v;
  double forcing = 0.0;
  for (size_t i = 0; i < d.load.size(); ++i) forcing += d.load[i] * u[d.dof_node[i]];
  return bulk - forcing;
}

void gradient(const Discretization& d, const Integrand& psi,
              const std::vector<double>& u, Eigen::VectorXd& g) {
  const int nt = static_cast<int>(d.elements.size());
  const int nd = static_cast<int>(d.dof_node.size());
  const int blocks = (nt + kBlock - 1) / kBlock;
  std::vector<Eigen::VectorXd> partial(blocks);
  run_blocks(nt, blocks, [&](int b) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(nd);
    const int hi = std::min(nt, (b + 1) * kBlock);
    for (int t = b * kBlock; t < hi; ++t) {
      const Element& e = d.elements[t];
      const Vec2 dpsi = psi.gradient(element_gradient(e, u));
      for (int s = 0; s < 3; ++s) {
        const int i = d.dof[e.n[s]];
        if (i >= 0) acc[i] += e.area * dot(dpsi, e.grad[s]);
      }
    }
    partial[b].swap(acc);
  });
  g = Eigen::VectorXd::Zero(nd);
  for (const auto& part : partial) g += part;
  for (int i = 0; i < nd; ++i) g[i] -= d.load[i];
}

void hessian(const Discretization& d, const Integrand& psi,
             const std::vector<double>& u, Eigen::SparseMatrix<double>& H) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(d.elements.size() * 9);
  for (const Element& e : d.elements) {
    const Mat2 M = psi.hessian(element_gradient(e, u));
    for (int s = 0; s < 3; ++s) {
      const int i = d.dof[e.n[s]];
      if (i < 0) continue;
      const Vec2 Mg = M * e.grad[s];
      for (int r = 0; r < 3; ++r) {
        const int j = d.dof[e.n[r]];
        if (j >= 0) trips.emplace_back(i, j, e.area * dot(Mg, e.grad[r]));
      }
    }
  }
  H.setFromTriplets(trips.begin(), trips.end());
}

// 1D line minimization of t -> J(t * u) used to rescale the p = 2 warm start
// before Newton; the derivative is increasing in t, so bisect its sign change.
double best_scaling(const Discretization& d, const Integrand& psi,
                    const std::vector<double>& u) {
  double forcing = 0.0;
  for (size_t i = 0; i < d.load.size(); ++i) forcing += d.load[i] * u[d.dof_node[i]];
  auto deriv = [&](double t) {
    double acc = 0.0;
    for (const Element& e : d.elements) {
      const Vec2 g = element_gradient(e, u);
      acc += e.area * dot(psi.gradient(t * g), g);
    }
    return acc - forcing;
  };
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 60 && deriv(hi) < 0.0; ++i) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 50; ++i) {
    const double mid = 0.5 * (lo + hi);
    (deriv(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> newton_minimize(const Discretization& d, const Integrand& psi,
                                    std::vector<double> u, double tol, int max_iters,
                                    int* iterations, double* residual) {
  const int nd = static_cast<int>(d.dof_node.size());
  Eigen::SparseMatrix<double> H(nd, nd);
  Eigen::VectorXd g(nd), delta(nd);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;

  double E = energy(d, psi, u);
  int iter = 0;
  for (; iter < max_iters; ++iter) {
    gradient(d, psi, u, g);
    const double res = g.norm() / d.load_norm;
    *residual = res;
    if (res <= tol) {
      *iterations = iter;
      return u;
    }

    hessian(d, psi, u, H);
    double shift = 0.0;
    for (int attempt = 0;; ++attempt) {
      if (attempt > 0) {
        const double diag_scale = H.diagonal().cwiseAbs().mean();
        shift = (shift == 0.0 ? 1e-12 : shift * 100.0) * std::max(diag_scale, 1.0);
        Eigen::SparseMatrix<double> Hs = H;
        for (int i = 0; i < nd; ++i) Hs.coeffRef(i, i) += shift;
        solver.compute(Hs);
      } else {
        solver.compute(H);
      }
      if (solver.info() == Eigen::Success) {
        delta = solver.solve(-g);
        if (solver.info() == Eigen::Success && g.dot(delta) < 0.0) break;
      }
      if (attempt >= 6) throw IllConditioned("torsion Hessian factorization failed");
    }

    // Armijo backtracking with a small floating-point slack so steps near
    // machine precision of the energy are still accepted.
    const double gd = g.dot(delta);
    const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::abs(E);
    double t = 1.0;
    bool accepted = false;
    std::vector<double> trial = u;
    for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
      for (int i = 0; i < nd; ++i) trial[d.dof_node[i]] = u[d.dof_node[i]] + t * delta[i];
      const double Et = energy(d, psi, trial);
      if (Et <= E + 1e-4 * t * gd + slack) {
        u.swap(trial);
        E = Et;
        accepted = true;
        break;
      }
    }
    if (!accepted) throw IllConditioned("torsion line search failed to make progress");
  }
  gradient(d, psi, u, g);
  *residual = g.norm() / d.load_norm;
  *iterations = iter;
  if (*residual > tol)
    throw NonConvergence(iter, *residual, "torsion solver hit the iteration cap");
  return u;
}

}  // namespace

TorsionSolution solve_torsion(const ConvexPolygon& K, const AnisotropicNorm& F,
                              double p, const TriangleMesh& mesh, double epsilon,
                              double tol, int max_iters) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw InvalidArgument("torsion exponent requires 1 < p < infinity");
  if (!(epsilon > 0.0)) throw InvalidArgument("regularization epsilon must be positive");
  if (!(tol > 0.0)) throw InvalidArgument("solver tolerance must be positive");
  (void)K;

  const Discretization d = build_discretization(mesh);
  const Integrand psi{&F, p, epsilon * epsilon};

  std::vector<double> u(mesh.nodes.size(), 0.0);
  int total_iters = 0;
  double residual = 0.0;

  if (p != 2.0) {
    // Warm start: solve the quadratic p = 2 problem for the same norm, then
    // rescale along that field before running Newton at the target exponent.
    const Integrand psi2{&F, 2.0, epsilon * epsilon};
    int warm_iters = 0;
    double warm_res = 0.0;
    u = newton_minimize(d, psi2, std::move(u), std::max(tol, 1e-10), max_iters,
                        &warm_iters, &warm_res);
    const double t = best_scaling(d, psi, u);
    for (double& v : u) v *= t;
    total_iters += warm_iters;
  }

  int iters = 0;
  u = newton_minimize(d, psi, std::move(u), tol, max_iters, &iters, &residual);
  total_iters += iters;

  TorsionSolution sol;
  sol.nodal_values = std::move(u);
  sol.element_gradients.reserve(d.elements.size());
  for (const Element& e : d.elements)
    sol.element_gradients.push_back(element_gradient(e, sol.nodal_values));
  sol.energy = energy(d, psi, sol.nodal_values);
  sol.epsilon = epsilon;
  sol.iterations = total_iters;
  sol.residual = residual;
  return sol;
}

std::vector<FacetFlux> boundary_flux(const ConvexPolygon& K, const AnisotropicNorm& F,
                                     double p, const TriangleMesh& mesh,
                                     const TorsionSolution& sol) {
  if (sol.element_gradients.size() != mesh.triangles.size())
    throw InvalidArgument("solution does not match the mesh");
  std::vector<FacetFlux> flux(K.facet_count());
  for (int k = 0; k < K.facet_count(); ++k) flux[k].facet = k;
  for (const BoundaryEdge& e : mesh.boundary_edges) {
    if (e.facet < 0 || e.facet >= K.facet_count())
      throw InvalidArgument("boundary edge facet out of range");
    const double len = norm(mesh.nodes[e.b] - mesh.nodes[e.a]);
    const double f = F(sol.element_gradients[e.triangle]);
    const double density = std::pow(f, p);
    FacetFlux& fl = flux[e.facet];
    fl.samples.push_back(density);
    fl.edge_lengths.push_back(len);
    fl.integral += len * density;
  }
  return flux;
}

}  // namespace ptorsion
