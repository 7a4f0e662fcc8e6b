#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ptorsion/minkowski.hpp"

namespace py = pybind11;
using namespace ptorsion;

namespace {

using PyPoint = std::pair<double, double>;

Vec2 to_vec(const PyPoint& p) { return {p.first, p.second}; }
PyPoint to_pair(Vec2 v) { return {v.x, v.y}; }

std::vector<Vec2> to_vecs(const std::vector<PyPoint>& pts) {
  std::vector<Vec2> out;
  out.reserve(pts.size());
  for (const PyPoint& p : pts) out.push_back(to_vec(p));
  return out;
}

std::vector<PyPoint> to_pairs(const std::vector<Vec2>& vs) {
  std::vector<PyPoint> out;
  out.reserve(vs.size());
  for (Vec2 v : vs) out.push_back(to_pair(v));
  return out;
}

AnisotropicNorm norm_or_euclidean(const AnisotropicNorm* F) {
  return F ? *F : AnisotropicNorm::euclidean();
}

py::dict outcome_dict(const SolveOutcome& out) {
  py::dict d;
  d["vertices"] = to_pairs(out.body.vertices());
  d["support"] = out.support;
  d["lambda"] = out.lambda;
  d["residuals"] = out.residuals;
  d["first_order_residual"] = out.first_order_residual;
  d["iterations"] = out.iterations;
  d["objective_trace"] = out.objective_trace;
  d["converged"] = out.converged;
  d["tau"] = out.tau;
  d["volume_bound_ok"] = out.volume_bound_ok;
  return d;
}

}  // namespace

PYBIND11_MODULE(_ptorsion, m) {
  m.doc() = "Planar anisotropic p-torsion: rigidity, L_q torsional measures, "
            "and discrete L_q Minkowski solvers";

  py::register_exception<Error>(m, "Error");

  py::class_<ConvexPolygon>(m, "ConvexPolygon")
      .def_static(
          "from_vertices",
          [](const std::vector<PyPoint>& verts) {
            return ConvexPolygon::from_vertices(to_vecs(verts));
          },
          py::arg("vertices"),
          "Build a strictly convex polygon from counterclockwise vertices")
      .def("vertices",
           [](const ConvexPolygon& K) { return to_pairs(K.vertices()); })
      .def("facet_count", &ConvexPolygon::facet_count)
      .def("area", &ConvexPolygon::area)
      .def("perimeter", &ConvexPolygon::perimeter)
      .def("diameter", &ConvexPolygon::diameter)
      .def("centroid",
           [](const ConvexPolygon& K) { return to_pair(K.centroid()); })
      .def("origin_margin", &ConvexPolygon::origin_margin)
      .def(
          "contains",
          [](const ConvexPolygon& K, const PyPoint& x, double tol) {
            return K.contains(to_vec(x), tol);
          },
          py::arg("x"), py::arg("tol") = 0.0)
      .def(
          "support",
          [](const ConvexPolygon& K, const PyPoint& x) {
            return support_function(K, to_vec(x));
          },
          py::arg("x"), "Support function h_K evaluated at x");

  py::class_<AnisotropicNorm>(m, "Norm")
      .def_static("euclidean", &AnisotropicNorm::euclidean)
      .def_static(
          "ellipse",
          [](const std::vector<std::vector<double>>& A) {
            if (A.size() != 2 || A[0].size() != 2 || A[1].size() != 2)
              throw InvalidArgument("ellipse norm needs a 2x2 matrix");
            return AnisotropicNorm::ellipse({A[0][0], A[0][1], A[1][0], A[1][1]});
          },
          py::arg("A"), "sqrt(x . A x) for symmetric positive definite A")
      .def_static("smoothed_ls", &AnisotropicNorm::smoothed_ls, py::arg("s"),
                  py::arg("delta") = 1e-3,
                  "C^2 regularization of the l_s norm, s >= 2")
      .def("__call__",
           [](const AnisotropicNorm& F, const PyPoint& x) { return F(to_vec(x)); })
      .def("gradient", [](const AnisotropicNorm& F, const PyPoint& x) {
        return to_pair(F.gradient(to_vec(x)));
      });

  m.def(
      "regular_polygon",
      [](int sides, double circumradius, double phase) {
        return regular_polygon(sides, circumradius, phase);
      },
      py::arg("sides"), py::arg("circumradius") = 1.0, py::arg("phase") = 0.0);
  m.def(
      "translate",
      [](const ConvexPolygon& K, const PyPoint& t) {
        return translate(K, to_vec(t));
      },
      py::arg("K"), py::arg("t"));
  m.def("scale", &scale, py::arg("K"), py::arg("s"));
  m.def("hausdorff_distance", &hausdorff_distance, py::arg("K"), py::arg("L"));
  m.def("beta_constant", &beta_constant, py::arg("p"), py::arg("n") = kDim,
        "(p-1)/(n(p-1)+p)");
  m.def("tau_scaling_exponent", &tau_scaling_exponent, py::arg("p"),
        py::arg("n") = kDim);

  m.def(
      "wulff_shape",
      [](const std::vector<PyPoint>& directions, const std::vector<double>& values) {
        const WulffShape w = wulff_shape(SupportVector{to_vecs(directions), values});
        return py::make_tuple(w.polygon, w.facet_of_direction);
      },
      py::arg("directions"), py::arg("values"),
      "Intersection of half-planes <x,u> <= f; returns (polygon, facet per "
      "direction, -1 when inactive)");

  m.def(
      "compute_torsion",
      [](const ConvexPolygon& K, const AnisotropicNorm* F, double p,
         double target_h, double rel_h, double epsilon, double tol) {
        PipelineConfig cfg;
        cfg.target_h = target_h;
        cfg.rel_h = rel_h;
        cfg.epsilon = epsilon;
        cfg.tol = tol;
        const TorsionAnalysis ta = compute_torsion(K, norm_or_euclidean(F), p, cfg);
        py::dict d;
        d["tau_volume"] = ta.report.tau_volume;
        d["tau_boundary"] = ta.report.tau_boundary;
        d["relative_gap"] = ta.report.relative_gap;
        d["p"] = ta.report.p;
        d["max_u"] = ta.max_u;
        d["nodes"] = ta.mesh.node_count();
        d["triangles"] = ta.mesh.triangle_count();
        return d;
      },
      py::arg("K"), py::arg("F") = nullptr, py::arg("p") = 2.0,
      py::arg("target_h") = 0.0, py::arg("rel_h") = 0.01,
      py::arg("epsilon") = -1.0, py::arg("tol") = 1e-8,
      "Mesh K, solve the torsion problem, and report tau by both formulas");

  m.def(
      "lq_measure",
      [](const ConvexPolygon& K, const AnisotropicNorm* F, double p, double q,
         bool prefactor, double target_h, double rel_h, double tol) {
        PipelineConfig cfg;
        cfg.target_h = target_h;
        cfg.rel_h = rel_h;
        cfg.tol = tol;
        const AnisotropicNorm norm = norm_or_euclidean(F);
        const TorsionAnalysis ta = compute_torsion(K, norm, p, cfg);
        const FacetMeasure fm =
            lq_torsional_measure(K, norm, p, q, ta.mesh, ta.solution, prefactor);
        py::list facets;
        for (const FacetMeasureEntry& f : fm.facets) {
          py::dict e;
          e["normal"] = to_pair(f.normal);
          e["h"] = f.h;
          e["length"] = f.length;
          e["S_p"] = f.S_p;
          e["S_pq"] = f.S_pq;
          facets.append(e);
        }
        py::dict d;
        d["facets"] = facets;
        d["tau_volume"] = ta.report.tau_volume;
        d["tau_boundary"] = ta.report.tau_boundary;
        d["p"] = fm.p;
        d["q"] = fm.q;
        d["total_S_p"] = fm.total_S_p;
        d["total_S_pq"] = fm.total_S_pq;
        return d;
      },
      py::arg("K"), py::arg("F") = nullptr, py::arg("p") = 2.0,
      py::arg("q") = 1.0, py::arg("prefactor") = false, py::arg("target_h") = 0.0,
      py::arg("rel_h") = 0.01, py::arg("tol") = 1e-8,
      "Per-facet L_q torsional measure of K");

  m.def(
      "solve_minkowski",
      [](const std::vector<PyPoint>& directions, const std::vector<double>& weights,
         const AnisotropicNorm* F, double p, double q, double rel_h,
         double verify_rel_h, double tol, int max_outer) {
        const DiscreteMeasure mu{to_vecs(directions), weights};
        MinkowskiConfig cfg;
        cfg.rel_h = rel_h;
        cfg.verify_rel_h = verify_rel_h;
        cfg.tol = tol;
        cfg.max_outer = max_outer;
        const AnisotropicNorm norm = norm_or_euclidean(F);
        if (!(q > 0.0) || q == 1.0)
          throw InvalidArgument("q must be positive and different from 1");
        const SolveOutcome out = q > 1.0 ? solve_q_gt_1(mu, norm, p, q, cfg)
                                         : solve_0_lt_q_lt_1(mu, norm, p, q, cfg);
        return outcome_dict(out);
      },
      py::arg("directions"), py::arg("weights"), py::arg("F") = nullptr,
      py::arg("p") = 2.0, py::arg("q") = 2.0, py::arg("rel_h") = 0.02,
      py::arg("verify_rel_h") = 0.01, py::arg("tol") = 1e-3,
      py::arg("max_outer") = 200,
      "Solve the discrete L_q Minkowski problem for atoms (directions, weights)");
}
