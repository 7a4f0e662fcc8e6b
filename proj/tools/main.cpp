#include <algorithm>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ptorsion/io.hpp"
#include "verify.hpp"

namespace {

using namespace ptorsion;

AnisotropicNorm load_norm(const std::string& arg) {
  if (arg.empty() || arg == "euclidean") return AnisotropicNorm::euclidean();
  if (arg.front() == '{') return norm_from_json(parse_json_text(arg));
  return norm_from_json(parse_json_file(arg));
}

// "report.json" -> "report.trace.csv" etc., for companion outputs
std::string sibling_path(const std::string& out, const std::string& suffix) {
  const size_t dot = out.find_last_of('.');
  const size_t slash = out.find_last_of("/\\");
  const bool has_ext = dot != std::string::npos &&
                       (slash == std::string::npos || dot > slash);
  return (has_ext ? out.substr(0, dot) : out) + suffix;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty())
    std::cout << text;
  else
    write_text_file(out_path, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "ptorsion: anisotropic p-torsional rigidity, L_q torsional measures, and "
      "the discrete L_q Minkowski problem on planar convex bodies"};
  app.require_subcommand(1);
  app.footer(
      "Exit codes: 0 success, 1 parse error, 2 precondition violation,\n"
      "3 solver non-convergence or failed verification.\n"
      "Errors are reported as one-line JSON {\"error\", \"message\"} on stderr.\n"
      "TM_THREADS caps assembly parallelism.  File schemas are documented in\n"
      "README.md; all outputs are deterministic for fixed inputs and flags.");

  int exit_code = 0;

  std::string st_input, st_norm = "euclidean", st_out;
  double st_p = 2.0, st_h = 0.0, st_tol = 1e-8;
  CLI::App* st = app.add_subcommand(
      "solve-torsion", "Solve the torsion problem on a polygon; report tau by "
                       "the volume and boundary formulas");
  st->add_option("input", st_input, "polygon JSON {\"vertices\": [[x,y],...]}")
      ->required();
  st->add_option("--norm", st_norm,
                 "norm config: 'euclidean', a JSON file path, or inline JSON");
  st->add_option("--p", st_p, "exponent p in (1, inf)")->capture_default_str();
  st->add_option("--mesh-h", st_h, "absolute mesh pitch; 0 = 1% of the diameter")
      ->capture_default_str();
  st->add_option("--tol", st_tol, "PDE solver gradient tolerance")
      ->capture_default_str();
  st->add_option("--out", st_out,
                 "report JSON path (stdout if omitted); also writes the nodal "
                 "field to <out>.field.csv");
  st->callback([&] {
    const ConvexPolygon K = polygon_from_json(parse_json_file(st_input));
    const AnisotropicNorm F = load_norm(st_norm);
    PipelineConfig pc;
    pc.target_h = st_h;
    pc.tol = st_tol;
    const TorsionAnalysis ta = compute_torsion(K, F, st_p, pc);
    const std::string report = dump_json(torsion_report_to_json(ta.report));
    if (st_out.empty()) {
      std::cout << report;
      return;
    }
    std::string field = "x,y,u\n";
    for (int i = 0; i < ta.mesh.node_count(); ++i) {
      field += format_double(ta.mesh.nodes[i].x) + ',';
      field += format_double(ta.mesh.nodes[i].y) + ',';
      field += format_double(ta.solution.nodal_values[i]) + '\n';
    }
    write_text_file(st_out, report);
    write_text_file(sibling_path(st_out, ".field.csv"), field);
  });

  std::string cm_input, cm_norm = "euclidean", cm_out;
  double cm_p = 2.0, cm_q = 1.0, cm_h = 0.0, cm_tol = 1e-8;
  bool cm_prefactor = false;
  CLI::App* cm = app.add_subcommand(
      "compute-measure", "Compute the L_q torsional measure of a polygon's facets");
  cm->add_option("input", cm_input, "polygon JSON {\"vertices\": [[x,y],...]}")
      ->required();
  cm->add_option("--norm", cm_norm,
                 "norm config: 'euclidean', a JSON file path, or inline JSON");
  cm->add_option("--p", cm_p, "exponent p in (1, inf)")->capture_default_str();
  cm->add_option("--q", cm_q, "measure exponent, nonzero; origin must be "
                              "interior when q != 1")
      ->capture_default_str();
  cm->add_option("--mesh-h", cm_h, "absolute mesh pitch; 0 = 1% of the diameter")
      ->capture_default_str();
  cm->add_option("--tol", cm_tol, "PDE solver gradient tolerance")
      ->capture_default_str();
  cm->add_flag("--prefactor", cm_prefactor,
               "multiply S_pq by (p-1)/(n(p-1)+p), the alternative "
               "normalization of the measure");
  cm->add_option("--out", cm_out, "measure JSON path (stdout if omitted)");
  cm->callback([&] {
    const ConvexPolygon K = polygon_from_json(parse_json_file(cm_input));
    const AnisotropicNorm F = load_norm(cm_norm);
    PipelineConfig pc;
    pc.target_h = cm_h;
    pc.tol = cm_tol;
    const TorsionAnalysis ta = compute_torsion(K, F, cm_p, pc);
    const FacetMeasure m = lq_torsional_measure(K, F, cm_p, cm_q, ta.mesh,
                                                ta.solution, cm_prefactor);
    emit(cm_out, dump_json(measure_report_to_json(m, ta.report)));
  });

  std::string mk_input, mk_norm = "euclidean", mk_out;
  double mk_p = 2.0, mk_q = 0.0, mk_h = 0.02, mk_tol = 1e-3;
  CLI::App* mk = app.add_subcommand(
      "solve-minkowski", "Solve the discrete L_q Minkowski problem for a "
                         "finitely supported measure");
  mk->add_option("input", mk_input,
                 "measure JSON {\"atoms\": [{\"direction\": [x,y], \"weight\": a},...]}")
      ->required();
  mk->add_option("--norm", mk_norm,
                 "norm config: 'euclidean', a JSON file path, or inline JSON");
  mk->add_option("--p", mk_p, "exponent p in (1, inf)")->capture_default_str();
  mk->add_option("--q", mk_q,
                 "measure exponent; q > 1 and 0 < q < 1 regimes are supported")
      ->required();
  mk->add_option("--mesh-h", mk_h,
                 "mesh pitch of iterate solves, relative to the body diameter")
      ->capture_default_str();
  mk->add_option("--tol", mk_tol, "first-order residual target")
      ->capture_default_str();
  mk->add_option("--out", mk_out,
                 "outcome JSON path (stdout if omitted); also writes the "
                 "objective trace to <out>.trace.csv");
  mk->callback([&] {
    const DiscreteMeasure mu = measure_from_json(parse_json_file(mk_input));
    const AnisotropicNorm F = load_norm(mk_norm);
    if (!(mk_q > 0.0))
      throw InvalidArgument("q must be positive; the q <= 0 regimes are not solvable here");
    if (mk_q == 1.0)
      throw InvalidArgument("q = 1 is the classical case and is out of scope; "
                            "use q > 1 or 0 < q < 1");
    MinkowskiConfig mc;
    mc.rel_h = mk_h;
    mc.verify_rel_h = std::min(0.01, 0.75 * mk_h);
    mc.tol = mk_tol;
    const SolveOutcome outcome = mk_q > 1.0
                                     ? solve_q_gt_1(mu, F, mk_p, mk_q, mc)
                                     : solve_0_lt_q_lt_1(mu, F, mk_p, mk_q, mc);
    const std::string json = dump_json(outcome_to_json(outcome));
    if (mk_out.empty()) {
      std::cout << json;
      return;
    }
    std::string trace = "iter,objective\n";
    for (size_t i = 0; i < outcome.objective_trace.size(); ++i)
      trace += std::to_string(i) + ',' + format_double(outcome.objective_trace[i]) + '\n';
    write_text_file(mk_out, json);
    write_text_file(sibling_path(mk_out, ".trace.csv"), trace);
  });

  bool vf_quick = false;
  unsigned vf_seed = 7;
  std::string vf_out;
  CLI::App* vf = app.add_subcommand(
      "verify", "Run the invariant suite (homogeneity, translation, two-formula, "
                "Radon-Nikodym, Polya-Szego, variational derivative) over the "
                "built-in fixtures");
  vf->add_flag("--quick", vf_quick, "coarse sub-minute subset");
  vf->add_option("--seed", vf_seed, "seed for the random fixture and translations")
      ->capture_default_str();
  vf->add_option("--out", vf_out, "CSV path (stdout if omitted)");
  vf->callback([&] {
    const std::vector<verify::CheckRow> rows = verify::run_suite(vf_quick, vf_seed);
    emit(vf_out, verify::to_csv(rows));
    if (!verify::all_passed(rows)) exit_code = 3;
  });

  try {
    app.parse(argc, argv);
    return exit_code;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    const ParseError wrapped(e.what());
    std::cerr << error_json(wrapped);
    return wrapped.exit_code();
  } catch (const Error& e) {
    std::cerr << error_json(e);
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "{\"error\": \"internal\", \"message\": \"unexpected failure\"}\n";
    return 3;
  }
}
