#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <doctest.h>

#include "fixtures.hpp"
#include "ptorsion/io.hpp"

using namespace ptorsion;
namespace fs = std::filesystem;

namespace {

// scratch space shared by the cases in this file, wiped on first use
const fs::path& work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "ptorsion_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

// Runs the CLI with the given arguments (shell syntax), capturing both streams.
RunResult run_cli(const std::string& args, const std::string& env = "") {
  static int counter = 0;
  const fs::path out = work_dir() / ("stdout_" + std::to_string(counter) + ".txt");
  const fs::path err = work_dir() / ("stderr_" + std::to_string(counter) + ".txt");
  ++counter;
  const std::string cmd = env + (env.empty() ? "" : " ") + PTORSION_CLI_PATH + " " +
                          args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

fs::path write_doc(const std::string& name, const std::string& content) {
  const fs::path p = work_dir() / name;
  write_text_file(p.string(), content);
  return p;
}

fs::path square_file() {
  static const fs::path p =
      write_doc("square.json", dump_json(polygon_to_json(fixtures::square())));
  return p;
}

fs::path cross_measure_file() {
  static const fs::path p = [] {
    DiscreteMeasure mu;
    mu.directions = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    mu.weights = {1.0, 1.0, 1.0, 1.0};
    return write_doc("cross.json", dump_json(measure_to_json(mu)));
  }();
  return p;
}

}  // namespace

TEST_CASE("help runs clean and documents the exit codes") {
  const RunResult r = run_cli("--help");
  CHECK(r.exit_code == 0);
  for (const char* needle : {"solve-torsion", "compute-measure", "solve-minkowski",
                             "verify", "TM_THREADS", "Exit codes"})
    CHECK(r.out.find(needle) != std::string::npos);
}

TEST_CASE("solve-torsion reports both representations of tau") {
  const RunResult r =
      run_cli("solve-torsion " + square_file().string() + " --mesh-h 0.08");
  REQUIRE(r.exit_code == 0);
  CHECK(r.err.empty());
  const Json j = parse_json_text(r.out);
  CHECK(j.size() == 4);
  const double tv = j["tau_volume"].get<double>();
  const double tb = j["tau_boundary"].get<double>();
  CHECK(std::abs(tv - 0.5625) < 0.01);
  CHECK(j["relative_gap"].get<double>() ==
        doctest::Approx(std::abs(tv - tb) / tv).epsilon(1e-12));
  CHECK(j["p"].get<double>() == 2.0);
}

TEST_CASE("outputs are byte-identical across runs and thread counts") {
  const std::string args =
      "solve-torsion " + square_file().string() + " --mesh-h 0.1 --p 3";
  const RunResult a = run_cli(args, "TM_THREADS=1");
  const RunResult b = run_cli(args, "TM_THREADS=1");
  const RunResult c = run_cli(args, "TM_THREADS=8");
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  CHECK(!a.out.empty());
}

TEST_CASE("an --out path writes the report and the nodal field") {
  const fs::path out = work_dir() / "report.json";
  const fs::path field = work_dir() / "report.field.csv";
  const RunResult r = run_cli("solve-torsion " + square_file().string() +
                              " --mesh-h 0.2 --out " + out.string());
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.empty());
  REQUIRE(fs::exists(out));
  REQUIRE(fs::exists(field));
  const Json j = parse_json_text(slurp(out));
  CHECK(j.contains("tau_volume"));
  const std::string csv = slurp(field);
  CHECK(csv.rfind("x,y,u\n", 0) == 0);
}

TEST_CASE("malformed input exits 1 with a json error and no partial output") {
  const fs::path bad = write_doc("broken.json", "{\"vertices\": [[0,0], ");
  const fs::path out = work_dir() / "never_written.json";
  const RunResult r =
      run_cli("solve-torsion " + bad.string() + " --out " + out.string());
  CHECK(r.exit_code == 1);
  CHECK(r.out.empty());
  CHECK(!fs::exists(out));
  const Json e = parse_json_text(r.err);
  CHECK(e["error"] == "parse");
  CHECK(e.contains("message"));
  CHECK(r.err.find('\n') == r.err.size() - 1);
}

TEST_CASE("missing input file exits 1") {
  const RunResult r = run_cli("solve-torsion /no/such/file.json");
  CHECK(r.exit_code == 1);
  CHECK(parse_json_text(r.err)["error"] == "parse");
}

TEST_CASE("unknown flags exit 1 with a json parse error") {
  const RunResult r = run_cli("solve-torsion " + square_file().string() + " --frobnicate");
  CHECK(r.exit_code == 1);
  CHECK(parse_json_text(r.err)["error"] == "parse");
}

TEST_CASE("precondition violations exit 2") {
  const RunResult r =
      run_cli("solve-torsion " + square_file().string() + " --p 1 --mesh-h 0.3");
  CHECK(r.exit_code == 2);
  CHECK(parse_json_text(r.err)["error"] == "invalid_argument");

  // q != 1 needs the origin strictly inside the body
  const fs::path shifted = write_doc(
      "shifted.json",
      dump_json(polygon_to_json(translate(fixtures::square(), {5.0, 0.0}))));
  const RunResult r2 =
      run_cli("compute-measure " + shifted.string() + " --q 2 --mesh-h 0.3");
  CHECK(r2.exit_code == 2);
  CHECK(parse_json_text(r2.err)["error"] == "origin_not_interior");
}

TEST_CASE("the prefactor flag scales every S_pq by beta") {
  const std::string base =
      "compute-measure " + square_file().string() + " --q 2 --p 2 --mesh-h 0.1";
  const RunResult plain = run_cli(base);
  const RunResult scaled = run_cli(base + " --prefactor");
  REQUIRE(plain.exit_code == 0);
  REQUIRE(scaled.exit_code == 0);
  const Json jp = parse_json_text(plain.out);
  const Json js = parse_json_text(scaled.out);
  REQUIRE(jp["facets"].size() == 4);
  for (size_t k = 0; k < 4; ++k) {
    const double ratio = js["facets"][k]["S_pq"].get<double>() /
                         jp["facets"][k]["S_pq"].get<double>();
    CHECK(ratio == doctest::Approx(0.25).epsilon(1e-12));
    // density definition against the q = 1 data in the same report
    const double h = jp["facets"][k]["h"].get<double>();
    CHECK(jp["facets"][k]["S_pq"].get<double>() ==
          doctest::Approx(jp["facets"][k]["S_p"].get<double>() / h).epsilon(1e-12));
  }
}

TEST_CASE("solve-minkowski emits the outcome document") {
  const fs::path out = work_dir() / "outcome.json";
  const RunResult r = run_cli("solve-minkowski " + cross_measure_file().string() +
                              " --q 2 --mesh-h 0.04 --tol 5e-3 --out " + out.string());
  REQUIRE(r.exit_code == 0);
  const Json j = parse_json_text(slurp(out));
  CHECK(j.size() == 5);
  for (const char* key :
       {"vertices", "lambda", "residuals", "iterations", "objective_trace"})
    CHECK(j.contains(key));
  CHECK(j["lambda"].get<double>() == 1.0);
  REQUIRE(j["residuals"].size() == 4);
  for (const auto& res : j["residuals"]) CHECK(res.get<double>() < 0.05);
  const std::string trace = slurp(work_dir() / "outcome.trace.csv");
  CHECK(trace.rfind("iter,objective\n", 0) == 0);
}

TEST_CASE("unsupported measure exponents are refused") {
  const std::string in = cross_measure_file().string();
  const RunResult q1 = run_cli("solve-minkowski " + in + " --q 1");
  CHECK(q1.exit_code == 2);
  CHECK(parse_json_text(q1.err)["error"] == "invalid_argument");

  const RunResult q0 = run_cli("solve-minkowski " + in + " --q 0");
  CHECK(q0.exit_code == 2);
  CHECK(parse_json_text(q0.err)["error"] == "invalid_argument");

  const RunResult neg = run_cli("solve-minkowski " + in + " --q -2");
  CHECK(neg.exit_code == 2);

  // q = n + p/(p-1) sits outside both solvable regimes
  const RunResult ex = run_cli("solve-minkowski " + in + " --q 4");
  CHECK(ex.exit_code == 2);
  CHECK(parse_json_text(ex.err)["error"] == "excluded_exponent");
}

TEST_CASE("measures concentrated on a half-circle are refused") {
  DiscreteMeasure half;
  half.directions = {{1.0, 0.0}, {0.0, 1.0}, {std::sqrt(0.5), std::sqrt(0.5)}};
  half.weights = {1.0, 1.0, 1.0};
  const fs::path in = write_doc("half.json", dump_json(measure_to_json(half)));
  const RunResult r = run_cli("solve-minkowski " + in.string() + " --q 2");
  CHECK(r.exit_code == 2);
  CHECK(parse_json_text(r.err)["error"] == "non_concentration");
}

TEST_CASE("the quick verify suite passes end to end") {
  const RunResult r = run_cli("verify --quick --seed 7");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.rfind("check,fixture,norm,p,q,beta,value,threshold,pass", 0) == 0);
  CHECK(r.out.find(",pass\n") != std::string::npos);
  CHECK(r.out.find(",fail\n") == std::string::npos);
}
