#include "ptorsion/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ptorsion {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

void append_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

bool needs_multiline(const Json& arr) {
  for (const Json& e : arr)
    if (e.is_object()) return true;
  return false;
}

void write_value(std::string& out, const Json& j, int depth) {
  const std::string pad(2 * static_cast<size_t>(depth), ' ');
  const std::string pad_in(2 * static_cast<size_t>(depth + 1), ' ');
  switch (j.type()) {
    case Json::value_t::null: out += "null"; break;
    case Json::value_t::boolean: out += j.get<bool>() ? "true" : "false"; break;
    case Json::value_t::number_integer:
      out += std::to_string(j.get<long long>());
      break;
    case Json::value_t::number_unsigned:
      out += std::to_string(j.get<unsigned long long>());
      break;
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      if (!std::isfinite(x)) throw InvalidArgument("non-finite number in JSON output");
      out += format_double(x);
      break;
    }
    case Json::value_t::string: append_escaped(out, j.get<std::string>()); break;
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
      } else if (needs_multiline(j)) {
        out += "[\n";
        for (size_t i = 0; i < j.size(); ++i) {
          out += pad_in;
          write_value(out, j[i], depth + 1);
          if (i + 1 < j.size()) out += ',';
          out += '\n';
        }
        out += pad + "]";
      } else {
        out += '[';
        for (size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          write_value(out, j[i], depth + 1);
        }
        out += ']';
      }
      break;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      size_t i = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        out += pad_in;
        append_escaped(out, it.key());
        out += ": ";
        write_value(out, it.value(), depth + 1);
        if (i + 1 < j.size()) out += ',';
        out += '\n';
      }
      out += pad + "}";
      break;
    }
    default:
      throw InvalidArgument("unsupported JSON value type");
  }
}

const Json& expect_key(const Json& j, const char* key) {
  if (!j.is_object()) throw ParseError("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end())
    throw ParseError(std::string("missing required key \"") + key + "\"");
  return *it;
}

double expect_number(const Json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string(what) + " must be a number");
  return j.get<double>();
}

int expect_int(const Json& j, const char* what) {
  if (!j.is_number_integer())
    throw ParseError(std::string(what) + " must be an integer");
  return j.get<int>();
}

Vec2 expect_vec2(const Json& j, const char* what) {
  if (!j.is_array() || j.size() != 2)
    throw ParseError(std::string(what) + " must be a pair [x, y]");
  return {expect_number(j[0], what), expect_number(j[1], what)};
}

}  // namespace

std::string dump_json(const Json& j) {
  std::string out;
  write_value(out, j, 0);
  out += '\n';
  return out;
}

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  }
}

Json parse_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str());
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot open for writing: " + path);
  out << content;
  if (!out) throw InvalidArgument("failed writing: " + path);
}

std::string error_json(const Error& e) {
  std::string out = "{";
  append_escaped(out, "error");
  out += ": ";
  append_escaped(out, e.code());
  out += ", ";
  append_escaped(out, "message");
  out += ": ";
  append_escaped(out, e.what());
  out += "}\n";
  return out;
}

Json polygon_to_json(const ConvexPolygon& K) {
  Json verts = Json::array();
  for (const Vec2& v : K.vertices()) verts.push_back(Json::array({v.x, v.y}));
  return Json{{"vertices", verts}};
}

ConvexPolygon polygon_from_json(const Json& j) {
  const Json& arr = expect_key(j, "vertices");
  if (!arr.is_array()) throw ParseError("\"vertices\" must be an array");
  std::vector<Vec2> verts;
  verts.reserve(arr.size());
  for (const Json& v : arr) verts.push_back(expect_vec2(v, "vertex"));
  return ConvexPolygon::from_vertices(std::move(verts));
}

Json support_vector_to_json(const SupportVector& f) {
  Json dirs = Json::array();
  for (const Vec2& u : f.directions) dirs.push_back(Json::array({u.x, u.y}));
  Json vals = Json::array();
  for (double v : f.values) vals.push_back(v);
  return Json{{"directions", dirs}, {"values", vals}};
}

SupportVector support_vector_from_json(const Json& j) {
  const Json& dirs = expect_key(j, "directions");
  const Json& vals = expect_key(j, "values");
  if (!dirs.is_array() || !vals.is_array())
    throw ParseError("\"directions\" and \"values\" must be arrays");
  SupportVector f;
  for (const Json& u : dirs) f.directions.push_back(expect_vec2(u, "direction"));
  for (const Json& v : vals) f.values.push_back(expect_number(v, "support value"));
  if (f.directions.size() != f.values.size())
    throw ParseError("directions and values must have equal length");
  return f;
}

Json norm_to_json(const AnisotropicNorm& F) {
  switch (F.kind()) {
    case NormKind::euclidean:
      return Json{{"kind", "euclidean"}};
    case NormKind::ellipse: {
      const Mat2& A = F.ellipse_matrix();
      return Json{{"kind", "ellipse"},
                  {"A", Json::array({Json::array({A.xx, A.xy}),
                                     Json::array({A.yx, A.yy})})}};
    }
    case NormKind::smoothed_ls:
      return Json{{"kind", "smoothed-ls"},
                  {"s", F.ls_exponent()},
                  {"delta", F.ls_delta()}};
  }
  throw InvalidArgument("unknown norm kind");
}

AnisotropicNorm norm_from_json(const Json& j) {
  const Json& kind = expect_key(j, "kind");
  if (!kind.is_string()) throw ParseError("\"kind\" must be a string");
  const std::string k = kind.get<std::string>();
  if (k == "euclidean") return AnisotropicNorm::euclidean();
  if (k == "ellipse") {
    const Json& a = expect_key(j, "A");
    if (!a.is_array() || a.size() != 2)
      throw ParseError("\"A\" must be a 2x2 matrix [[..],[..]]");
    const Vec2 r0 = expect_vec2(a[0], "matrix row");
    const Vec2 r1 = expect_vec2(a[1], "matrix row");
    return AnisotropicNorm::ellipse(Mat2{r0.x, r0.y, r1.x, r1.y});
  }
  if (k == "smoothed-ls") {
    const double s = expect_number(expect_key(j, "s"), "\"s\"");
    if (j.contains("delta"))
      return AnisotropicNorm::smoothed_ls(s, expect_number(j["delta"], "\"delta\""));
    return AnisotropicNorm::smoothed_ls(s);
  }
  throw ParseError("unknown norm kind: " + k);
}

Json mesh_to_json(const TriangleMesh& mesh) {
  Json nodes = Json::array();
  for (const Vec2& v : mesh.nodes) nodes.push_back(Json::array({v.x, v.y}));
  Json tris = Json::array();
  for (const auto& t : mesh.triangles)
    tris.push_back(Json::array({t[0], t[1], t[2]}));
  Json boundary = Json::array();
  for (const BoundaryEdge& e : mesh.boundary_edges)
    boundary.push_back(Json::array({Json::array({e.a, e.b}), e.facet}));
  return Json{{"nodes", nodes}, {"triangles", tris}, {"boundary", boundary}};
}

TriangleMesh mesh_from_json(const Json& j) {
  TriangleMesh mesh;
  const Json& nodes = expect_key(j, "nodes");
  if (!nodes.is_array()) throw ParseError("\"nodes\" must be an array");
  for (const Json& v : nodes) mesh.nodes.push_back(expect_vec2(v, "node"));
  const int nn = mesh.node_count();

  const Json& tris = expect_key(j, "triangles");
  if (!tris.is_array()) throw ParseError("\"triangles\" must be an array");
  for (const Json& t : tris) {
    if (!t.is_array() || t.size() != 3)
      throw ParseError("triangle must be an index triple");
    std::array<int, 3> tri{};
    for (int i = 0; i < 3; ++i) {
      tri[i] = expect_int(t[i], "triangle index");
      if (tri[i] < 0 || tri[i] >= nn) throw ParseError("triangle index out of range");
    }
    mesh.triangles.push_back(tri);
  }

  const Json& boundary = expect_key(j, "boundary");
  if (!boundary.is_array()) throw ParseError("\"boundary\" must be an array");
  for (const Json& b : boundary) {
    if (!b.is_array() || b.size() != 2 || !b[0].is_array() || b[0].size() != 2)
      throw ParseError("boundary entry must be [[a, b], facet]");
    BoundaryEdge e;
    e.a = expect_int(b[0][0], "boundary node");
    e.b = expect_int(b[0][1], "boundary node");
    e.facet = expect_int(b[1], "boundary facet");
    if (e.a < 0 || e.a >= nn || e.b < 0 || e.b >= nn)
      throw ParseError("boundary node index out of range");
    for (int t = 0; t < mesh.triangle_count() && e.triangle < 0; ++t) {
      const auto& tri = mesh.triangles[t];
      for (int i = 0; i < 3; ++i)
        if (tri[i] == e.a && tri[(i + 1) % 3] == e.b) {
          e.triangle = t;
          break;
        }
    }
    if (e.triangle < 0)
      throw ParseError("boundary edge does not bound any triangle");
    mesh.boundary_edges.push_back(e);
  }

  for (const auto& t : mesh.triangles)
    for (int i = 0; i < 3; ++i)
      mesh.h_mesh = std::max(mesh.h_mesh, norm(mesh.nodes[t[(i + 1) % 3]] - mesh.nodes[t[i]]));
  return mesh;
}

Json torsion_report_to_json(const TorsionReport& report) {
  return Json{{"tau_volume", report.tau_volume},
              {"tau_boundary", report.tau_boundary},
              {"relative_gap", report.relative_gap},
              {"p", report.p}};
}

Json measure_report_to_json(const FacetMeasure& measure, const TorsionReport& report) {
  Json facets = Json::array();
  for (const FacetMeasureEntry& f : measure.facets) {
    Json entry;
    entry["normal"] = Json::array({f.normal.x, f.normal.y});
    entry["h"] = f.h;
    entry["S_p"] = f.S_p;
    entry["S_pq"] = f.S_pq;
    facets.push_back(entry);
  }
  return Json{{"facets", facets},
              {"tau_volume", report.tau_volume},
              {"tau_boundary", report.tau_boundary},
              {"p", measure.p},
              {"q", measure.q}};
}

Json measure_to_json(const DiscreteMeasure& mu) {
  Json atoms = Json::array();
  for (int k = 0; k < mu.size(); ++k) {
    Json atom;
    atom["direction"] = Json::array({mu.directions[k].x, mu.directions[k].y});
    atom["weight"] = mu.weights[k];
    atoms.push_back(atom);
  }
  return Json{{"atoms", atoms}};
}

DiscreteMeasure measure_from_json(const Json& j) {
  const Json& atoms = expect_key(j, "atoms");
  if (!atoms.is_array()) throw ParseError("\"atoms\" must be an array");
  DiscreteMeasure mu;
  for (const Json& a : atoms) {
    mu.directions.push_back(expect_vec2(expect_key(a, "direction"), "direction"));
    mu.weights.push_back(expect_number(expect_key(a, "weight"), "weight"));
  }
  return mu;
}

Json outcome_to_json(const SolveOutcome& outcome) {
  Json verts = Json::array();
  for (const Vec2& v : outcome.body.vertices()) verts.push_back(Json::array({v.x, v.y}));
  Json residuals = Json::array();
  for (double r : outcome.residuals) residuals.push_back(r);
  Json trace = Json::array();
  for (double t : outcome.objective_trace) trace.push_back(t);
  return Json{{"vertices", verts},
              {"lambda", outcome.lambda},
              {"residuals", residuals},
              {"iterations", outcome.iterations},
              {"objective_trace", trace}};
}

}  // namespace ptorsion
