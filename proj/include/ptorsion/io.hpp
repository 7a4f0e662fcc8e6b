#pragma once

#include <string>

#include <json.hpp>

#include "ptorsion/minkowski.hpp"

namespace ptorsion {

// Insertion-ordered so emitted documents have a stable key order.
using Json = nlohmann::ordered_json;

// Fixed-format double with 17 significant digits.
std::string format_double(double x);

// Serializes with format_double for floating-point numbers: objects pretty,
// one key per line; arrays on a single line unless they contain objects.
// Appends a trailing newline.  Non-finite numbers are rejected.
std::string dump_json(const Json& j);

// Raises ParseError on unreadable files or malformed JSON.  Schema errors in
// the from_json converters below are also ParseError; semantic violations
// (non-convex polygon, bad norm matrix) surface as precondition errors from
// the domain validators.
Json parse_json_file(const std::string& path);
Json parse_json_text(const std::string& text);

void write_text_file(const std::string& path, const std::string& content);

// {"error": <stable code>, "message": <human text>} on one line.
std::string error_json(const Error& e);

// {"vertices": [[x,y], ...]} counterclockwise
Json polygon_to_json(const ConvexPolygon& K);
ConvexPolygon polygon_from_json(const Json& j);

// {"directions": [[x,y], ...], "values": [...]}
Json support_vector_to_json(const SupportVector& f);
SupportVector support_vector_from_json(const Json& j);

// {"kind": "euclidean" | "ellipse" | "smoothed-ls", "A": [[..],[..]]?, "s"?, "delta"?}
Json norm_to_json(const AnisotropicNorm& F);
AnisotropicNorm norm_from_json(const Json& j);

// {"nodes": [...], "triangles": [...], "boundary": [[[a,b], facet], ...]}
Json mesh_to_json(const TriangleMesh& mesh);
TriangleMesh mesh_from_json(const Json& j);

// {"tau_volume": ..., "tau_boundary": ..., "relative_gap": ..., "p": ...}
Json torsion_report_to_json(const TorsionReport& report);

// {"facets": [{"normal": [x,y], "h": ..., "S_p": ..., "S_pq": ...}],
//  "tau_volume": ..., "tau_boundary": ..., "p": ..., "q": ...}
Json measure_report_to_json(const FacetMeasure& measure, const TorsionReport& report);

// {"atoms": [{"direction": [x,y], "weight": a}, ...]}
Json measure_to_json(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_json(const Json& j);

// {"vertices": [...], "lambda": ..., "residuals": [...], "iterations": ...,
//  "objective_trace": [...]}
Json outcome_to_json(const SolveOutcome& outcome);

}  // namespace ptorsion
