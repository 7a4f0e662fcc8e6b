#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace ptorsion {

// Failure taxonomy shared by the library and the CLI.  Every error carries a
// stable machine-readable code (what the CLI prints as JSON on stderr) and a
// class that maps onto the documented process exit codes:
//   parse = 1, precondition = 2, solver = 3.
class Error : public std::runtime_error {
public:
  enum class Class { parse = 1, precondition = 2, solver = 3 };

  Error(Class cls, std::string code, const std::string& message)
      : std::runtime_error(message), class_(cls), code_(std::move(code)) {}

  Class error_class() const { return class_; }
  const std::string& code() const { return code_; }
  int exit_code() const { return static_cast<int>(class_); }

private:
  Class class_;
  std::string code_;
};

struct ParseError : Error {
  explicit ParseError(const std::string& m) : Error(Class::parse, "parse", m) {}
};

struct InvalidArgument : Error {
  explicit InvalidArgument(const std::string& m)
      : Error(Class::precondition, "invalid_argument", m) {}
};

struct InvalidPolygon : Error {
  explicit InvalidPolygon(const std::string& m)
      : Error(Class::precondition, "invalid_polygon", m) {}
};

struct OriginNotInterior : Error {
  explicit OriginNotInterior(const std::string& m)
      : Error(Class::precondition, "origin_not_interior", m) {}
};

struct Unbounded : Error {
  explicit Unbounded(const std::string& m)
      : Error(Class::precondition, "unbounded", m) {}
};

// A radial query ray passes through a vertex, so the facet it lands on is
// ambiguous.  Callers that only need the radius use radial_function, which
// never raises this.
struct VertexRay : Error {
  explicit VertexRay(const std::string& m)
      : Error(Class::precondition, "vertex_ray", m) {}
};

struct ZeroArgument : Error {
  explicit ZeroArgument(const std::string& m)
      : Error(Class::precondition, "zero_argument", m) {}
};

struct EmptyInterior : Error {
  explicit EmptyInterior(const std::string& m)
      : Error(Class::precondition, "empty_interior", m) {}
};

struct ExcludedExponent : Error {
  explicit ExcludedExponent(const std::string& m)
      : Error(Class::precondition, "excluded_exponent", m) {}
};

struct NonConcentration : Error {
  explicit NonConcentration(const std::string& m)
      : Error(Class::precondition, "non_concentration", m) {}
};

struct MeshFailure : Error {
  explicit MeshFailure(const std::string& m)
      : Error(Class::solver, "mesh_failure", m) {}
};

struct IllConditioned : Error {
  explicit IllConditioned(const std::string& m)
      : Error(Class::solver, "ill_conditioned", m) {}
};

struct DegenerateFacet : Error {
  DegenerateFacet(int atom, const std::string& m)
      : Error(Class::solver, "degenerate_facet", m), atom(atom) {}
  int atom;
};

struct NonConvergence : Error {
  NonConvergence(int iterations, double residual, const std::string& m)
      : Error(Class::solver, "non_convergence", m),
        iterations(iterations),
        residual(residual) {}
  int iterations;
  double residual;
};

}  // namespace ptorsion
