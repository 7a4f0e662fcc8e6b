#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "ptorsion/errors.hpp"

namespace ptorsion {

// The core is planar, but the rigidity/measure formulas keep the dimension
// symbolic so the exponents read like the general statements they come from.
inline constexpr int kDim = 2;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline Vec2 operator*(Vec2 a, double s) { return s * a; }
inline Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
inline Vec2& operator+=(Vec2& a, Vec2 b) { a = a + b; return a; }
inline Vec2& operator-=(Vec2& a, Vec2 b) { a = a - b; return a; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }  // +90 degree rotation
inline Vec2 normalized(Vec2 a) { return a / norm(a); }
inline Vec2 direction(double angle) { return {std::cos(angle), std::sin(angle)}; }

struct Facet {
  Vec2 normal;     // outward unit normal
  double length = 0.0;
  double support = 0.0;  // <x, normal> for x on the facet (origin-dependent)
  int a = -1, b = -1;    // vertex indices, facet runs a -> b counterclockwise
};

// Strictly convex polygon with counterclockwise vertices.  Vertices are the
// single source of truth; facet data and support values are recomputed on
// demand rather than cached.
class ConvexPolygon {
public:
  // Default state is empty (no vertices); usable only as a placeholder in
  // outcome structs before assignment.
  ConvexPolygon() = default;

  // Validates vertex count, orientation, and strict convexity.  Raises
  // InvalidPolygon otherwise.
  static ConvexPolygon from_vertices(std::vector<Vec2> vertices);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  int facet_count() const { return static_cast<int>(vertices_.size()); }
  Facet facet(int k) const;
  std::vector<Facet> facets() const;

  double area() const;
  double perimeter() const;
  Vec2 centroid() const;
  double diameter() const;
  // Largest r such that the disk of radius r about the origin fits in the
  // polygon; negative when the origin is outside.
  double origin_margin() const;
  bool contains(Vec2 x, double tol = 0.0) const;

private:
  explicit ConvexPolygon(std::vector<Vec2> v) : vertices_(std::move(v)) {}
  std::vector<Vec2> vertices_;
};

ConvexPolygon translate(const ConvexPolygon& K, Vec2 t);
ConvexPolygon scale(const ConvexPolygon& K, double s);
ConvexPolygon regular_polygon(int sides, double circumradius, double phase = 0.0);

// h_K(x) = max over K of <x, .>, positively homogeneous in x.
double support_function(const ConvexPolygon& K, Vec2 x);

// rho_K(v) = max { t >= 0 : t v in K }.  Requires the origin strictly inside;
// raises OriginNotInterior otherwise.  Homogeneous of degree -1 in v.
double radial_function(const ConvexPolygon& K, Vec2 v);

struct RayHit {
  double rho = 0.0;
  int facet = -1;
};

// Like radial_function but also identifies the facet the ray lands on.
// Raises VertexRay when the hit point is within relative tolerance of a
// vertex, since the facet would be ambiguous; callers retry with a nudged v.
RayHit radial_facet(const ConvexPolygon& K, Vec2 v);

// Jacobian of the change of variables from the unit sphere to the boundary,
// rho^kDim(v) / h_K(facet normal) for the facet hit by v.  Same VertexRay
// contract as radial_facet.
double radial_map_jacobian(const ConvexPolygon& K, Vec2 v);

// Facet enumeration of the Gauss map: pairs (facet index, outward normal).
// Normals are pairwise distinct because the polygon is strictly convex.
std::vector<std::pair<int, Vec2>> gauss_map_facets(const ConvexPolygon& K);

// A support function candidate sampled on a finite direction set.
struct SupportVector {
  std::vector<Vec2> directions;  // unit vectors
  std::vector<double> values;    // strictly positive

  int size() const { return static_cast<int>(directions.size()); }
  // Checks sizes, unit directions, positive values, and that the directions
  // positively span the plane (largest angular gap < pi).  Raises
  // InvalidArgument or Unbounded.
  void validate() const;
};

struct WulffShape {
  ConvexPolygon polygon;
  // For each input direction, the polygon facet realizing that constraint,
  // or -1 when the constraint is inactive (no facet of length > 1e-10 scale).
  std::vector<int> facet_of_direction;
};

// Intersection of half-planes { <x, u_k> <= f_k }.  Directions must
// positively span the plane, otherwise Unbounded is raised.
WulffShape wulff_shape(const SupportVector& f);

// Support values of K evaluated at a direction set, packaged for wulff_shape.
SupportVector sample_support(const ConvexPolygon& K, const std::vector<Vec2>& dirs);

// Wulff shape of (a h_K^q + b h_L^q)^(1/q) over the direction set E.
// a, b >= 0 and not both zero; q nonzero.  For q < 1 both bodies must contain
// the origin strictly; for q >= 1 nonnegative support values suffice.
ConvexPolygon lq_combination(const ConvexPolygon& K, const ConvexPolygon& L,
                             double a, double b, double q,
                             const std::vector<Vec2>& E);

// Hausdorff distance via the sup-norm gap of support functions, evaluated on
// both polygons' normals and vertex directions plus a uniform grid.
double hausdorff_distance(const ConvexPolygon& K, const ConvexPolygon& L);

}  // namespace ptorsion
