#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include <doctest.h>

#include "fixtures.hpp"
#include "ptorsion/mesh.hpp"

using namespace ptorsion;

namespace {

using EdgeKey = std::pair<int, int>;

EdgeKey key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

std::map<EdgeKey, int> edge_counts(const TriangleMesh& mesh) {
  std::map<EdgeKey, int> counts;
  for (const auto& t : mesh.triangles)
    for (int e = 0; e < 3; ++e) ++counts[key(t[e], t[(e + 1) % 3])];
  return counts;
}

// Structural invariants every triangulation must satisfy.
void check_conforming(const TriangleMesh& mesh, const ConvexPolygon& K) {
  REQUIRE(mesh.triangle_count() > 0);
  for (const auto& t : mesh.triangles) {
    for (int v : t) {
      REQUIRE(v >= 0);
      REQUIRE(v < mesh.node_count());
    }
    REQUIRE(t[0] != t[1]);
    REQUIRE(t[1] != t[2]);
    REQUIRE(t[0] != t[2]);
  }
  for (int t = 0; t < mesh.triangle_count(); ++t) CHECK(mesh.triangle_area(t) > 0.0);

  auto counts = edge_counts(mesh);
  std::map<EdgeKey, int> boundary;
  for (const BoundaryEdge& e : mesh.boundary_edges) ++boundary[key(e.a, e.b)];
  for (const auto& [k, c] : counts) {
    const bool on_boundary = boundary.count(k) > 0;
    CHECK(c == (on_boundary ? 1 : 2));
  }
  for (const auto& [k, c] : boundary) {
    CHECK(c == 1);
    CHECK(counts.count(k) == 1);
  }

  // every boundary edge knows its unique adjacent triangle and runs
  // counterclockwise along the facet it lies on
  for (const BoundaryEdge& e : mesh.boundary_edges) {
    REQUIRE(e.triangle >= 0);
    REQUIRE(e.triangle < mesh.triangle_count());
    const auto& t = mesh.triangles[e.triangle];
    CHECK(std::count(t.begin(), t.end(), e.a) == 1);
    CHECK(std::count(t.begin(), t.end(), e.b) == 1);
    const Facet f = K.facet(e.facet);
    const Vec2 d = mesh.nodes[e.b] - mesh.nodes[e.a];
    CHECK(std::abs(dot(d, f.normal)) < 1e-12 * norm(d));
    CHECK(dot(d, Vec2{-f.normal.y, f.normal.x}) > 0.0);
  }

  // boundary nodes sit exactly on their facet line
  for (const BoundaryEdge& e : mesh.boundary_edges) {
    const Facet f = K.facet(e.facet);
    for (int v : {e.a, e.b})
      CHECK(std::abs(dot(mesh.nodes[v], f.normal) - f.support) <
            1e-12 * (1.0 + std::abs(f.support)));
  }

  // boundary_flags marks exactly the nodes referenced by boundary edges
  std::vector<bool> expect(mesh.node_count(), false);
  for (const BoundaryEdge& e : mesh.boundary_edges) expect[e.a] = expect[e.b] = true;
  CHECK(mesh.boundary_flags() == expect);

  double tri_area = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) tri_area += mesh.triangle_area(t);
  CHECK(tri_area == doctest::Approx(K.area()).epsilon(1e-12));

  double boundary_len = 0.0;
  for (const BoundaryEdge& e : mesh.boundary_edges)
    boundary_len += norm(mesh.nodes[e.b] - mesh.nodes[e.a]);
  CHECK(boundary_len == doctest::Approx(K.perimeter()).epsilon(1e-12));

  double max_edge = 0.0;
  for (const auto& t : mesh.triangles)
    for (int e = 0; e < 3; ++e)
      max_edge = std::max(max_edge, norm(mesh.nodes[t[(e + 1) % 3]] - mesh.nodes[t[e]]));
  CHECK(mesh.h_mesh == doctest::Approx(max_edge).epsilon(1e-12));
}

}  // namespace

TEST_CASE("triangulations are conforming with exact area and boundary") {
  const struct {
    ConvexPolygon body;
    double h;
  } cases[] = {
      {fixtures::square(), 0.37},
      {fixtures::hexagon(), 0.21},
      {regular_polygon(7, 1.3, 0.41), 0.19},
      {fixtures::random_12gon(11), 0.13},
  };
  for (const auto& c : cases) {
    const TriangleMesh mesh = triangulate(c.body, c.h);
    // ring shear stretches some quad diagonals slightly past the target
    CHECK(mesh.h_mesh <= 1.2 * c.h);
    check_conforming(mesh, c.body);
  }
}

TEST_CASE("mesh resolution follows the target") {
  const ConvexPolygon K = fixtures::hexagon();
  int prev_triangles = 0;
  for (double h : {0.4, 0.2, 0.1}) {
    const TriangleMesh mesh = triangulate(K, h);
    CHECK(mesh.h_mesh <= 1.2 * h);
    CHECK(mesh.triangle_count() > prev_triangles);
    prev_triangles = mesh.triangle_count();
  }
  CHECK_THROWS_AS(triangulate(K, 0.0), InvalidArgument);
  CHECK_THROWS_AS(triangulate(K, -1.0), InvalidArgument);
}

TEST_CASE("uniform refinement quadruples triangles and halves the pitch") {
  const ConvexPolygon K = regular_polygon(5, 1.0, 0.3);
  const TriangleMesh coarse = triangulate(K, 0.33);
  const TriangleMesh fine = refine_uniform(coarse);
  CHECK(fine.triangle_count() == 4 * coarse.triangle_count());
  CHECK(fine.boundary_edges.size() == 2 * coarse.boundary_edges.size());
  CHECK(fine.h_mesh == doctest::Approx(0.5 * coarse.h_mesh).epsilon(1e-12));
  check_conforming(fine, K);
}

TEST_CASE("a frozen layout reproduces the mesh bitwise") {
  const ConvexPolygon K = fixtures::random_12gon(3);
  const double h = 0.17;
  const TriangleMesh direct = triangulate(K, h);
  const MeshLayout layout = mesh_layout(K, h);
  const TriangleMesh pinned = triangulate(K, layout);

  REQUIRE(pinned.node_count() == direct.node_count());
  REQUIRE(pinned.triangle_count() == direct.triangle_count());
  for (int i = 0; i < direct.node_count(); ++i) {
    CHECK(pinned.nodes[i].x == direct.nodes[i].x);
    CHECK(pinned.nodes[i].y == direct.nodes[i].y);
  }
  CHECK(pinned.triangles == direct.triangles);
}

TEST_CASE("meshing commutes with translation") {
  const ConvexPolygon K = fixtures::hexagon();
  const Vec2 t{0.731, -1.417};
  const double h = 0.23;
  const TriangleMesh base = triangulate(K, h);
  const TriangleMesh moved = triangulate(translate(K, t), h);

  REQUIRE(moved.node_count() == base.node_count());
  CHECK(moved.triangles == base.triangles);
  for (int i = 0; i < base.node_count(); ++i) {
    CHECK(moved.nodes[i].x == doctest::Approx(base.nodes[i].x + t.x).epsilon(1e-12));
    CHECK(moved.nodes[i].y == doctest::Approx(base.nodes[i].y + t.y).epsilon(1e-12));
  }
}

TEST_CASE("meshing commutes with dilation") {
  const ConvexPolygon K = regular_polygon(9, 1.1, 0.15);
  const double lambda = 2.6;
  const TriangleMesh base = triangulate(K, 0.2);
  // scaling the body and the pitch together keeps the layout identical
  const TriangleMesh scaled = triangulate(scale(K, lambda), lambda * 0.2);

  REQUIRE(scaled.node_count() == base.node_count());
  CHECK(scaled.triangles == base.triangles);
  for (int i = 0; i < base.node_count(); ++i) {
    CHECK(scaled.nodes[i].x == doctest::Approx(lambda * base.nodes[i].x).epsilon(1e-12));
    CHECK(scaled.nodes[i].y == doctest::Approx(lambda * base.nodes[i].y).epsilon(1e-12));
  }
}
