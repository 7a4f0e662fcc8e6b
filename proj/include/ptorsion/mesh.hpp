#pragma once

#include <array>
#include <vector>

#include "ptorsion/geometry.hpp"

namespace ptorsion {

struct BoundaryEdge {
  int a = -1, b = -1;   // node indices, counterclockwise along the boundary
  int facet = -1;       // polygon facet carrying this edge
  int triangle = -1;    // unique adjacent triangle
};

struct TriangleMesh {
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise
  std::vector<BoundaryEdge> boundary_edges;
  double h_mesh = 0.0;  // max edge length

  int node_count() const { return static_cast<int>(nodes.size()); }
  int triangle_count() const { return static_cast<int>(triangles.size()); }
  double triangle_area(int t) const;
  std::vector<bool> boundary_flags() const;
};

// Subdivision counts pinning a mesh topology: segments per polygon facet and
// the number of concentric rings.  Meshing perturbed copies of a body with
// one frozen layout keeps the triangulation combinatorially identical, which
// makes finite differences of mesh-dependent quantities smooth.
struct MeshLayout {
  std::vector<int> facet_segments;
  int rings = 0;
};

MeshLayout mesh_layout(const ConvexPolygon& K, double target_h);

// Structured triangulation: the boundary is subdivided facet by facet and
// shrunk ring by ring toward the centroid, each ring quad split into two
// triangles.  Scaling from the centroid makes the mesh equivariant under
// translation and dilation of K.  The realized h_mesh tracks target_h but
// sheared ring quads can push their diagonals a few percent past it.
TriangleMesh triangulate(const ConvexPolygon& K, double target_h);
TriangleMesh triangulate(const ConvexPolygon& K, const MeshLayout& layout);

// Uniform refinement via edge midpoints; quadruples the triangle count and
// exactly halves h_mesh.
TriangleMesh refine_uniform(const TriangleMesh& mesh);

}  // namespace ptorsion
