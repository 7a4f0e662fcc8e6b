#include "ptorsion/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace ptorsion {

double TriangleMesh::triangle_area(int t) const {
  const auto& tri = triangles[t];
  return 0.5 * cross(nodes[tri[1]] - nodes[tri[0]], nodes[tri[2]] - nodes[tri[0]]);
}

std::vector<bool> TriangleMesh::boundary_flags() const {
  std::vector<bool> flags(nodes.size(), false);
  for (const BoundaryEdge& e : boundary_edges) {
    flags[e.a] = true;
    flags[e.b] = true;
  }
  return flags;
}

MeshLayout mesh_layout(const ConvexPolygon& K, double target_h) {
  if (!(target_h > 0.0)) throw InvalidArgument("mesh target_h must be positive");
  // Quad diagonals bound h_mesh by sqrt(2) times the subdivision pitch, so
  // subdivide against target_h / sqrt(2).
  const double pitch = target_h / std::sqrt(2.0);
  MeshLayout layout;
  layout.facet_segments.reserve(K.facet_count());
  for (int k = 0; k < K.facet_count(); ++k) {
    const double len = K.facet(k).length;
    layout.facet_segments.push_back(std::max(1, static_cast<int>(std::ceil(len / pitch))));
  }
  const Vec2 c = K.centroid();
  double reach = 0.0;
  for (const Vec2& v : K.vertices()) reach = std::max(reach, norm(v - c));
  layout.rings = std::max(1, static_cast<int>(std::ceil(reach / pitch)));
  return layout;
}

TriangleMesh triangulate(const ConvexPolygon& K, double target_h) {
  return triangulate(K, mesh_layout(K, target_h));
}

TriangleMesh triangulate(const ConvexPolygon& K, const MeshLayout& layout) {
  const int nf = K.facet_count();
  if (static_cast<int>(layout.facet_segments.size()) != nf)
    throw InvalidArgument("mesh layout does not match the polygon");
  const int M = layout.rings;
  if (M < 1) throw InvalidArgument("mesh layout needs at least one ring");

  // Boundary nodes facet by facet, counterclockwise; each facet's first node
  // is its starting vertex.
  std::vector<Vec2> bnodes;
  std::vector<int> bfacet;  // facet of the segment starting at bnodes[j]
  for (int k = 0; k < nf; ++k) {
    const int segs = layout.facet_segments[k];
    if (segs < 1) throw InvalidArgument("facet segment count must be positive");
    const Vec2 a = K.vertices()[k];
    const Vec2 b = K.vertices()[(k + 1) % nf];
    for (int j = 0; j < segs; ++j) {
      bnodes.push_back(a + (static_cast<double>(j) / segs) * (b - a));
      bfacet.push_back(k);
    }
  }
  const int nb = static_cast<int>(bnodes.size());

  TriangleMesh mesh;
  const Vec2 c = K.centroid();
  mesh.nodes.reserve(1 + static_cast<size_t>(nb) * M);
  mesh.nodes.push_back(c);
  for (int i = 1; i <= M; ++i) {
    const double t = static_cast<double>(i) / M;
    for (int j = 0; j < nb; ++j)
      mesh.nodes.push_back(i == M ? bnodes[j] : c + t * (bnodes[j] - c));
  }
  auto node = [&](int ring, int j) { return 1 + (ring - 1) * nb + (j % nb); };

  mesh.triangles.reserve(static_cast<size_t>(nb) * (2 * M - 1));
  for (int j = 0; j < nb; ++j)
    mesh.triangles.push_back({0, node(1, j), node(1, j + 1)});
  for (int i = 1; i < M; ++i) {
    for (int j = 0; j < nb; ++j) {
      const int p = node(i, j), q = node(i, j + 1);
      const int P = node(i + 1, j), Q = node(i + 1, j + 1);
      mesh.triangles.push_back({p, P, Q});
      mesh.triangles.push_back({p, Q, q});
    }
  }

  mesh.boundary_edges.reserve(nb);
  for (int j = 0; j < nb; ++j) {
    BoundaryEdge e;
    e.a = node(M, j);
    e.b = node(M, j + 1);
    e.facet = bfacet[j];
    e.triangle = M == 1 ? j : nb + 2 * ((M - 2) * nb + j);
    mesh.boundary_edges.push_back(e);
  }

  double h = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    if (!(mesh.triangle_area(t) > 1e-14))
      throw MeshFailure("triangulation produced a degenerate triangle");
    const auto& tri = mesh.triangles[t];
    for (int s = 0; s < 3; ++s)
      h = std::max(h, norm(mesh.nodes[tri[(s + 1) % 3]] - mesh.nodes[tri[s]]));
  }
  mesh.h_mesh = h;
  return mesh;
}

TriangleMesh refine_uniform(const TriangleMesh& mesh) {
  TriangleMesh out;
  out.nodes = mesh.nodes;
  std::map<std::pair<int, int>, int> midpoint;
  auto mid = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const int idx = static_cast<int>(out.nodes.size());
    out.nodes.push_back(0.5 * (mesh.nodes[a] + mesh.nodes[b]));
    midpoint.emplace(key, idx);
    return idx;
  };

  out.triangles.reserve(mesh.triangles.size() * 4);
  for (const auto& tri : mesh.triangles) {
    const int m01 = mid(tri[0], tri[1]);
    const int m12 = mid(tri[1], tri[2]);
    const int m20 = mid(tri[2], tri[0]);
    out.triangles.push_back({tri[0], m01, m20});
    out.triangles.push_back({tri[1], m12, m01});
    out.triangles.push_back({tri[2], m20, m12});
    out.triangles.push_back({m01, m12, m20});
  }

  out.boundary_edges.reserve(mesh.boundary_edges.size() * 2);
  for (const BoundaryEdge& e : mesh.boundary_edges) {
    const int m = mid(e.a, e.b);
    const auto& tri = mesh.triangles[e.triangle];
    int pos_a = -1, pos_b = -1;
    for (int s = 0; s < 3; ++s) {
      if (tri[s] == e.a) pos_a = s;
      if (tri[s] == e.b) pos_b = s;
    }
    if (pos_a < 0 || pos_b < 0)
      throw MeshFailure("boundary edge not adjacent to its triangle");
    out.boundary_edges.push_back({e.a, m, e.facet, 4 * e.triangle + pos_a});
    out.boundary_edges.push_back({m, e.b, e.facet, 4 * e.triangle + pos_b});
  }

  double h = 0.0;
  for (const auto& tri : out.triangles)
    for (int s = 0; s < 3; ++s)
      h = std::max(h, norm(out.nodes[tri[(s + 1) % 3]] - out.nodes[tri[s]]));
  out.h_mesh = h;
  return out;
}

}  // namespace ptorsion
