#include "ptorsion/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

namespace ptorsion {

namespace {

double coordinate_scale(const std::vector<Vec2>& vs) {
  double s = 0.0;
  for (const Vec2& v : vs) s = std::max({s, std::abs(v.x), std::abs(v.y)});
  return s;
}

}  // namespace

ConvexPolygon ConvexPolygon::from_vertices(std::vector<Vec2> vertices) {
  const int n = static_cast<int>(vertices.size());
  if (n < 3) throw InvalidPolygon("polygon needs at least 3 vertices");
  double twice_area = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec2 a = vertices[i];
    const Vec2 b = vertices[(i + 1) % n];
    const Vec2 c = vertices[(i + 2) % n];
    const double turn = cross(b - a, c - b);
    if (!(turn > 0.0))
      throw InvalidPolygon("vertices must be strictly convex and counterclockwise");
    twice_area += cross(a, b);
  }
  if (!(twice_area > 0.0)) throw InvalidPolygon("polygon has nonpositive area");
  return ConvexPolygon(std::move(vertices));
}

Facet ConvexPolygon::facet(int k) const {
  const int n = facet_count();
  const Vec2 a = vertices_[k];
  const Vec2 b = vertices_[(k + 1) % n];
  const Vec2 e = b - a;
  const double len = norm(e);
  const Vec2 nrm = Vec2{e.y, -e.x} / len;  // outward for counterclockwise order
  return Facet{nrm, len, dot(a, nrm), k, (k + 1) % n};
}

std::vector<Facet> ConvexPolygon::facets() const {
  std::vector<Facet> fs;
  fs.reserve(vertices_.size());
  for (int k = 0; k < facet_count(); ++k) fs.push_back(facet(k));
  return fs;
}

double ConvexPolygon::area() const {
  double twice = 0.0;
  const int n = facet_count();
  for (int i = 0; i < n; ++i) twice += cross(vertices_[i], vertices_[(i + 1) % n]);
  return 0.5 * twice;
}

double ConvexPolygon::perimeter() const {
  double len = 0.0;
  const int n = facet_count();
  for (int i = 0; i < n; ++i) len += norm(vertices_[(i + 1) % n] - vertices_[i]);
  return len;
}

Vec2 ConvexPolygon::centroid() const {
  double twice_area = 0.0;
  Vec2 acc{0.0, 0.0};
  const int n = facet_count();
  for (int i = 0; i < n; ++i) {
    const Vec2 a = vertices_[i];
    const Vec2 b = vertices_[(i + 1) % n];
    const double w = cross(a, b);
    twice_area += w;
    acc += w * (a + b);
  }
  return acc / (3.0 * twice_area);
}

double ConvexPolygon::diameter() const {
  double best = 0.0;
  const int n = facet_count();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      best = std::max(best, norm2(vertices_[i] - vertices_[j]));
  return std::sqrt(best);
}

double ConvexPolygon::origin_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (int k = 0; k < facet_count(); ++k) m = std::min(m, facet(k).support);
  return m;
}

bool ConvexPolygon::contains(Vec2 x, double tol) const {
  for (int k = 0; k < facet_count(); ++k) {
    const Facet f = facet(k);
    if (dot(x, f.normal) > f.support + tol) return false;
  }
  return true;
}

ConvexPolygon translate(const ConvexPolygon& K, Vec2 t) {
  std::vector<Vec2> vs = K.vertices();
  for (Vec2& v : vs) v += t;
  return ConvexPolygon::from_vertices(std::move(vs));
}

ConvexPolygon scale(const ConvexPolygon& K, double s) {
  if (!(s > 0.0)) throw InvalidArgument("scale factor must be positive");
  std::vector<Vec2> vs = K.vertices();
  for (Vec2& v : vs) v = s * v;
  return ConvexPolygon::from_vertices(std::move(vs));
}

ConvexPolygon regular_polygon(int sides, double circumradius, double phase) {
  if (sides < 3) throw InvalidArgument("regular polygon needs at least 3 sides");
  if (!(circumradius > 0.0)) throw InvalidArgument("circumradius must be positive");
  std::vector<Vec2> vs;
  vs.reserve(sides);
  for (int k = 0; k < sides; ++k)
    vs.push_back(circumradius * direction(phase + 2.0 * std::numbers::pi * k / sides));
  return ConvexPolygon::from_vertices(std::move(vs));
}

double support_function(const ConvexPolygon& K, Vec2 x) {
  double best = -std::numeric_limits<double>::infinity();
  for (const Vec2& v : K.vertices()) best = std::max(best, dot(v, x));
  return best;
}

double radial_function(const ConvexPolygon& K, Vec2 v) {
  const double len = norm(v);
  if (!(len > 0.0)) throw InvalidArgument("radial direction must be nonzero");
  const double margin = K.origin_margin();
  if (!(margin > 1e-12 * coordinate_scale(K.vertices())))
    throw OriginNotInterior("radial function needs the origin strictly inside");
  double rho = std::numeric_limits<double>::infinity();
  for (int k = 0; k < K.facet_count(); ++k) {
    const Facet f = K.facet(k);
    const double d = dot(v, f.normal);
    if (d > 0.0) rho = std::min(rho, f.support / d);
  }
  return rho;
}

RayHit radial_facet(const ConvexPolygon& K, Vec2 v) {
  const double len = norm(v);
  if (!(len > 0.0)) throw InvalidArgument("radial direction must be nonzero");
  const double margin = K.origin_margin();
  if (!(margin > 1e-12 * coordinate_scale(K.vertices())))
    throw OriginNotInterior("radial map needs the origin strictly inside");
  double best = std::numeric_limits<double>::infinity();
  double second = std::numeric_limits<double>::infinity();
  int facet = -1;
  for (int k = 0; k < K.facet_count(); ++k) {
    const Facet f = K.facet(k);
    const double d = dot(v, f.normal);
    if (d <= 0.0) continue;
    const double t = f.support / d;
    if (t < best) {
      second = best;
      best = t;
      facet = k;
    } else {
      second = std::min(second, t);
    }
  }
  if (second - best <= 1e-9 * best)
    throw VertexRay("radial ray passes through a vertex");
  return RayHit{best, facet};
}

double radial_map_jacobian(const ConvexPolygon& K, Vec2 v) {
  const RayHit hit = radial_facet(K, v);
  const double h = K.facet(hit.facet).support;
  return std::pow(hit.rho, kDim) / h;
}

std::vector<std::pair<int, Vec2>> gauss_map_facets(const ConvexPolygon& K) {
  std::vector<std::pair<int, Vec2>> out;
  out.reserve(K.facet_count());
  for (int k = 0; k < K.facet_count(); ++k) out.emplace_back(k, K.facet(k).normal);
  return out;
}

void SupportVector::validate() const {
  if (directions.size() != values.size())
    throw InvalidArgument("support vector sizes differ");
  if (directions.size() < 3)
    throw InvalidArgument("support vector needs at least 3 directions");
  for (const Vec2& u : directions)
    if (std::abs(norm(u) - 1.0) > 1e-9)
      throw InvalidArgument("support directions must be unit vectors");
  for (double v : values)
    if (!(v > 0.0) || !std::isfinite(v))
      throw InvalidArgument("support values must be positive and finite");
  // Boundedness of the Wulff shape needs the directions to positively span
  // the plane: no open half-circle free of directions.
  std::vector<double> angles;
  angles.reserve(directions.size());
  for (const Vec2& u : directions) angles.push_back(std::atan2(u.y, u.x));
  std::sort(angles.begin(), angles.end());
  double max_gap = angles.front() + 2.0 * std::numbers::pi - angles.back();
  for (size_t i = 0; i + 1 < angles.size(); ++i)
    max_gap = std::max(max_gap, angles[i + 1] - angles[i]);
  if (max_gap >= std::numbers::pi - 1e-12)
    throw Unbounded("directions concentrated in a closed half-circle");
}

namespace {

std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& poly, Vec2 u, double f,
                                 double eps) {
  std::vector<Vec2> out;
  const int n = static_cast<int>(poly.size());
  out.reserve(n + 1);
  for (int i = 0; i < n; ++i) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[(i + 1) % n];
    const double da = f - dot(a, u);
    const double db = f - dot(b, u);
    const bool ia = da >= -eps;
    const bool ib = db >= -eps;
    if (ia) out.push_back(a);
    if (ia != ib) {
      const double t = da / (da - db);
      out.push_back(a + t * (b - a));
    }
  }
  return out;
}

}  // namespace

WulffShape wulff_shape(const SupportVector& f) {
  f.validate();
  const int m = f.size();
  const double f_max = *std::max_element(f.values.begin(), f.values.end());

  // Smallest support margin over unit directions; bounds the body inside a
  // box large enough that every box edge is clipped away.
  std::vector<double> angles(m);
  for (int k = 0; k < m; ++k)
    angles[k] = std::atan2(f.directions[k].y, f.directions[k].x);
  std::sort(angles.begin(), angles.end());
  double max_gap = angles.front() + 2.0 * std::numbers::pi - angles.back();
  for (int i = 0; i + 1 < m; ++i) max_gap = std::max(max_gap, angles[i + 1] - angles[i]);
  const double sigma = std::cos(0.5 * max_gap);
  const double R = 1.05 * f_max / sigma + f_max;

  std::vector<Vec2> poly{{R, R}, {-R, R}, {-R, -R}, {R, -R}};
  const double eps_inside = 1e-12 * (1.0 + f_max);
  for (int k = 0; k < m; ++k) {
    poly = clip_halfplane(poly, f.directions[k], f.values[k], eps_inside);
    if (poly.size() < 3) throw EmptyInterior("half-plane intersection collapsed");
  }

  // Remove duplicate consecutive vertices left by clips through vertices,
  // then collapse edges below the facet activity threshold to their midpoint
  // (their endpoints carry too much rounding for reliable normal matching).
  const double eps_vertex = 1e-13 * (1.0 + R);
  const double eps_degenerate = 1e-10 * (1.0 + f_max);
  std::vector<Vec2> verts;
  verts.reserve(poly.size());
  for (const Vec2& v : poly)
    if (verts.empty() || norm(v - verts.back()) > eps_vertex) verts.push_back(v);
  while (verts.size() > 1 && norm(verts.front() - verts.back()) <= eps_vertex)
    verts.pop_back();
  bool changed = true;
  while (changed) {
    changed = false;
    if (verts.size() < 3) throw EmptyInterior("half-plane intersection collapsed");
    for (size_t i = 0; i < verts.size(); ++i) {
      const size_t j = (i + 1) % verts.size();
      if (norm(verts[j] - verts[i]) < eps_degenerate) {
        const Vec2 mid = 0.5 * (verts[i] + verts[j]);
        if (j == 0) {
          verts[0] = mid;
          verts.pop_back();
        } else {
          verts[i] = mid;
          verts.erase(verts.begin() + j);
        }
        changed = true;
        break;
      }
    }
  }

  // Attribute each surviving edge to the constraint whose line carries it.
  // An unmatched edge would be a leftover of the bounding box, which the
  // spanning check is supposed to exclude.
  auto match_edge = [&](Vec2 a, Vec2 b) -> int {
    const Vec2 e = b - a;
    const Vec2 nrm = normalized(Vec2{e.y, -e.x});
    const Vec2 mid = 0.5 * (a + b);
    int best = -1;
    double best_residual = std::numeric_limits<double>::infinity();
    for (int k = 0; k < m; ++k) {
      if (dot(nrm, f.directions[k]) < std::cos(1e-3)) continue;
      const double residual = std::abs(dot(mid, f.directions[k]) - f.values[k]);
      if (residual < best_residual) {
        best_residual = residual;
        best = k;
      }
    }
    if (best < 0 || best_residual > 1e-7 * (1.0 + f_max)) return -1;
    return best;
  };

  std::vector<int> source(verts.size());
  for (size_t i = 0; i < verts.size(); ++i) {
    source[i] = match_edge(verts[i], verts[(i + 1) % verts.size()]);
    if (source[i] < 0) throw Unbounded("unbounded facet direction survived clipping");
  }

  // Merge runs of consecutive edges attributed to one constraint; the vertex
  // between them is an artifact of clipping along the shared line.  Erasing
  // at the wrap point removes the closing edge instead, keeping the edge /
  // source alignment intact.
  changed = true;
  while (changed) {
    changed = false;
    if (verts.size() < 3) throw EmptyInterior("half-plane intersection collapsed");
    for (size_t i = 0; i < verts.size(); ++i) {
      const size_t j = (i + 1) % verts.size();
      if (source[i] != source[j]) continue;
      verts.erase(verts.begin() + j);
      source.erase(source.begin() + j);
      changed = true;
      break;
    }
  }

  ConvexPolygon body = ConvexPolygon::from_vertices(verts);
  std::vector<int> facet_of_direction(m, -1);
  for (size_t i = 0; i < source.size(); ++i) facet_of_direction[source[i]] = static_cast<int>(i);
  return WulffShape{std::move(body), std::move(facet_of_direction)};
}

SupportVector sample_support(const ConvexPolygon& K, const std::vector<Vec2>& dirs) {
  SupportVector sv;
  sv.directions = dirs;
  sv.values.reserve(dirs.size());
  for (const Vec2& u : dirs) sv.values.push_back(support_function(K, u));
  return sv;
}

ConvexPolygon lq_combination(const ConvexPolygon& K, const ConvexPolygon& L,
                             double a, double b, double q,
                             const std::vector<Vec2>& E) {
  if (!(a >= 0.0) || !(b >= 0.0) || !(a + b > 0.0))
    throw InvalidArgument("combination weights must be nonnegative, not both zero");
  if (q == 0.0 || !std::isfinite(q)) throw InvalidArgument("combination exponent must be nonzero");

  SupportVector sv;
  sv.directions = E;
  sv.values.reserve(E.size());

  auto check_origin = [&](const ConvexPolygon& body) {
    if (q < 1.0) {
      if (!(body.origin_margin() > 0.0))
        throw OriginNotInterior("q < 1 combination needs bodies with the origin strictly inside");
    }
  };
  if (a > 0.0) check_origin(K);
  if (b > 0.0) check_origin(L);

  for (const Vec2& u : E) {
    double value = 0.0;
    if (b == 0.0) {
      value = std::pow(a, 1.0 / q) * support_function(K, u);
    } else if (a == 0.0) {
      value = std::pow(b, 1.0 / q) * support_function(L, u);
    } else {
      const double hK = support_function(K, u);
      const double hL = support_function(L, u);
      if (q >= 1.0 && (hK < 0.0 || hL < 0.0))
        throw OriginNotInterior("combination needs nonnegative support values");
      value = std::pow(a * std::pow(hK, q) + b * std::pow(hL, q), 1.0 / q);
    }
    sv.values.push_back(value);
  }
  return wulff_shape(sv).polygon;
}

double hausdorff_distance(const ConvexPolygon& K, const ConvexPolygon& L) {
  std::vector<Vec2> dirs;
  for (int k = 0; k < K.facet_count(); ++k) dirs.push_back(K.facet(k).normal);
  for (int k = 0; k < L.facet_count(); ++k) dirs.push_back(L.facet(k).normal);
  const int grid = 8192;
  for (int i = 0; i < grid; ++i)
    dirs.push_back(direction(2.0 * std::numbers::pi * i / grid));
  double worst = 0.0;
  for (const Vec2& u : dirs)
    worst = std::max(worst, std::abs(support_function(K, u) - support_function(L, u)));
  return worst;
}

}  // namespace ptorsion
