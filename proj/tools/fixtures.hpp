#pragma once

#include "ptorsion/geometry.hpp"

namespace ptorsion::fixtures {

// Axis-aligned square [-half, half]^2.
ConvexPolygon square(double half = 1.0);

ConvexPolygon hexagon(double circumradius = 1.0);

// Dodecagon from support values 1 + 0.05 * uniform(-1, 1) on 12 equispaced
// directions with a random phase; the perturbation is small enough that all
// 12 constraints stay active, so the result always has 12 facets.
ConvexPolygon random_12gon(unsigned seed);

// Regular n-gon stand-in for the unit disk.
ConvexPolygon disk_ngon(int sides = 64, double radius = 1.0);

}  // namespace ptorsion::fixtures
