#include "fixtures.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace ptorsion::fixtures {

ConvexPolygon square(double half) {
  return regular_polygon(4, half * std::numbers::sqrt2, std::numbers::pi / 4.0);
}

ConvexPolygon hexagon(double circumradius) {
  return regular_polygon(6, circumradius);
}

ConvexPolygon random_12gon(unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> bump(-0.05, 0.05);
  const double phase = angle(rng);
  SupportVector f;
  for (int k = 0; k < 12; ++k) {
    f.directions.push_back(direction(phase + k * std::numbers::pi / 6.0));
    f.values.push_back(1.0 + bump(rng));
  }
  return wulff_shape(f).polygon;
}

ConvexPolygon disk_ngon(int sides, double radius) {
  return regular_polygon(sides, radius);
}

}  // namespace ptorsion::fixtures
