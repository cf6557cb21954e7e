#pragma once

#include <span>
#include <vector>

#include "afem/mesh.hpp"

namespace afem::quad {

/// A point in barycentric coordinates with a weight that sums to one over
/// the rule; multiply by |T| for the integral.
struct BaryPoint {
  double l0, l1, l2;
  double weight;
};

/// One-point centroid rule, exact for degree 1.
std::span<const BaryPoint> centroid_rule();
/// Edge-midpoint rule, exact for degree 2.
std::span<const BaryPoint> edge_midpoint_rule();
/// Seven-point rule, exact for degree 5.
std::span<const BaryPoint> degree5_rule();

/// Gauss-Legendre points on [0,1] with weights summing to one.
struct LinePoint {
  double s;
  double weight;
};
std::span<const LinePoint> gauss_line3();

inline Vec2 map(const Vec2& a, const Vec2& b, const Vec2& c, const BaryPoint& p) {
  return p.l0 * a + p.l1 * b + p.l2 * c;
}

/// A triangle given by its three corners.
struct Tri {
  Vec2 a, b, c;
  double area() const {
    return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x()));
  }
};

/// Integrates `fn` over `tri` with `rule`.
template <class Fn>
double integrate(const Tri& tri, std::span<const BaryPoint> rule, Fn&& fn) {
  double sum = 0.0;
  for (const auto& p : rule) sum += p.weight * fn(map(tri.a, tri.b, tri.c, p));
  return sum * tri.area();
}

/// Sub-triangles for integrating near a singular corner. `tri` is red-split
/// `depth` times toward vertex `corner` (0, 1 or 2); the pieces not touching
/// the corner are kept as-is.
std::vector<Tri> graded_toward(const Tri& tri, int corner, int depth);

}  // namespace afem::quad
