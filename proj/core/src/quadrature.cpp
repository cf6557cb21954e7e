#include "afem/quadrature.hpp"

#include <array>
#include <cmath>

namespace afem::quad {

namespace {

constexpr std::array<BaryPoint, 1> kCentroid{{{1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0}}};

constexpr std::array<BaryPoint, 3> kEdgeMid{{
    {0.0, 0.5, 0.5, 1.0 / 3},
    {0.5, 0.0, 0.5, 1.0 / 3},
    {0.5, 0.5, 0.0, 1.0 / 3},
}};

// Radon's seven-point rule.
const std::array<BaryPoint, 7> kDegree5 = [] {
  const double s15 = std::sqrt(15.0);
  const double a1 = (6.0 - s15) / 21.0;
  const double b1 = (9.0 + 2.0 * s15) / 21.0;
  const double a2 = (6.0 + s15) / 21.0;
  const double b2 = (9.0 - 2.0 * s15) / 21.0;
  const double w1 = (155.0 - s15) / 1200.0;
  const double w2 = (155.0 + s15) / 1200.0;
  return std::array<BaryPoint, 7>{{
      {1.0 / 3, 1.0 / 3, 1.0 / 3, 9.0 / 40},
      {a1, a1, b1, w1},
      {a1, b1, a1, w1},
      {b1, a1, a1, w1},
      {a2, a2, b2, w2},
      {a2, b2, a2, w2},
      {b2, a2, a2, w2},
  }};
}();

const std::array<LinePoint, 3> kGauss3 = [] {
  const double r = std::sqrt(0.6) / 2.0;
  return std::array<LinePoint, 3>{{{0.5 - r, 5.0 / 18}, {0.5, 8.0 / 18}, {0.5 + r, 5.0 / 18}}};
}();

}  // namespace

std::span<const BaryPoint> centroid_rule() { return kCentroid; }
std::span<const BaryPoint> edge_midpoint_rule() { return kEdgeMid; }
std::span<const BaryPoint> degree5_rule() { return kDegree5; }
std::span<const LinePoint> gauss_line3() { return kGauss3; }

std::vector<Tri> graded_toward(const Tri& tri, int corner, int depth) {
  std::vector<Tri> out;
  std::array<Vec2, 3> v{tri.a, tri.b, tri.c};
  // Rotate so the singular corner is v[0]; orientation is preserved.
  std::array<Vec2, 3> p{v[corner], v[(corner + 1) % 3], v[(corner + 2) % 3]};
  for (int level = 0; level < depth; ++level) {
    const Vec2 m01 = 0.5 * (p[0] + p[1]);
    const Vec2 m12 = 0.5 * (p[1] + p[2]);
    const Vec2 m20 = 0.5 * (p[2] + p[0]);
    out.push_back({m01, p[1], m12});
    out.push_back({m20, m12, p[2]});
    out.push_back({m12, m20, m01});
    p = {p[0], m01, m20};
  }
  out.push_back({p[0], p[1], p[2]});
  return out;
}

}  // namespace afem::quad
