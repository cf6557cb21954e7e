#include "afem/meshes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <unordered_map>

#include "afem/errors.hpp"

namespace afem::meshes {

std::vector<BoundarySegment> boundary_from_topology(const std::vector<std::array<int, 3>>& triangles,
                                                    int tag) {
  std::unordered_map<std::uint64_t, int> count;
  std::vector<std::pair<int, int>> order;
  for (const auto& tri : triangles) {
    for (int k = 0; k < 3; ++k) {
      const int a = tri[(k + 1) % 3];
      const int b = tri[(k + 2) % 3];
      if (count[edge_key(a, b)]++ == 0) order.emplace_back(a, b);
    }
  }
  std::vector<BoundarySegment> out;
  for (const auto& [a, b] : order) {
    if (count[edge_key(a, b)] == 1) out.push_back({a, b, tag});
  }
  return out;
}

namespace {

Triangulation finish(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles) {
  orient_longest_edge_first(vertices, triangles);
  const auto boundary = boundary_from_topology(triangles);
  return build_mesh(std::move(vertices), std::move(triangles), boundary);
}

}  // namespace

Triangulation reference_triangle() {
  return finish({Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)}, {{0, 1, 2}});
}

Triangulation unit_square() { return unit_square_grid(1); }

Triangulation unit_square_grid(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidIndex, "grid size must be positive");
  std::vector<Vec2> vertices;
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) vertices.emplace_back(double(i) / n, double(j) / n);
  }
  const auto id = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::array<int, 3>> triangles;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return finish(std::move(vertices), std::move(triangles));
}

Triangulation lshape() {
  constexpr double h = 0.5;
  std::map<std::pair<int, int>, int> index;  // grid coordinates in units of h
  std::vector<Vec2> vertices;
  const auto vid = [&](int i, int j) {
    auto [it, inserted] = index.try_emplace({i, j}, static_cast<int>(vertices.size()));
    if (inserted) vertices.emplace_back(i * h, j * h);
    return it->second;
  };
  // Register vertices row by row so numbering is stable.
  for (int j = -2; j <= 2; ++j) {
    for (int i = -2; i <= 2; ++i) {
      if (i > 0 && j < 0) continue;
      vid(i, j);
    }
  }

  std::vector<std::array<int, 3>> triangles;
  for (int j = -2; j < 2; ++j) {
    for (int i = -2; i < 2; ++i) {
      if (i >= 0 && j < 0) continue;  // removed quadrant [0,1]x[-1,0]
      const std::array<std::pair<int, int>, 4> corner{{{i, j}, {i + 1, j}, {i + 1, j + 1}, {i, j + 1}}};
      int closest = 0;
      for (int c = 1; c < 4; ++c) {
        const auto n2 = [](std::pair<int, int> p) { return p.first * p.first + p.second * p.second; };
        if (n2(corner[c]) < n2(corner[closest])) closest = c;
      }
      const int a = closest;
      const int b = (closest + 1) % 4;
      const int c = (closest + 2) % 4;
      const int d = (closest + 3) % 4;
      const auto v = [&](int k) { return vid(corner[k].first, corner[k].second); };
      // Corners are counterclockwise, so both halves of the split along a-c are too.
      triangles.push_back({v(a), v(b), v(c)});
      triangles.push_back({v(a), v(c), v(d)});
    }
  }
  return finish(std::move(vertices), std::move(triangles));
}

Triangulation slit_disc() {
  constexpr int inner = 8;
  constexpr int outer = 16;
  std::vector<Vec2> vertices;
  vertices.emplace_back(0.0, 0.0);
  // Angle 0 and 2*pi carry separate vertices at the same coordinates.
  const int inner0 = 1;
  for (int k = 0; k <= inner; ++k) {
    const double phi = 2.0 * std::numbers::pi * k / inner;
    vertices.emplace_back(k == inner ? 0.5 : 0.5 * std::cos(phi), k == inner ? 0.0 : 0.5 * std::sin(phi));
  }
  const int outer0 = inner0 + inner + 1;
  for (int k = 0; k <= outer; ++k) {
    const double phi = 2.0 * std::numbers::pi * k / outer;
    vertices.emplace_back(k == outer ? 1.0 : std::cos(phi), k == outer ? 0.0 : std::sin(phi));
  }

  std::vector<std::array<int, 3>> triangles;
  for (int k = 0; k < inner; ++k) triangles.push_back({0, inner0 + k, inner0 + k + 1});
  for (int k = 0; k < inner; ++k) {
    const int i0 = inner0 + k;
    const int i1 = inner0 + k + 1;
    const int o0 = outer0 + 2 * k;
    triangles.push_back({i0, o0, o0 + 1});
    triangles.push_back({i0, o0 + 1, i1});
    triangles.push_back({i1, o0 + 1, o0 + 2});
  }
  return finish(std::move(vertices), std::move(triangles));
}

}  // namespace afem::meshes
