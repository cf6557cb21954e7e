#include "afem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <unordered_map>

#include "afem/errors.hpp"

namespace afem {

namespace {

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x()));
}

std::string tri_str(int t, const std::array<int, 3>& tri) {
  return "triangle " + std::to_string(t) + " (" + std::to_string(tri[0]) + ", " +
         std::to_string(tri[1]) + ", " + std::to_string(tri[2]) + ")";
}

}  // namespace

Triangulation Triangulation::build(std::vector<Vec2> vertices,
                                   std::vector<std::array<int, 3>> triangles,
                                   std::span<const BoundarySegment> boundary,
                                   std::vector<int> green_sibling) {
  Triangulation m;
  const int nv = static_cast<int>(vertices.size());
  const int nt = static_cast<int>(triangles.size());

  for (int t = 0; t < nt; ++t) {
    for (int v : triangles[t]) {
      if (v < 0 || v >= nv) throw Error(ErrorCode::InvalidIndex, tri_str(t, triangles[t]));
    }
    const auto& tri = triangles[t];
    const Vec2& a = vertices[tri[0]];
    const Vec2& b = vertices[tri[1]];
    const Vec2& c = vertices[tri[2]];
    const double h2 = std::max({(b - a).squaredNorm(), (c - b).squaredNorm(), (a - c).squaredNorm()});
    if (!(signed_area(a, b, c) > 1e-14 * h2)) {
      throw Error(ErrorCode::NonPositiveArea, tri_str(t, tri) + " is degenerate or clockwise");
    }
  }

  // Edge extraction. Each oriented half-edge may occur once; each undirected
  // edge at most twice, in opposite directions.
  std::unordered_map<std::uint64_t, int> edge_index;
  edge_index.reserve(static_cast<std::size_t>(nt) * 2);
  m.triangle_edges_.resize(nt);
  m.triangle_edge_signs_.resize(nt);
  for (int t = 0; t < nt; ++t) {
    const auto& tri = triangles[t];
    for (int k = 0; k < 3; ++k) {
      const int from = tri[(k + 1) % 3];
      const int to = tri[(k + 2) % 3];
      const auto key = edge_key(from, to);
      auto [it, inserted] = edge_index.try_emplace(key, static_cast<int>(m.edges_.size()));
      const int e = it->second;
      if (inserted) {
        m.edges_.push_back({std::min(from, to), std::max(from, to)});
        m.edge_neighbours_.emplace_back();
      }
      // nu_E is the canonical direction (lo -> hi) rotated counterclockwise.
      // For a counterclockwise triangle the outward normal of the traversal
      // from -> to is that direction rotated clockwise, so nu_E points out
      // of T exactly when the traversal runs hi -> lo.
      const int sign = from > to ? 1 : -1;
      m.triangle_edges_[t][k] = e;
      m.triangle_edge_signs_[t][k] = sign;
      auto& nb = m.edge_neighbours_[e];
      int& slot = sign > 0 ? nb.plus : nb.minus;
      int& slot_local = sign > 0 ? nb.plus_local : nb.minus_local;
      if (slot >= 0) {
        throw Error(ErrorCode::HangingNode,
                    "edge (" + std::to_string(from) + ", " + std::to_string(to) +
                        ") is used with the same orientation by triangles " + std::to_string(slot) +
                        " and " + std::to_string(t));
      }
      slot = t;
      slot_local = k;
    }
  }

  const int ne = static_cast<int>(m.edges_.size());
  m.boundary_tags_.assign(ne, -1);
  for (const auto& seg : boundary) {
    if (seg.a < 0 || seg.a >= nv || seg.b < 0 || seg.b >= nv) {
      throw Error(ErrorCode::DanglingBoundaryTag,
                  "boundary segment references vertex outside [0, " + std::to_string(nv) + ")");
    }
    const auto it = edge_index.find(edge_key(seg.a, seg.b));
    if (it == edge_index.end() || !m.edge_neighbours_[it->second].is_boundary()) {
      throw Error(ErrorCode::DanglingBoundaryTag,
                  "boundary segment (" + std::to_string(seg.a) + ", " + std::to_string(seg.b) +
                      ") is not a boundary edge of the triangulation");
    }
    m.boundary_tags_[it->second] = std::max(seg.tag, 0);
  }
  for (int e = 0; e < ne; ++e) {
    if (m.edge_neighbours_[e].is_boundary()) {
      if (m.boundary_tags_[e] < 0) {
        throw Error(ErrorCode::HangingNode,
                    "edge (" + std::to_string(m.edges_[e][0]) + ", " + std::to_string(m.edges_[e][1]) +
                        ") has one neighbour but is not a tagged boundary edge");
      }
      m.boundary_edges_.push_back(e);
    }
  }

  m.vertices_ = std::move(vertices);
  m.triangles_ = std::move(triangles);
  if (green_sibling.empty()) green_sibling.assign(nt, -1);
  if (static_cast<int>(green_sibling.size()) != nt) {
    throw Error(ErrorCode::InvalidIndex, "green_sibling has wrong length");
  }
  m.green_sibling_ = std::move(green_sibling);

  auto& g = m.geometry_;
  g.area.resize(nt);
  g.diameter.resize(nt);
  g.centroid.resize(nt);
  for (int t = 0; t < nt; ++t) {
    const Vec2& a = m.vertex(t, 0);
    const Vec2& b = m.vertex(t, 1);
    const Vec2& c = m.vertex(t, 2);
    g.area[t] = signed_area(a, b, c);
    g.diameter[t] = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
    g.centroid[t] = (a + b + c) / 3.0;
  }
  g.length.resize(ne);
  g.midpoint.resize(ne);
  g.normal.resize(ne);
  for (int e = 0; e < ne; ++e) {
    const Vec2& lo = m.vertices_[m.edges_[e][0]];
    const Vec2& hi = m.vertices_[m.edges_[e][1]];
    const Vec2 d = hi - lo;
    g.length[e] = d.norm();
    g.midpoint[e] = 0.5 * (lo + hi);
    g.normal[e] = Vec2(-d.y(), d.x()) / g.length[e];
  }
  return m;
}

std::vector<BoundarySegment> Triangulation::boundary_segments() const {
  std::vector<BoundarySegment> out;
  out.reserve(boundary_edges_.size());
  for (int e : boundary_edges_) out.push_back({edges_[e][0], edges_[e][1], boundary_tags_[e]});
  return out;
}

double Triangulation::total_area() const {
  double sum = 0.0;
  for (double a : geometry_.area) sum += a;
  return sum;
}

double Triangulation::min_angle() const {
  double best = std::numbers::pi;
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    for (int k = 0; k < 3; ++k) {
      const Vec2 p = vertices_[triangles_[t][k]];
      const Vec2 u = vertices_[triangles_[t][(k + 1) % 3]] - p;
      const Vec2 v = vertices_[triangles_[t][(k + 2) % 3]] - p;
      const double cosang = u.dot(v) / (u.norm() * v.norm());
      best = std::min(best, std::acos(std::clamp(cosang, -1.0, 1.0)));
    }
  }
  return best;
}

Triangulation build_mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
                         std::span<const BoundarySegment> boundary) {
  return Triangulation::build(std::move(vertices), std::move(triangles), boundary);
}

void orient_longest_edge_first(const std::vector<Vec2>& vertices,
                               std::vector<std::array<int, 3>>& triangles) {
  for (auto& tri : triangles) {
    // Local edge k is opposite vertex k; the refinement edge is local edge 2.
    int longest = 2;
    double best = (vertices[tri[1]] - vertices[tri[0]]).squaredNorm();
    for (int k = 0; k < 2; ++k) {
      const double len = (vertices[tri[(k + 2) % 3]] - vertices[tri[(k + 1) % 3]]).squaredNorm();
      if (len > best * (1.0 + 1e-12)) {
        best = len;
        longest = k;
      }
    }
    // Rotate so that old local vertex `longest` lands in slot 2.
    const std::array<int, 3> old = tri;
    for (int k = 0; k < 3; ++k) tri[k] = old[(longest + 1 + k) % 3];
  }
}

}  // namespace afem
