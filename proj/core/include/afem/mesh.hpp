#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace afem {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// A boundary edge given by its two endpoint vertex indices and an integer tag.
struct BoundarySegment {
  int a = 0;
  int b = 0;
  int tag = 0;
};

/// Per-element and per-edge geometric quantities, computed once at build time.
struct GeometryCache {
  std::vector<double> area;      // |T|
  std::vector<double> diameter;  // h_T, the longest edge of T
  std::vector<Vec2> centroid;    // mid(T)
  std::vector<double> length;    // |E|
  std::vector<Vec2> midpoint;    // mid(E)
  std::vector<Vec2> normal;      // nu_E, canonical direction rotated counterclockwise
};

/// Adjacent triangles of an edge. `plus` is the triangle nu_E points out of;
/// `minus` is -1 for boundary edges whose only triangle sees nu_E inward.
struct EdgeNeighbours {
  int plus = -1;
  int minus = -1;
  int plus_local = -1;
  int minus_local = -1;

  bool is_boundary() const noexcept { return plus < 0 || minus < 0; }
  int count() const noexcept { return (plus >= 0) + (minus >= 0); }
};

/// Conforming triangulation of a polygonal domain.
///
/// Triangles are stored counterclockwise. Local edge k is opposite local
/// vertex k; local edge 2 (vertices 0 and 1) is the refinement edge used by
/// red-green-blue refinement. Edges are stored with canonical orientation
/// (smaller vertex index first). The mesh is immutable once built.
class Triangulation {
 public:
  Triangulation() = default;

  /// Validates and builds the edge structure. Throws afem::Error with
  /// NonPositiveArea, HangingNode or DanglingBoundaryTag.
  ///
  /// `green_sibling` records green-bisection provenance: entry t holds the
  /// index of the other half of the green pair t belongs to, or -1.
  static Triangulation build(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
                             std::span<const BoundarySegment> boundary,
                             std::vector<int> green_sibling = {});

  std::size_t num_vertices() const noexcept { return vertices_.size(); }
  std::size_t num_triangles() const noexcept { return triangles_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::size_t num_boundary_edges() const noexcept { return boundary_edges_.size(); }

  /// Raviart-Thomas plus P0 unknowns: one per edge and one per triangle.
  std::size_t mixed_ndof() const noexcept { return edges_.size() + triangles_.size(); }

  const std::vector<Vec2>& vertices() const noexcept { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const noexcept { return triangles_; }
  const std::vector<std::array<int, 2>>& edges() const noexcept { return edges_; }
  const std::vector<std::array<int, 3>>& triangle_edges() const noexcept { return triangle_edges_; }
  const std::vector<std::array<int, 3>>& triangle_edge_signs() const noexcept { return triangle_edge_signs_; }
  const std::vector<EdgeNeighbours>& edge_neighbours() const noexcept { return edge_neighbours_; }
  const std::vector<int>& boundary_edges() const noexcept { return boundary_edges_; }
  /// Per-edge tag; -1 for interior edges.
  const std::vector<int>& boundary_tags() const noexcept { return boundary_tags_; }
  const std::vector<int>& green_sibling() const noexcept { return green_sibling_; }
  const GeometryCache& geometry() const noexcept { return geometry_; }

  bool is_boundary_edge(int e) const noexcept { return boundary_tags_[e] >= 0; }

  Vec2 vertex(int t, int k) const { return vertices_[triangles_[t][k]]; }

  /// Boundary edges as (a, b, tag) segments, in edge order.
  std::vector<BoundarySegment> boundary_segments() const;

  double total_area() const;
  /// Smallest interior angle over all triangles, in radians.
  double min_angle() const;

 private:
  std::vector<Vec2> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<int, 3>> triangle_edges_;
  std::vector<std::array<int, 3>> triangle_edge_signs_;
  std::vector<EdgeNeighbours> edge_neighbours_;
  std::vector<int> boundary_edges_;
  std::vector<int> boundary_tags_;
  std::vector<int> green_sibling_;
  GeometryCache geometry_;
};

/// Free-function form of Triangulation::build.
Triangulation build_mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
                         std::span<const BoundarySegment> boundary);

/// Rotates each triangle's vertex list (keeping orientation) so that its
/// longest edge becomes the refinement edge. Ties keep the earliest edge.
void orient_longest_edge_first(const std::vector<Vec2>& vertices,
                               std::vector<std::array<int, 3>>& triangles);

/// Packs an unordered vertex pair into a hashable key.
inline std::uint64_t edge_key(int a, int b) noexcept {
  const auto lo = static_cast<std::uint64_t>(a < b ? a : b);
  const auto hi = static_cast<std::uint64_t>(a < b ? b : a);
  return (lo << 32) | hi;
}

}  // namespace afem
