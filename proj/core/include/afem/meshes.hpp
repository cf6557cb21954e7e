#pragma once

#include <array>
#include <vector>

#include "afem/mesh.hpp"

namespace afem::meshes {

/// Boundary segments of every edge that belongs to exactly one triangle.
std::vector<BoundarySegment> boundary_from_topology(const std::vector<std::array<int, 3>>& triangles,
                                                    int tag = 1);

/// The triangle (0,0), (1,0), (0,1).
Triangulation reference_triangle();

/// (0,1)^2 split along the diagonal from (0,0) to (1,1).
Triangulation unit_square();

/// (0,1)^2 on an n-by-n grid, each cell split along its (0,0)-(1,1) diagonal.
Triangulation unit_square_grid(int n);

/// (-1,1)^2 minus [0,1]x[-1,0] on the 0.5 grid; each cell is split by the
/// diagonal through its corner closest to the origin. 21 vertices, 44 edges,
/// 24 triangles.
Triangulation lshape();

/// Unit disc approximated by a regular 16-gon with the slit [0,1]x{0}.
/// Vertices along the slit are duplicated so both slit faces are boundary
/// edges. The crack tip is the origin.
Triangulation slit_disc();

}  // namespace afem::meshes
