#pragma once

#include <span>

#include "afem/mesh.hpp"

namespace afem {

/// Red-refines every triangle: four similar children through the edge
/// midpoints. V' = V + E, E' = 2E + 3T, T' = 4T.
Triangulation uniform_red_refine(const Triangulation& mesh);

/// Red-green-blue refinement of the marked triangles with conforming closure.
///
/// Marked triangles are red-refined. Closure marks the refinement edge of any
/// triangle that has a marked edge, until a fixed point is reached; then a
/// triangle with three marked edges is refined red, with two blue, and with
/// only its refinement edge green. A marked triangle that is half of a green
/// pair is first merged back into its parent, and the parent is refined red.
///
/// Throws Error(InvalidMark) for out-of-range indices. An empty mark set
/// returns the mesh unchanged.
Triangulation rgb_refine(const Triangulation& mesh, std::span<const int> marked);

}  // namespace afem
