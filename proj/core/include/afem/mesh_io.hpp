#pragma once

#include <filesystem>
#include <iosfwd>

#include "afem/mesh.hpp"

namespace afem {

// Plain-text mesh format:
//
//   vertices N / triangles M / boundary K
//   x y          (N lines)
//   i j k        (M lines, counterclockwise, 0-based)
//   i j tag      (K lines)
//
// Tokens are whitespace separated and '#' starts a line comment. The header
// keywords may also appear on separate lines and the '/' separators are
// optional.

/// Parses a mesh; the refinement edge of each triangle is set to its longest
/// edge. Throws Error(ParseError) on malformed input and the build_mesh
/// errors on invalid geometry.
Triangulation read_mesh(std::istream& in);
Triangulation read_mesh(const std::filesystem::path& path);

/// Writes vertices, triangles (in stored vertex order) and boundary segments.
void write_mesh(std::ostream& out, const Triangulation& mesh);
void write_mesh(const std::filesystem::path& path, const Triangulation& mesh);

}  // namespace afem
