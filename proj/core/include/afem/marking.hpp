#pragma once

#include <span>
#include <vector>

namespace afem {

struct MarkedSet {
  /// Marked triangles in selection order (descending eta_T^2).
  std::vector<int> triangles;
  /// eta^2(marked) / eta^2; 1 when eta vanishes.
  double fraction = 1.0;
};

/// Bulk marking: the shortest prefix of the triangles sorted by descending
/// eta_T^2 (ties by ascending index) whose sum reaches theta * eta^2.
/// Throws Error(BadTheta) unless 0 < theta <= 1 and Error(InvalidMark) for
/// negative or non-finite entries.
MarkedSet dorfler_mark(std::span<const double> eta_squared, double theta);

}  // namespace afem
