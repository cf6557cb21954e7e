#include "afem/marking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "afem/errors.hpp"

namespace afem {

MarkedSet dorfler_mark(std::span<const double> eta_squared, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw Error(ErrorCode::BadTheta, "theta must lie in (0, 1], got " + std::to_string(theta));
  }
  for (double v : eta_squared) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidMark, "eta_T^2 must be finite and >= 0");
  }
  std::vector<int> order(eta_squared.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return eta_squared[a] > eta_squared[b]; });

  // Summing in the selection order makes the full prefix equal the total
  // exactly, so theta = 1 always terminates.
  double total = 0.0;
  for (int t : order) total += eta_squared[t];

  MarkedSet out;
  if (total == 0.0) return out;
  const double goal = theta * total;
  double acc = 0.0;
  for (int t : order) {
    if (acc >= goal) break;
    acc += eta_squared[t];
    out.triangles.push_back(t);
  }
  out.fraction = acc / total;
  return out;
}

}  // namespace afem
