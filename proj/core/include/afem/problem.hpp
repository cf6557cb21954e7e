#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "afem/mesh.hpp"

namespace afem {

using ScalarFn = std::function<double(const Vec2&)>;
using VectorFn = std::function<Vec2(const Vec2&)>;
using MatrixFn = std::function<Mat2(const Vec2&)>;

/// Data of -div(A grad u + u b) + gamma u = f with u = u_D on the boundary.
struct CoefficientField {
  MatrixFn A;
  VectorFn b;
  ScalarFn gamma;
  ScalarFn f;
  ScalarFn u_D;
  /// Optional divergence of b; central differences are used when empty.
  ScalarFn div_b;

  /// A = I, b = 0, gamma = 0, f = 0, u_D = 0.
  static CoefficientField laplace();

  /// Divergence of b at x, from div_b when present.
  double divergence_b(const Vec2& x) const;
};

/// Exact solution used for error norms; p = -(A grad u + u b).
struct ExactSolution {
  ScalarFn u;
  VectorFn grad_u;
  VectorFn p;
  /// Vertex where grad u is singular, refined toward in error quadrature.
  std::optional<Vec2> singular_point;
};

/// Piecewise constant data, one entry per triangle.
struct PiecewiseData {
  std::vector<Mat2> A;
  std::vector<Mat2> A_inv;
  std::vector<Vec2> b;
  std::vector<Vec2> b_star;  // A^{-1} b
  std::vector<double> gamma;
  std::vector<double> f;
  /// Second moment S(T) = int_T (x - mid T) . A^{-1} (x - mid T) dx.
  std::vector<double> s;
  /// Element mean S(T) / |T|, the weight in the local condensation factor.
  std::vector<double> s_mean;

  std::size_t size() const noexcept { return gamma.size(); }
};

/// Piecewise constant projection by centroid evaluation. Throws
/// Error(NotPositiveDefinite) if A at a centroid is not SPD.
PiecewiseData project_p0(const CoefficientField& field, const Triangulation& mesh);

/// S(T) via the edge-midpoint rule, which is exact for the quadratic integrand.
double s_of_t(const Vec2& a, const Vec2& b, const Vec2& c, const Mat2& A_inv);

/// (1 + gamma_h S(T)/(4|T|))^{-1}. Throws Error(SingularLocalFactor) when
/// |1 + gamma_h S(T)/(4|T|)| < 1e-12.
double condensation_factor(double gamma_h, double s_mean);

struct ProblemInstance {
  std::string name;
  std::function<Triangulation()> initial_mesh;
  CoefficientField field;
  std::optional<ExactSolution> exact;
};

/// Benchmark names: "lshape", "crack", "eigen_sweep". Throws
/// Error(UnknownBenchmark) otherwise. `gamma` is only used by eigen_sweep,
/// which solves -Laplace u - gamma u = 1 with zero boundary values.
ProblemInstance benchmark(std::string_view name, double gamma = 9.0);

/// Counterclockwise angle of x in [0, 2 pi).
double polar_angle(const Vec2& x);

/// The first Dirichlet eigenvalue of the Laplacian on the L-shaped domain.
inline constexpr double kLShapeLambda1 = 9.6397238440219;

/// Default gamma grid of the eigenvalue sweep, bracketing kLShapeLambda1.
std::vector<double> default_gamma_grid();

}  // namespace afem
