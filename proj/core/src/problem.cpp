#include "afem/problem.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/LU>

#include "afem/errors.hpp"
#include "afem/meshes.hpp"

namespace afem {

CoefficientField CoefficientField::laplace() {
  CoefficientField c;
  c.A = [](const Vec2&) { return Mat2::Identity(); };
  c.b = [](const Vec2&) { return Vec2::Zero(); };
  c.gamma = [](const Vec2&) { return 0.0; };
  c.f = [](const Vec2&) { return 0.0; };
  c.u_D = [](const Vec2&) { return 0.0; };
  c.div_b = [](const Vec2&) { return 0.0; };
  return c;
}

double CoefficientField::divergence_b(const Vec2& x) const {
  if (div_b) return div_b(x);
  const double h = 1e-6 * std::max(1.0, x.norm());
  const Vec2 ex(h, 0.0);
  const Vec2 ey(0.0, h);
  return (b(x + ex).x() - b(x - ex).x() + b(x + ey).y() - b(x - ey).y()) / (2.0 * h);
}

double s_of_t(const Vec2& a, const Vec2& b, const Vec2& c, const Mat2& A_inv) {
  const Vec2 mid = (a + b + c) / 3.0;
  const double area = 0.5 * ((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
  double sum = 0.0;
  for (const Vec2& m : {Vec2(0.5 * (a + b)), Vec2(0.5 * (b + c)), Vec2(0.5 * (c + a))}) {
    const Vec2 d = m - mid;
    sum += d.dot(A_inv * d);
  }
  return area * sum / 3.0;
}

double condensation_factor(double gamma_h, double s_mean) {
  const double denom = 1.0 + 0.25 * gamma_h * s_mean;
  if (std::abs(denom) < 1e-12) {
    throw Error(ErrorCode::SingularLocalFactor,
                "1 + gamma_h S(T)/(4|T|) = " + std::to_string(denom) + "; refine the mesh");
  }
  return 1.0 / denom;
}

PiecewiseData project_p0(const CoefficientField& field, const Triangulation& mesh) {
  const std::size_t nt = mesh.num_triangles();
  PiecewiseData pw;
  pw.A.resize(nt);
  pw.A_inv.resize(nt);
  pw.b.resize(nt);
  pw.b_star.resize(nt);
  pw.gamma.resize(nt);
  pw.f.resize(nt);
  pw.s.resize(nt);
  pw.s_mean.resize(nt);
  const auto& geo = mesh.geometry();
  for (std::size_t t = 0; t < nt; ++t) {
    const Vec2& mid = geo.centroid[t];
    Mat2 A = field.A(mid);
    A = 0.5 * (A + A.transpose()).eval();
    // Sylvester's criterion for a 2x2 symmetric matrix.
    if (!(A(0, 0) > 0.0 && A.determinant() > 0.0)) {
      throw Error(ErrorCode::NotPositiveDefinite,
                  "A is not positive definite at the centroid of triangle " + std::to_string(t));
    }
    pw.A[t] = A;
    pw.A_inv[t] = A.inverse();
    pw.b[t] = field.b(mid);
    pw.b_star[t] = pw.A_inv[t] * pw.b[t];
    pw.gamma[t] = field.gamma(mid);
    pw.f[t] = field.f(mid);
    pw.s[t] = s_of_t(mesh.vertex(t, 0), mesh.vertex(t, 1), mesh.vertex(t, 2), pw.A_inv[t]);
    pw.s_mean[t] = pw.s[t] / geo.area[t];
  }
  return pw;
}

double polar_angle(const Vec2& x) {
  double theta = std::atan2(x.y(), x.x());
  if (theta < 0.0) theta += 2.0 * std::numbers::pi;
  // atan2 of a tiny negative y rounds up to exactly 2 pi.
  return theta < 2.0 * std::numbers::pi ? theta : 0.0;
}

std::vector<double> default_gamma_grid() { return {8.0, 9.0, 9.5, 9.63, 9.64, 9.7, 10.0, 12.0}; }

namespace {

// r^alpha sin(alpha theta) and its gradient alpha r^(alpha-1) (sin((alpha-1)theta), cos((alpha-1)theta)).
double corner_u(const Vec2& x, double alpha) {
  const double r = x.norm();
  if (r == 0.0) return 0.0;
  return std::pow(r, alpha) * std::sin(alpha * polar_angle(x));
}

Vec2 corner_grad(const Vec2& x, double alpha) {
  const double r = x.norm();
  const double theta = polar_angle(x);
  const double scale = alpha * std::pow(r, alpha - 1.0);
  return scale * Vec2(std::sin((alpha - 1.0) * theta), std::cos((alpha - 1.0) * theta));
}

ProblemInstance lshape_problem() {
  // u = r^{2/3} sin(2 theta/3) is harmonic and x . grad u = (2/3) u, so with
  // b = x and gamma = -4: f = -(x . grad u + 2u) - 4u = -(20/3) u.
  constexpr double alpha = 2.0 / 3.0;
  ProblemInstance p;
  p.name = "lshape";
  p.initial_mesh = [] { return meshes::lshape(); };
  p.field.A = [](const Vec2&) { return Mat2::Identity(); };
  p.field.b = [](const Vec2& x) { return x; };
  p.field.div_b = [](const Vec2&) { return 2.0; };
  p.field.gamma = [](const Vec2&) { return -4.0; };
  p.field.f = [](const Vec2& x) { return -(20.0 / 3.0) * corner_u(x, alpha); };
  p.field.u_D = [](const Vec2& x) { return corner_u(x, alpha); };
  ExactSolution ex;
  ex.u = [](const Vec2& x) { return corner_u(x, alpha); };
  ex.grad_u = [](const Vec2& x) { return corner_grad(x, alpha); };
  ex.p = [](const Vec2& x) -> Vec2 { return -(corner_grad(x, alpha) + corner_u(x, alpha) * x); };
  ex.singular_point = Vec2::Zero();
  p.exact = std::move(ex);
  return p;
}

ProblemInstance crack_problem() {
  // u = r^{1/2} sin(theta/2) - y^2/2, b = (x-1, y+1), gamma = 0:
  // f = -Laplace u - b . grad u - (div b) u = 1 - b . grad u - 2u.
  constexpr double alpha = 0.5;
  const auto u = [](const Vec2& x) { return corner_u(x, alpha) - 0.5 * x.y() * x.y(); };
  const auto grad = [](const Vec2& x) -> Vec2 { return corner_grad(x, alpha) - Vec2(0.0, x.y()); };
  const auto b = [](const Vec2& x) { return Vec2(x.x() - 1.0, x.y() + 1.0); };
  ProblemInstance p;
  p.name = "crack";
  p.initial_mesh = [] { return meshes::slit_disc(); };
  p.field.A = [](const Vec2&) { return Mat2::Identity(); };
  p.field.b = b;
  p.field.div_b = [](const Vec2&) { return 2.0; };
  p.field.gamma = [](const Vec2&) { return 0.0; };
  p.field.f = [=](const Vec2& x) { return 1.0 - b(x).dot(grad(x)) - 2.0 * u(x); };
  p.field.u_D = u;
  ExactSolution ex;
  ex.u = u;
  ex.grad_u = grad;
  ex.p = [=](const Vec2& x) -> Vec2 { return -(grad(x) + u(x) * b(x)); };
  ex.singular_point = Vec2::Zero();
  p.exact = std::move(ex);
  return p;
}

ProblemInstance eigen_sweep_problem(double gamma) {
  if (!std::isfinite(gamma)) throw Error(ErrorCode::ConfigError, "gamma must be finite");
  ProblemInstance p;
  p.name = "eigen_sweep";
  p.initial_mesh = [] { return meshes::lshape(); };
  // -Laplace u - gamma u = 1: indefinite once gamma exceeds the first eigenvalue.
  p.field = CoefficientField::laplace();
  p.field.gamma = [gamma](const Vec2&) { return -gamma; };
  p.field.f = [](const Vec2&) { return 1.0; };
  return p;
}

}  // namespace

ProblemInstance benchmark(std::string_view name, double gamma) {
  if (name == "lshape") return lshape_problem();
  if (name == "crack") return crack_problem();
  if (name == "eigen_sweep") return eigen_sweep_problem(gamma);
  throw Error(ErrorCode::UnknownBenchmark, std::string(name));
}

}  // namespace afem
