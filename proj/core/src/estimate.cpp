#include "afem/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/LU>

#include "afem/errors.hpp"
#include "afem/quadrature.hpp"

namespace afem {

namespace {

double sorted_sum(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return std::accumulate(values.begin(), values.end(), 0.0);
}

void require_triangles(const Triangulation& mesh, std::size_t n, const char* what) {
  if (n != mesh.num_triangles()) {
    throw Error(ErrorCode::MeshMismatch, std::string(what) + " does not match the mesh");
  }
}

void require_edges(const Triangulation& mesh, const CRSolution& u_cr) {
  if (u_cr.edge_values.size() != mesh.num_edges()) {
    throw Error(ErrorCode::MeshMismatch, "nonconforming solution does not match the mesh");
  }
}

// Value of the CR function restricted to t at local vertex k.
double cr_vertex_trace(const CRSolution& u, const Triangulation& mesh, int t, int k) {
  const auto& te = mesh.triangle_edges()[t];
  return u.edge_values[te[(k + 1) % 3]] + u.edge_values[te[(k + 2) % 3]] - u.edge_values[te[k]];
}

}  // namespace

double EstimatorTerm::norm() const { return std::sqrt(sorted_sum(squared)); }

double EstimatorReport::eta() const { return std::sqrt(sorted_sum(eta_squared_per_triangle())); }

double EstimatorReport::eta_with_data() const {
  auto local = eta_squared_per_triangle();
  for (const auto& t : data_terms) {
    for (std::size_t i = 0; i < local.size(); ++i) local[i] += t.squared[i];
  }
  return std::sqrt(sorted_sum(std::move(local)));
}

std::vector<double> EstimatorReport::eta_squared_per_triangle() const {
  if (terms.empty()) return {};
  std::vector<double> out(terms.front().squared.size(), 0.0);
  for (const auto& t : terms) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += t.squared[i];
  }
  return out;
}

const EstimatorTerm& EstimatorReport::term(const std::string& name) const {
  for (const auto* list : {&terms, &data_terms}) {
    for (const auto& t : *list) {
      if (t.name == name) return t;
    }
  }
  throw Error(ErrorCode::ConfigError, "no estimator term named " + name);
}

std::vector<double> average_cr(const Triangulation& mesh, const CRSolution& u_cr) {
  require_edges(mesh, u_cr);
  std::vector<double> sum(mesh.num_vertices(), 0.0);
  std::vector<int> count(mesh.num_vertices(), 0);
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    for (int k = 0; k < 3; ++k) {
      const int z = mesh.triangles()[t][k];
      sum[z] += cr_vertex_trace(u_cr, mesh, t, k);
      ++count[z];
    }
  }
  for (std::size_t z = 0; z < sum.size(); ++z) {
    if (count[z] > 0) sum[z] /= count[z];
  }
  return sum;
}

Vec2 p1_gradient(const Triangulation& mesh, int t, const std::vector<double>& nodal) {
  const double two_area = 2.0 * mesh.geometry().area[t];
  Vec2 g = Vec2::Zero();
  for (int k = 0; k < 3; ++k) {
    const Vec2 e = mesh.vertex(t, (k + 2) % 3) - mesh.vertex(t, (k + 1) % 3);
    g += nodal[mesh.triangles()[t][k]] * Vec2(-e.y(), e.x()) / two_area;
  }
  return g;
}

EstimatorReport estimate_mixed(const Triangulation& mesh, const MixedSolution& mixed, const CRSolution& u_cr,
                               const CoefficientField& field, const PiecewiseData& pw) {
  require_triangles(mesh, mixed.num_triangles(), "mixed solution");
  require_triangles(mesh, pw.size(), "piecewise data");
  require_edges(mesh, u_cr);
  const int nt = static_cast<int>(mesh.num_triangles());
  const auto& geo = mesh.geometry();
  const auto averaged = average_cr(mesh, u_cr);
  const auto quad2 = quad::edge_midpoint_rule();
  const auto quad5 = quad::degree5_rule();

  std::vector<double> osc(nt), volume(nt), nonconf(nt), coeff_a(nt), coeff_b(nt);
  double h2_load = 0.0, h_div = 0.0;
  for (int t = 0; t < nt; ++t) {
    const quad::Tri tri{mesh.vertex(t, 0), mesh.vertex(t, 1), mesh.vertex(t, 2)};
    const double u_m = mixed.u[t];
    const double h = geo.diameter[t];
    const double mean_residual = pw.f[t] - pw.gamma[t] * u_m;
    osc[t] = quad::integrate(tri, quad5, [&](const Vec2& x) {
      return std::pow(field.f(x) - field.gamma(x) * u_m - mean_residual, 2);
    });
    // v = -(averaged u_CR), so the term is A_h^{-1} p + u_M b*_h + grad(averaged).
    const Vec2 grad_avg = p1_gradient(mesh, t, averaged);
    const auto discrete_grad = [&](const Vec2& x) -> Vec2 {
      return pw.A_inv[t] * mixed.flux(t, x) + u_m * pw.b_star[t];
    };
    volume[t] = h * h * quad::integrate(tri, quad2, [&](const Vec2& x) { return discrete_grad(x).squaredNorm(); });
    nonconf[t] =
        quad::integrate(tri, quad2, [&](const Vec2& x) { return (discrete_grad(x) + grad_avg).squaredNorm(); });
    coeff_a[t] = quad::integrate(tri, quad2, [&](const Vec2& x) {
      const Mat2 a_inv = field.A(x).inverse();
      return ((a_inv - pw.A_inv[t]) * mixed.flux(t, x)).squaredNorm();
    });
    coeff_b[t] = quad::integrate(tri, quad2, [&](const Vec2& x) {
      const Vec2 b_star = field.A(x).inverse() * field.b(x);
      return u_m * u_m * (b_star - pw.b_star[t]).squaredNorm();
    });
    h2_load += std::pow(h * h * pw.f[t], 2) * geo.area[t];
    h_div += std::pow(h * mean_residual, 2) * geo.area[t];
  }
  EstimatorReport r;
  r.terms = {{"volume", std::move(volume)}, {"nonconformity", std::move(nonconf)}};
  r.data_terms = {{"osc", std::move(osc)}, {"coeff_A", std::move(coeff_a)}, {"coeff_b", std::move(coeff_b)}};
  r.h2_load = std::sqrt(h2_load);
  r.h_divergence = std::sqrt(h_div);
  return r;
}

EstimatorReport estimate_nc(const Triangulation& mesh, const CRSolution& u_cr, const CoefficientField& field) {
  require_edges(mesh, u_cr);
  const PiecewiseData pw = project_p0(field, mesh);
  const int nt = static_cast<int>(mesh.num_triangles());
  const auto& geo = mesh.geometry();
  const auto quad5 = quad::degree5_rule();

  std::vector<Vec2> grads(nt);
  std::vector<double> volume(nt), jump(nt, 0.0);
  for (int t = 0; t < nt; ++t) {
    const quad::Tri tri{mesh.vertex(t, 0), mesh.vertex(t, 1), mesh.vertex(t, 2)};
    grads[t] = u_cr.gradient(mesh, t);
    const Vec2 g = grads[t];
    // div p_CR = -(b . grad u_CR + u_CR div b) since A_h grad u_CR is constant.
    const double h = geo.diameter[t];
    volume[t] = h * h * quad::integrate(tri, quad5, [&](const Vec2& x) {
      const double u = u_cr.value(mesh, t, x);
      const double div_p = -(field.b(x).dot(g) + u * field.divergence_b(x));
      return std::pow(field.f(x) - field.gamma(x) * u - div_p, 2);
    });
  }
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    const auto& nb = mesh.edge_neighbours()[e];
    if (nb.is_boundary()) continue;
    const Vec2 a = mesh.vertices()[mesh.edges()[e][0]];
    const Vec2 b = mesh.vertices()[mesh.edges()[e][1]];
    const Vec2& nu = geo.normal[e];
    const double len = geo.length[e];
    double integral = 0.0;
    for (const auto& qp : quad::gauss_line3()) {
      const Vec2 x = a + qp.s * (b - a);
      const auto p_cr = [&](int t) -> Vec2 {
        return -(pw.A[t] * grads[t] + u_cr.value(mesh, t, x) * field.b(x));
      };
      integral += qp.weight * len * std::pow((p_cr(nb.plus) - p_cr(nb.minus)).dot(nu), 2);
    }
    const double contribution = len * integral;
    jump[nb.plus] += 0.5 * contribution;
    jump[nb.minus] += 0.5 * contribution;
  }
  EstimatorReport r;
  r.terms = {{"volume", std::move(volume)}, {"jump", std::move(jump)}};
  return r;
}

}  // namespace afem
