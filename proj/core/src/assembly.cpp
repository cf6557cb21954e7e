#include "afem/assembly.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <string>

#include "afem/errors.hpp"
#include "afem/quadrature.hpp"

namespace afem {

namespace {

using Triplet = Eigen::Triplet<double>;

SparseMatrix compress(std::size_t rows, std::size_t cols, std::vector<Triplet>& triplets) {
  // Sorting fixes the summation order of duplicates regardless of how the
  // element loop produced them.
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& l, const Triplet& r) {
    return l.col() != r.col() ? l.col() < r.col() : l.row() < r.row();
  });
  SparseMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

void check_sizes(const Triangulation& mesh, const PiecewiseData& pw) {
  if (pw.size() != mesh.num_triangles()) {
    throw Error(ErrorCode::MeshMismatch, "piecewise data has " + std::to_string(pw.size()) +
                                             " entries for " + std::to_string(mesh.num_triangles()) +
                                             " triangles");
  }
}

SparseSystem nonconforming_system(const Triangulation& mesh, std::vector<Triplet>& triplets,
                                  Eigen::VectorXd rhs) {
  SparseSystem sys;
  sys.kind = SparseSystem::Kind::Nonconforming;
  sys.num_edges = mesh.num_edges();
  sys.num_triangles = mesh.num_triangles();
  sys.matrix = compress(mesh.num_edges(), mesh.num_edges(), triplets);
  sys.rhs = std::move(rhs);
  sys.dof_of_edge.resize(mesh.num_edges());
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) sys.dof_of_edge[e] = static_cast<int>(e);
  return sys;
}

}  // namespace

std::array<Vec2, 3> cr_gradients(const Triangulation& mesh, int t) {
  const double two_area = 2.0 * mesh.geometry().area[t];
  std::array<Vec2, 3> g;
  for (int k = 0; k < 3; ++k) {
    const Vec2 e = mesh.vertex(t, (k + 2) % 3) - mesh.vertex(t, (k + 1) % 3);
    // grad lambda_k is the inward normal of the opposite edge scaled by 1/height.
    const Vec2 grad_lambda = Vec2(-e.y(), e.x()) / two_area;
    g[k] = -2.0 * grad_lambda;
  }
  return g;
}

Mat3 cr_diffusion_matrix(double area, const std::array<Vec2, 3>& grads, const Mat2& A) {
  Mat3 K;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) K(i, j) = area * grads[i].dot(A * grads[j]);
  }
  return K;
}

Mat3 cr_convection_matrix(double area, const std::array<Vec2, 3>& grads, const Vec2& b) {
  // (psi_j b, grad psi_i) with int_T psi_j = |T|/3.
  Mat3 K;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) K(i, j) = area / 3.0 * b.dot(grads[i]);
  }
  return K;
}

Mat3 cr_reaction_matrix(double area, double gamma) {
  // The local basis is L2-orthogonal with int_T psi_i^2 = |T|/3.
  return Mat3::Identity() * (gamma * area / 3.0);
}

Vec2 CRSolution::gradient(const Triangulation& mesh, int t) const {
  const auto grads = cr_gradients(mesh, t);
  const auto& te = mesh.triangle_edges()[t];
  Vec2 g = Vec2::Zero();
  for (int k = 0; k < 3; ++k) g += edge_values[te[k]] * grads[k];
  return g;
}

double CRSolution::mean(const Triangulation& mesh, int t) const {
  const auto& te = mesh.triangle_edges()[t];
  return (edge_values[te[0]] + edge_values[te[1]] + edge_values[te[2]]) / 3.0;
}

double CRSolution::value(const Triangulation& mesh, int t, const Vec2& x) const {
  return mean(mesh, t) + gradient(mesh, t).dot(x - mesh.geometry().centroid[t]);
}

Vec2 rt_basis(const Triangulation& mesh, int t, int k, const Vec2& x) {
  const int e = mesh.triangle_edges()[t][k];
  const double sign = mesh.triangle_edge_signs()[t][k];
  const double scale = sign * mesh.geometry().length[e] / (2.0 * mesh.geometry().area[t]);
  return scale * (x - mesh.vertex(t, k));
}

SparseSystem assemble_ncfem(const Triangulation& mesh, const PiecewiseData& pw) {
  check_sizes(mesh, pw);
  const auto& geo = mesh.geometry();
  std::vector<Triplet> triplets;
  triplets.reserve(9 * mesh.num_triangles());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_edges()));
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    const double area = geo.area[t];
    const auto grads = cr_gradients(mesh, t);
    const Mat3 K = cr_diffusion_matrix(area, grads, pw.A[t]) + cr_convection_matrix(area, grads, pw.b[t]) +
                   cr_reaction_matrix(area, pw.gamma[t]);
    const auto& te = mesh.triangle_edges()[t];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) triplets.emplace_back(te[i], te[j], K(i, j));
      rhs[te[i]] += pw.f[t] * area / 3.0;
    }
  }
  return nonconforming_system(mesh, triplets, std::move(rhs));
}

SparseSystem assemble_modified_ncfem(const Triangulation& mesh, const PiecewiseData& pw) {
  check_sizes(mesh, pw);
  const auto& geo = mesh.geometry();
  std::vector<Triplet> triplets;
  triplets.reserve(9 * mesh.num_triangles());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_edges()));
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    const double area = geo.area[t];
    const double kappa = condensation_factor(pw.gamma[t], pw.s_mean[t]);
    const double quarter_s = 0.25 * pw.s_mean[t];
    const auto grads = cr_gradients(mesh, t);
    const Mat3 D = cr_diffusion_matrix(area, grads, pw.A[t]);
    const auto& te = mesh.triangle_edges()[t];
    // u_M = kappa (Pi_0 u_CR + S/4 f_h), Pi_0 psi_j = 1/3, int_T psi_i = |T|/3.
    for (int i = 0; i < 3; ++i) {
      const double conv_i = area * pw.b[t].dot(grads[i]);
      const double mass_i = pw.gamma[t] * area / 3.0;
      for (int j = 0; j < 3; ++j) {
        triplets.emplace_back(te[i], te[j], D(i, j) + kappa / 3.0 * (conv_i + mass_i));
      }
      rhs[te[i]] += pw.f[t] * area / 3.0 - kappa * quarter_s * pw.f[t] * (conv_i + mass_i);
    }
  }
  return nonconforming_system(mesh, triplets, std::move(rhs));
}

SparseSystem assemble_mixed_direct(const Triangulation& mesh, const PiecewiseData& pw) {
  check_sizes(mesh, pw);
  const auto& geo = mesh.geometry();
  const int ne = static_cast<int>(mesh.num_edges());
  const int nt = static_cast<int>(mesh.num_triangles());
  std::vector<Triplet> triplets;
  triplets.reserve(16 * static_cast<std::size_t>(nt));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ne + nt);
  const auto rule = quad::edge_midpoint_rule();
  for (int t = 0; t < nt; ++t) {
    const double area = geo.area[t];
    const auto& te = mesh.triangle_edges()[t];
    const auto& ts = mesh.triangle_edge_signs()[t];
    const Vec2 a = mesh.vertex(t, 0);
    const Vec2 b = mesh.vertex(t, 1);
    const Vec2 c = mesh.vertex(t, 2);
    Mat3 M = Mat3::Zero();
    for (const auto& qp : rule) {
      const Vec2 x = quad::map(a, b, c, qp);
      std::array<Vec2, 3> q;
      for (int k = 0; k < 3; ++k) q[k] = rt_basis(mesh, t, k, x);
      for (int l = 0; l < 3; ++l) {
        for (int k = 0; k < 3; ++k) M(l, k) += qp.weight * area * q[l].dot(pw.A_inv[t] * q[k]);
      }
    }
    const int row_t = ne + t;
    for (int l = 0; l < 3; ++l) {
      const double div_int = ts[l] * geo.length[te[l]];  // int_T div q_l
      for (int k = 0; k < 3; ++k) triplets.emplace_back(te[l], te[k], M(l, k));
      const double convection = area * pw.b_star[t].dot(rt_basis(mesh, t, l, geo.centroid[t]));
      triplets.emplace_back(te[l], row_t, convection - div_int);
      triplets.emplace_back(row_t, te[l], div_int);
    }
    triplets.emplace_back(row_t, row_t, pw.gamma[t] * area);
    rhs[row_t] = pw.f[t] * area;
  }
  SparseSystem sys;
  sys.kind = SparseSystem::Kind::Mixed;
  sys.num_edges = mesh.num_edges();
  sys.num_triangles = mesh.num_triangles();
  sys.matrix = compress(ne + nt, ne + nt, triplets);
  sys.rhs = std::move(rhs);
  sys.dof_of_edge.resize(ne);
  for (int e = 0; e < ne; ++e) sys.dof_of_edge[e] = e;
  return sys;
}

std::vector<std::pair<int, double>> dirichlet_data(const Triangulation& mesh, const ScalarFn& u_D) {
  std::vector<std::pair<int, double>> out;
  out.reserve(mesh.num_boundary_edges());
  for (int e : mesh.boundary_edges()) out.emplace_back(e, u_D(mesh.geometry().midpoint[e]));
  return out;
}

SparseSystem apply_dirichlet(SparseSystem sys, const std::vector<std::pair<int, double>>& values) {
  if (sys.dirichlet_applied) throw Error(ErrorCode::ConfigError, "Dirichlet data already applied");
  if (sys.kind == SparseSystem::Kind::Mixed) {
    throw Error(ErrorCode::ConfigError, "mixed systems need edge lengths; use the mesh overload");
  }
  const int n = static_cast<int>(sys.num_edges);
  std::vector<double> fixed(n, 0.0);
  std::vector<bool> is_fixed(n, false);
  for (const auto& [e, v] : values) {
    if (e < 0 || e >= n) throw Error(ErrorCode::InvalidIndex, "Dirichlet edge out of range");
    is_fixed[e] = true;
    fixed[e] = v;
  }
  std::vector<int> dof(n, -1);
  int nfree = 0;
  for (int e = 0; e < n; ++e) {
    if (!is_fixed[e]) dof[e] = nfree++;
  }
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(sys.matrix.nonZeros()));
  Eigen::VectorXd rhs(nfree);
  for (int e = 0; e < n; ++e) {
    if (dof[e] >= 0) rhs[dof[e]] = sys.rhs[e];
  }
  for (int j = 0; j < sys.matrix.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(sys.matrix, j); it; ++it) {
      const int i = static_cast<int>(it.row());
      if (dof[i] < 0) continue;
      if (dof[j] >= 0) {
        triplets.emplace_back(dof[i], dof[j], it.value());
      } else {
        rhs[dof[i]] -= it.value() * fixed[j];
      }
    }
  }
  sys.matrix = compress(nfree, nfree, triplets);
  sys.rhs = std::move(rhs);
  sys.dof_of_edge = std::move(dof);
  sys.dirichlet_values = values;
  sys.dirichlet_applied = true;
  return sys;
}

SparseSystem apply_dirichlet(SparseSystem sys, const ScalarFn& u_D, const Triangulation& mesh) {
  if (sys.num_edges != mesh.num_edges() || sys.num_triangles != mesh.num_triangles()) {
    throw Error(ErrorCode::MeshMismatch, "system was assembled on a different mesh");
  }
  auto values = dirichlet_data(mesh, u_D);
  if (sys.kind == SparseSystem::Kind::Nonconforming) return apply_dirichlet(std::move(sys), values);
  if (sys.dirichlet_applied) throw Error(ErrorCode::ConfigError, "Dirichlet data already applied");
  // q_E . n_T = +1 when nu_E is outward for the adjacent triangle, -1 otherwise.
  for (const auto& [e, value] : values) {
    const double outward = mesh.edge_neighbours()[e].plus >= 0 ? 1.0 : -1.0;
    sys.rhs[e] -= mesh.geometry().length[e] * value * outward;
  }
  sys.dirichlet_values = std::move(values);
  sys.dirichlet_applied = true;
  return sys;
}

void write_triplets(std::ostream& out, const SparseSystem& sys) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << "% kind " << (sys.kind == SparseSystem::Kind::Mixed ? "mixed" : "nonconforming")
      << ", dirichlet " << (sys.dirichlet_applied ? "applied" : "pending") << '\n';
  out << sys.matrix.rows() << ' ' << sys.matrix.cols() << ' ' << sys.matrix.nonZeros() << '\n';
  out << std::setprecision(17);
  for (int j = 0; j < sys.matrix.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(sys.matrix, j); it; ++it) {
      out << it.row() + 1 << ' ' << j + 1 << ' ' << it.value() << '\n';
    }
  }
  out << "% rhs\n";
  for (Eigen::Index i = 0; i < sys.rhs.size(); ++i) out << "% " << sys.rhs[i] << '\n';
}

CRSolution expand_cr(const SparseSystem& sys, const Eigen::VectorXd& x) {
  CRSolution sol;
  sol.num_triangles = sys.num_triangles;
  sol.edge_values.assign(sys.num_edges, 0.0);
  for (const auto& [e, v] : sys.dirichlet_values) sol.edge_values[e] = v;
  for (std::size_t e = 0; e < sys.num_edges; ++e) {
    if (sys.dof_of_edge[e] >= 0) sol.edge_values[e] = x[sys.dof_of_edge[e]];
  }
  return sol;
}

MixedSolution mixed_from_dofs(const Triangulation& mesh, const Eigen::VectorXd& x) {
  const int ne = static_cast<int>(mesh.num_edges());
  const int nt = static_cast<int>(mesh.num_triangles());
  if (x.size() != ne + nt) throw Error(ErrorCode::MeshMismatch, "mixed dof vector has wrong length");
  MixedSolution sol;
  sol.c.assign(nt, Vec2::Zero());
  sol.d.assign(nt, 0.0);
  sol.u.resize(nt);
  sol.edge_flux.assign(x.data(), x.data() + ne);
  const auto& geo = mesh.geometry();
  for (int t = 0; t < nt; ++t) {
    const auto& te = mesh.triangle_edges()[t];
    const auto& ts = mesh.triangle_edge_signs()[t];
    for (int k = 0; k < 3; ++k) {
      const double coef = ts[k] * x[te[k]] * geo.length[te[k]] / (2.0 * geo.area[t]);
      sol.d[t] += coef;
      sol.c[t] -= coef * mesh.vertex(t, k);
    }
    sol.u[t] = x[ne + t];
  }
  return sol;
}

}  // namespace afem
