#include "afem/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>
#include <string>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>

#include "afem/errors.hpp"
#include "afem/quadrature.hpp"

namespace afem {

namespace {

// SparseLU keeps the diagonal blocks of U inside the supernodal L storage.
class PivotAwareLU : public Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> {
 public:
  double min_abs_pivot() const {
    double smallest = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < this->cols(); ++j) {
      bool found = false;
      for (SCMatrix::InnerIterator it(m_Lstore, j); it; ++it) {
        if (it.index() == j) {
          smallest = std::min(smallest, std::abs(it.value()));
          found = true;
          break;
        }
      }
      if (!found) return 0.0;
    }
    return smallest;
  }
};

void check_mesh(const Triangulation& mesh, std::size_t num_triangles, const char* what) {
  if (num_triangles != mesh.num_triangles()) {
    throw Error(ErrorCode::MeshMismatch, std::string(what) + " has " + std::to_string(num_triangles) +
                                             " triangles, mesh has " + std::to_string(mesh.num_triangles()));
  }
}

}  // namespace

LinearSolveReport solve_sparse(const SparseMatrix& matrix, const Eigen::VectorXd& rhs, const SolverTolerances& tol) {
  if (matrix.rows() != matrix.cols() || matrix.rows() != rhs.size()) {
    throw Error(ErrorCode::MeshMismatch, "matrix and right-hand side sizes differ");
  }
  LinearSolveReport report;
  if (matrix.rows() == 0) return report;

  double scale = 0.0;
  for (int j = 0; j < matrix.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(matrix, j); it; ++it) scale = std::max(scale, std::abs(it.value()));
  }
  if (scale == 0.0) throw Error(ErrorCode::SingularMatrix, "zero matrix");

  PivotAwareLU lu;
  lu.analyzePattern(matrix);
  lu.factorize(matrix);
  if (lu.info() != Eigen::Success) {
    throw Error(ErrorCode::SingularMatrix, "LU factorization failed: " + lu.lastErrorMessage());
  }
  report.min_relative_pivot = lu.min_abs_pivot() / scale;
  if (report.min_relative_pivot < tol.pivot_floor) {
    std::ostringstream msg;
    msg << "pivot " << std::scientific << report.min_relative_pivot << " x max|A_ij| below " << tol.pivot_floor;
    throw Error(ErrorCode::SingularMatrix, msg.str());
  }
  report.solution = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !report.solution.allFinite()) {
    throw Error(ErrorCode::SingularMatrix, "LU solve failed");
  }
  // Normwise backward error ||r|| / (||A|| ||x|| + ||b||) in the infinity norm.
  Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(matrix.rows());
  for (int j = 0; j < matrix.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(matrix, j); it; ++it) row_sums[it.row()] += std::abs(it.value());
  }
  const double matrix_norm = row_sums.maxCoeff();
  const double rhs_norm = rhs.lpNorm<Eigen::Infinity>();
  const auto relative_residual = [&] {
    const double res = (matrix * report.solution - rhs).lpNorm<Eigen::Infinity>();
    const double denom = matrix_norm * report.solution.lpNorm<Eigen::Infinity>() + rhs_norm;
    return denom > 0.0 ? res / denom : res;
  };
  report.relative_residual = relative_residual();
  // Iterative refinement recovers digits lost to ill-conditioning; stop once
  // a step no longer reduces the backward error.
  for (int step = 0; step < 3; ++step) {
    const Eigen::VectorXd refined = report.solution + lu.solve(rhs - matrix * report.solution);
    const Eigen::VectorXd previous = std::exchange(report.solution, refined);
    const double r = relative_residual();
    if (!(r < report.relative_residual)) {
      report.solution = previous;
      break;
    }
    report.relative_residual = r;
  }
  if (!(report.relative_residual <= tol.residual)) {
    std::ostringstream msg;
    msg << "relative residual " << std::scientific << report.relative_residual << " exceeds "
        << tol.residual;
    throw Error(ErrorCode::SingularMatrix, msg.str());
  }
  return report;
}

LinearSolveReport solve_sparse(const SparseSystem& system, const SolverTolerances& tol) {
  return solve_sparse(system.matrix, system.rhs, tol);
}

CRSolution solve_ncfem(const Triangulation& mesh, const CoefficientField& field, const SolverTolerances& tol) {
  return solve_ncfem(mesh, project_p0(field, mesh), field.u_D, tol);
}

CRSolution solve_ncfem(const Triangulation& mesh, const PiecewiseData& pw, const ScalarFn& u_D,
                       const SolverTolerances& tol) {
  const SparseSystem sys = apply_dirichlet(assemble_ncfem(mesh, pw), u_D, mesh);
  return expand_cr(sys, solve_sparse(sys, tol).solution);
}

MixedSolution reconstruct_mixed(const Triangulation& mesh, const PiecewiseData& pw, const CRSolution& u_cr) {
  check_mesh(mesh, pw.size(), "piecewise data");
  if (u_cr.edge_values.size() != mesh.num_edges()) {
    throw Error(ErrorCode::MeshMismatch, "nonconforming solution has the wrong number of edges");
  }
  const int nt = static_cast<int>(mesh.num_triangles());
  const auto& geo = mesh.geometry();
  MixedSolution out;
  out.c.resize(nt);
  out.d.resize(nt);
  out.u.resize(nt);
  for (int t = 0; t < nt; ++t) {
    const double kappa = condensation_factor(pw.gamma[t], pw.s_mean[t]);
    const double u_m = kappa * (u_cr.mean(mesh, t) + 0.25 * pw.s_mean[t] * pw.f[t]);
    const Vec2 g = -(pw.A[t] * u_cr.gradient(mesh, t) + u_m * pw.b[t]);
    const double half_residual = 0.5 * (pw.f[t] - pw.gamma[t] * u_m);
    out.u[t] = u_m;
    out.d[t] = half_residual;
    out.c[t] = g - half_residual * geo.centroid[t];
  }
  out.edge_flux.resize(mesh.num_edges());
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    const auto& nb = mesh.edge_neighbours()[e];
    const int t = nb.plus >= 0 ? nb.plus : nb.minus;
    out.edge_flux[e] = out.flux(t, geo.midpoint[e]).dot(geo.normal[e]);
  }
  return out;
}

ReconstructedMixed solve_mixed_via_equivalence(const Triangulation& mesh, const PiecewiseData& pw,
                                               const ScalarFn& u_D, const SolverTolerances& tol) {
  const SparseSystem sys = apply_dirichlet(assemble_modified_ncfem(mesh, pw), u_D, mesh);
  ReconstructedMixed out;
  out.u_cr = expand_cr(sys, solve_sparse(sys, tol).solution);
  out.mixed = reconstruct_mixed(mesh, pw, out.u_cr);
  return out;
}

MixedSolution solve_mixed_direct(const Triangulation& mesh, const PiecewiseData& pw, const ScalarFn& u_D,
                                 const SolverTolerances& tol) {
  const SparseSystem sys = apply_dirichlet(assemble_mixed_direct(mesh, pw), u_D, mesh);
  return mixed_from_dofs(mesh, solve_sparse(sys, tol).solution);
}

EquivalenceResidual equivalence_residual(const Triangulation& mesh, const MixedSolution& direct,
                                         const MixedSolution& recon) {
  check_mesh(mesh, direct.num_triangles(), "first mixed solution");
  check_mesh(mesh, recon.num_triangles(), "second mixed solution");
  const auto& geo = mesh.geometry();
  const auto rule = quad::edge_midpoint_rule();
  double flux_diff = 0.0, flux_ref = 0.0, u_diff = 0.0, u_ref = 0.0;
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    const double area = geo.area[t];
    for (const auto& qp : rule) {
      const Vec2 x = quad::map(mesh.vertex(t, 0), mesh.vertex(t, 1), mesh.vertex(t, 2), qp);
      const Vec2 pd = direct.flux(t, x);
      flux_diff += qp.weight * area * (pd - recon.flux(t, x)).squaredNorm();
      flux_ref += qp.weight * area * pd.squaredNorm();
    }
    u_diff += area * std::pow(direct.u[t] - recon.u[t], 2);
    u_ref += area * direct.u[t] * direct.u[t];
  }
  const auto relative = [](double diff, double ref) {
    if (diff == 0.0) return 0.0;
    return ref > 0.0 ? std::sqrt(diff / ref) : std::sqrt(diff);
  };
  return {relative(flux_diff, flux_ref), relative(u_diff, u_ref)};
}

double max_normal_jump(const Triangulation& mesh, const MixedSolution& mixed) {
  check_mesh(mesh, mixed.num_triangles(), "mixed solution");
  const auto& geo = mesh.geometry();
  double worst = 0.0;
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    const auto& nb = mesh.edge_neighbours()[e];
    if (nb.is_boundary()) continue;
    const Vec2& m = geo.midpoint[e];
    const double jump = (mixed.flux(nb.plus, m) - mixed.flux(nb.minus, m)).dot(geo.normal[e]);
    worst = std::max(worst, std::abs(jump));
  }
  return worst;
}

}  // namespace afem
