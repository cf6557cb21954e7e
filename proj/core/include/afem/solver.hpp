#pragma once

#include <utility>

#include <Eigen/Core>

#include "afem/assembly.hpp"
#include "afem/mesh.hpp"
#include "afem/problem.hpp"

namespace afem {

/// Tolerances shared by the solvers and the acceptance checks.
struct SolverTolerances {
  /// Maximum backward error ||Ax - b|| / (||A|| ||x|| + ||b||), infinity norms.
  double residual = 1e-10;
  /// Pivots below pivot_floor * max|A_ij| are reported as singular.
  double pivot_floor = 1e-14;
  /// Maximum relative discrepancy between the two mixed solution routes.
  double equivalence = 1e-8;
};

inline constexpr SolverTolerances kDefaultTolerances{};

struct LinearSolveReport {
  Eigen::VectorXd solution;
  double relative_residual = 0.0;
  /// Smallest |U_jj| of the LU factorization relative to max|A_ij|.
  double min_relative_pivot = 0.0;
};

/// Sparse LU with partial pivoting. Throws Error(SingularMatrix) when the
/// factorization fails, a pivot falls below the floor, or the residual
/// exceeds the tolerance.
LinearSolveReport solve_sparse(const SparseMatrix& matrix, const Eigen::VectorXd& rhs,
                               const SolverTolerances& tol = kDefaultTolerances);
LinearSolveReport solve_sparse(const SparseSystem& system, const SolverTolerances& tol = kDefaultTolerances);

/// Plain nonconforming solution with u = u_D(mid E) on boundary edges.
CRSolution solve_ncfem(const Triangulation& mesh, const CoefficientField& field,
                       const SolverTolerances& tol = kDefaultTolerances);
CRSolution solve_ncfem(const Triangulation& mesh, const PiecewiseData& pw, const ScalarFn& u_D,
                       const SolverTolerances& tol = kDefaultTolerances);

/// Mixed solution obtained from the modified nonconforming solution u_CR:
///   u_M = (1 + gamma_h S/(4|T|))^{-1} (Pi_0 u_CR + S/(4|T|) f_h),
///   p_M = -(A_h grad u_CR + u_M b_h) + (f_h - gamma_h u_M)(x - mid T)/2.
struct ReconstructedMixed {
  MixedSolution mixed;
  CRSolution u_cr;
};
ReconstructedMixed solve_mixed_via_equivalence(const Triangulation& mesh, const PiecewiseData& pw,
                                               const ScalarFn& u_D,
                                               const SolverTolerances& tol = kDefaultTolerances);

/// Closed-form map from a modified nonconforming solution to the mixed pair.
MixedSolution reconstruct_mixed(const Triangulation& mesh, const PiecewiseData& pw, const CRSolution& u_cr);

/// Saddle-point solve of the Raviart-Thomas system.
MixedSolution solve_mixed_direct(const Triangulation& mesh, const PiecewiseData& pw, const ScalarFn& u_D,
                                 const SolverTolerances& tol = kDefaultTolerances);

struct EquivalenceResidual {
  double flux = 0.0;    // ||p_direct - p_recon|| / ||p_direct||
  double scalar = 0.0;  // ||u_direct - u_recon|| / ||u_direct||
};

/// Relative L2 discrepancies of the flux and scalar parts. Throws
/// Error(MeshMismatch) when the solutions live on different meshes.
EquivalenceResidual equivalence_residual(const Triangulation& mesh, const MixedSolution& direct,
                                         const MixedSolution& recon);

/// max_T |p . nu_E from T_+ - p . nu_E from T_-| over interior edges, at mid(E).
double max_normal_jump(const Triangulation& mesh, const MixedSolution& mixed);

}  // namespace afem
