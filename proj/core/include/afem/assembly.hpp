#pragma once

#include <array>
#include <iosfwd>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "afem/mesh.hpp"
#include "afem/problem.hpp"

namespace afem {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

/// Assembled linear system.
///
/// Nonconforming systems are assembled over all edges; apply_dirichlet then
/// eliminates the boundary edges and renumbers the remaining ones. Mixed
/// systems number every edge first, then every triangle; their Dirichlet
/// data enters the right-hand side only.
struct SparseSystem {
  enum class Kind { Nonconforming, Mixed };

  Kind kind = Kind::Nonconforming;
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
  /// Global unknown of each edge, or -1 for an eliminated Dirichlet edge.
  std::vector<int> dof_of_edge;
  /// Fixed boundary values as (edge, value).
  std::vector<std::pair<int, double>> dirichlet_values;
  bool dirichlet_applied = false;
  std::size_t num_edges = 0;
  std::size_t num_triangles = 0;

  std::size_t size() const noexcept { return static_cast<std::size_t>(rhs.size()); }
};

/// Crouzeix-Raviart function given by its values at edge midpoints.
struct CRSolution {
  std::vector<double> edge_values;
  std::size_t num_triangles = 0;

  /// Constant gradient on triangle t.
  Vec2 gradient(const Triangulation& mesh, int t) const;
  /// Integral mean on t (the value at the centroid).
  double mean(const Triangulation& mesh, int t) const;
  /// Value of the affine restriction to t at x.
  double value(const Triangulation& mesh, int t, const Vec2& x) const;
};

/// Lowest-order Raviart-Thomas flux p(x) = c + d x on each triangle, with
/// the piecewise constant scalar u.
struct MixedSolution {
  std::vector<Vec2> c;
  std::vector<double> d;
  std::vector<double> u;
  /// Normal flux p . nu_E at mid(E), taken from the triangle nu_E points out of.
  std::vector<double> edge_flux;

  Vec2 flux(int t, const Vec2& x) const { return c[t] + d[t] * x; }
  double divergence(int t) const { return 2.0 * d[t]; }
  std::size_t num_triangles() const noexcept { return u.size(); }
};

/// Gradients of the local basis psi_k = 1 - 2 lambda_k (1 at the midpoint of
/// local edge k, 0 at the other two midpoints).
std::array<Vec2, 3> cr_gradients(const Triangulation& mesh, int t);

/// Local matrices of the plain nonconforming form with constant data.
Mat3 cr_diffusion_matrix(double area, const std::array<Vec2, 3>& grads, const Mat2& A);
Mat3 cr_convection_matrix(double area, const std::array<Vec2, 3>& grads, const Vec2& b);
Mat3 cr_reaction_matrix(double area, double gamma);

/// Local Raviart-Thomas basis for local edge k: unit normal flux in the
/// direction of nu_E on that edge and zero normal flux on the others.
Vec2 rt_basis(const Triangulation& mesh, int t, int k, const Vec2& x);

/// Plain nonconforming system a_NC(u, v) = (f_h, v) over all edges.
SparseSystem assemble_ncfem(const Triangulation& mesh, const PiecewiseData& pw);

/// Condensed modified nonconforming system whose solution reconstructs the
/// mixed solution in closed form. Throws Error(SingularLocalFactor).
SparseSystem assemble_modified_ncfem(const Triangulation& mesh, const PiecewiseData& pw);

/// Raviart-Thomas x P0 saddle-point system.
SparseSystem assemble_mixed_direct(const Triangulation& mesh, const PiecewiseData& pw);

/// Dirichlet values u_D(mid E) for every boundary edge, as (edge, value).
std::vector<std::pair<int, double>> dirichlet_data(const Triangulation& mesh, const ScalarFn& u_D);

/// Nonconforming systems: fixes the boundary edges and moves their couplings
/// to the right-hand side. Mixed systems: adds -|E| u_D(mid E) (q_E . n_T)
/// to the edge rows. Applying twice is an error.
SparseSystem apply_dirichlet(SparseSystem system, const std::vector<std::pair<int, double>>& values);
SparseSystem apply_dirichlet(SparseSystem system, const ScalarFn& u_D, const Triangulation& mesh);

/// Matrix Market coordinate dump of the matrix followed by the right-hand side.
void write_triplets(std::ostream& out, const SparseSystem& system);

/// Expands a reduced nonconforming solution to all edges.
CRSolution expand_cr(const SparseSystem& system, const Eigen::VectorXd& x);

/// Converts edge normal fluxes and triangle values of the mixed system to a MixedSolution.
MixedSolution mixed_from_dofs(const Triangulation& mesh, const Eigen::VectorXd& x);

}  // namespace afem
