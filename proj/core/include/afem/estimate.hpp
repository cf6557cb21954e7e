#pragma once

#include <string>
#include <vector>

#include "afem/assembly.hpp"
#include "afem/mesh.hpp"
#include "afem/problem.hpp"

namespace afem {

/// One estimator contribution, stored as squared local norms per triangle.
struct EstimatorTerm {
  std::string name;
  std::vector<double> squared;

  /// sqrt of the sum over triangles, accumulated in sorted order so the
  /// result does not depend on the triangle numbering.
  double norm() const;
};

struct EstimatorReport {
  /// Terms that make up eta.
  std::vector<EstimatorTerm> terms;
  /// Data-approximation terms measured against the unprojected coefficients.
  /// They vanish for the discrete problem that is actually solved and are
  /// reported separately.
  std::vector<EstimatorTerm> data_terms;

  /// Optional global diagnostics (not used for marking).
  double h2_load = 0.0;       // ||h^2 f_h||
  double h_divergence = 0.0;  // ||h (f_h - gamma_h u_M)||

  /// eta = sqrt(sum_T eta_T^2).
  double eta() const;
  /// Same with the data terms added to every eta_T^2.
  double eta_with_data() const;
  /// eta_T^2: sum over `terms` of the squared local norms.
  std::vector<double> eta_squared_per_triangle() const;
  /// Term by name from either list; throws Error(ConfigError) if absent.
  const EstimatorTerm& term(const std::string& name) const;
};

/// Vertex values of the averaged P1 function: at each vertex, the mean of
/// the traces of the adjacent triangles.
std::vector<double> average_cr(const Triangulation& mesh, const CRSolution& u_cr);

/// Constant gradient of the P1 function with the given vertex values on t.
Vec2 p1_gradient(const Triangulation& mesh, int t, const std::vector<double>& nodal);

/// Estimator of the mixed solution with terms
///   "volume"         h_T ||A_h^{-1} p_M + u_M b*_h||_T
///   "nonconformity"  ||A_h^{-1} p_M + u_M b*_h - grad v||_T, v = -(averaged u_CR)
/// and data terms
///   "osc"            ||(1 - Pi_0)(f - gamma u_M)||_T
///   "coeff_A"        ||(A^{-1} - A_h^{-1}) p_M||_T
///   "coeff_b"        ||u_M (b* - b*_h)||_T
/// Throws Error(MeshMismatch).
EstimatorReport estimate_mixed(const Triangulation& mesh, const MixedSolution& mixed, const CRSolution& u_cr,
                               const CoefficientField& field, const PiecewiseData& pw);

/// Residual estimator of a nonconforming solution with terms
///   "volume"  h_T ||f - gamma u_CR - div p_CR||_T
///   "jump"    half of |E| ||[p_CR . nu_E]||_E^2 from each interior edge of T
/// where p_CR = -(A_h grad u_CR + u_CR b). Throws Error(MeshMismatch).
EstimatorReport estimate_nc(const Triangulation& mesh, const CRSolution& u_cr, const CoefficientField& field);

}  // namespace afem
