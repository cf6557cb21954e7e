#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "afem/assembly.hpp"
#include "afem/errors.hpp"
#include "afem/meshes.hpp"
#include "afem/problem.hpp"
#include "afem/refine.hpp"
#include "afem/solver.hpp"

namespace {

using afem::Mat2;
using afem::Triangulation;
using afem::Vec2;

afem::ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const afem::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no afem::Error thrown";
  return afem::ErrorCode::IoError;
}

afem::SparseMatrix sparse(const Eigen::MatrixXd& m) { return m.sparseView(); }

TEST(SolveSparse, Identity) {
  const Eigen::VectorXd r = Eigen::VectorXd::LinSpaced(5, 1.0, 5.0);
  const auto rep = afem::solve_sparse(sparse(Eigen::MatrixXd::Identity(5, 5)), r);
  EXPECT_EQ(rep.solution, r);
  EXPECT_DOUBLE_EQ(rep.min_relative_pivot, 1.0);
}

TEST(SolveSparse, TwoByTwo) {
  Eigen::MatrixXd A(2, 2);
  A << 2, 1, 1, 2;
  const auto rep = afem::solve_sparse(sparse(A), Eigen::Vector2d(3, 3));
  EXPECT_NEAR(rep.solution[0], 1.0, 1e-15);
  EXPECT_NEAR(rep.solution[1], 1.0, 1e-15);
  EXPECT_LE(rep.relative_residual, 1e-15);
}

TEST(SolveSparse, SingularInputs) {
  afem::SparseMatrix zero(3, 3);
  EXPECT_EQ(code_of([&] { afem::solve_sparse(zero, Eigen::Vector3d::Ones()); }), afem::ErrorCode::SingularMatrix);
  Eigen::MatrixXd rank1(2, 2);
  rank1 << 1, 1, 1, 1;
  EXPECT_EQ(code_of([&] { afem::solve_sparse(sparse(rank1), Eigen::Vector2d(1, 2)); }),
            afem::ErrorCode::SingularMatrix);
  Eigen::MatrixXd tiny(2, 2);
  tiny << 1, 0, 0, 1e-16;
  EXPECT_EQ(code_of([&] { afem::solve_sparse(sparse(tiny), Eigen::Vector2d(1, 1)); }),
            afem::ErrorCode::SingularMatrix);
  EXPECT_EQ(code_of([&] { afem::solve_sparse(sparse(Eigen::MatrixXd::Identity(2, 2)), Eigen::Vector3d::Ones()); }),
            afem::ErrorCode::MeshMismatch);
}

afem::CoefficientField affine_field(std::function<double(const Vec2&)> u) {
  afem::CoefficientField f = afem::CoefficientField::laplace();
  f.u_D = std::move(u);
  return f;
}

TEST(Ncfem, ZeroData) {
  const auto sol = afem::solve_ncfem(afem::meshes::lshape(), afem::CoefficientField::laplace());
  for (double v : sol.edge_values) EXPECT_EQ(v, 0.0);
}

TEST(Ncfem, AffinePatchTest) {
  const Triangulation mesh = afem::meshes::unit_square_grid(4);
  const auto u = [](const Vec2& x) { return x.x() + x.y(); };
  const auto sol = afem::solve_ncfem(mesh, affine_field(u));
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    EXPECT_NEAR(sol.edge_values[e], u(mesh.geometry().midpoint[e]), 1e-10);
  }
  for (int t = 0; t < int(mesh.num_triangles()); ++t) {
    EXPECT_LT((sol.gradient(mesh, t) - Vec2(1, 1)).norm(), 1e-10);
  }
}

TEST(Ncfem, GalerkinResidual) {
  const Triangulation mesh = afem::uniform_red_refine(afem::meshes::lshape());
  const auto inst = afem::benchmark("lshape");
  const auto pw = afem::project_p0(inst.field, mesh);
  const auto sol = afem::solve_ncfem(mesh, pw, inst.field.u_D);
  const auto raw = afem::assemble_ncfem(mesh, pw);
  Eigen::VectorXd x(mesh.num_edges());
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) x[e] = sol.edge_values[e];
  const Eigen::VectorXd r = raw.matrix * x - raw.rhs;
  const double scale = raw.rhs.lpNorm<Eigen::Infinity>() + Eigen::MatrixXd(raw.matrix).cwiseAbs().maxCoeff();
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    if (!mesh.is_boundary_edge(int(e))) EXPECT_LE(std::abs(r[e]), 1e-9 * scale);
  }
  double norm = 0.0;
  for (double v : sol.edge_values) norm = std::max(norm, std::abs(v));
  EXPECT_TRUE(std::isfinite(norm));
  EXPECT_LT(norm, 10.0);
}

// u = x on the unit square: p = (-1, 0) and u_M = Pi_0 x lie in the discrete spaces.
TEST(Mixed, LinearPatchTestBothRoutes) {
  const Triangulation mesh = afem::meshes::unit_square_grid(3);
  const auto field = affine_field([](const Vec2& x) { return x.x(); });
  const auto pw = afem::project_p0(field, mesh);
  const auto direct = afem::solve_mixed_direct(mesh, pw, field.u_D);
  const auto recon = afem::solve_mixed_via_equivalence(mesh, pw, field.u_D).mixed;
  for (const auto* m : {&direct, &recon}) {
    for (int t = 0; t < int(mesh.num_triangles()); ++t) {
      EXPECT_LT((m->flux(t, mesh.geometry().centroid[t]) - Vec2(-1, 0)).norm(), 1e-10);
      EXPECT_NEAR(m->divergence(t), 0.0, 1e-10);
      EXPECT_NEAR(m->u[t], mesh.geometry().centroid[t].x(), 1e-10);
    }
  }
}

TEST(Mixed, ZeroData) {
  const Triangulation mesh = afem::meshes::slit_disc();
  afem::CoefficientField field = afem::benchmark("crack").field;
  field.f = [](const Vec2&) { return 0.0; };
  field.u_D = [](const Vec2&) { return 0.0; };
  const auto pw = afem::project_p0(field, mesh);
  const auto direct = afem::solve_mixed_direct(mesh, pw, field.u_D);
  const auto recon = afem::solve_mixed_via_equivalence(mesh, pw, field.u_D).mixed;
  for (const auto* m : {&direct, &recon}) {
    for (int t = 0; t < int(mesh.num_triangles()); ++t) {
      EXPECT_EQ(m->u[t], 0.0);
      EXPECT_EQ(m->c[t].norm(), 0.0);
      EXPECT_EQ(m->d[t], 0.0);
    }
  }
}

TEST(Mixed, ReconstructionFormulasWithoutLowerOrderTerms) {
  // gamma = 0, b = 0, f = 1: div p = 1 and u_M = Pi_0 u_CR + S(T)/(4|T|).
  const Triangulation mesh = afem::meshes::lshape();
  afem::CoefficientField field = afem::CoefficientField::laplace();
  field.f = [](const Vec2&) { return 1.0; };
  const auto pw = afem::project_p0(field, mesh);
  const auto r = afem::solve_mixed_via_equivalence(mesh, pw, field.u_D);
  for (int t = 0; t < int(mesh.num_triangles()); ++t) {
    EXPECT_NEAR(r.mixed.divergence(t), 1.0, 1e-14);
    EXPECT_NEAR(r.mixed.u[t], r.u_cr.mean(mesh, t) + pw.s[t] / mesh.geometry().area[t] / 4.0, 1e-14);
  }
}

// Coefficients that exercise every term: variable SPD A, variable b with
// nonzero divergence, sign-changing gamma, non-polynomial f and u_D.
afem::CoefficientField rough_field() {
  afem::CoefficientField f;
  f.A = [](const Vec2& x) {
    Mat2 A;
    A << 1.5 + std::sin(3 * x.x()), 0.4 * std::cos(x.y()), 0.4 * std::cos(x.y()), 1.2 + x.y() * x.y();
    return A;
  };
  f.b = [](const Vec2& x) { return Vec2(std::cos(2 * x.y()) + x.x(), x.x() * x.y() - 1.0); };
  f.gamma = [](const Vec2& x) { return -3.0 + 4.0 * x.x(); };
  f.f = [](const Vec2& x) { return std::exp(x.x()) - 2.0 * x.y(); };
  f.u_D = [](const Vec2& x) { return std::sin(x.x() + 2.0 * x.y()); };
  return f;
}

Triangulation graded_disc() {
  Triangulation m = afem::meshes::slit_disc();
  for (int level = 0; level < 4; ++level) {
    std::vector<int> marked;
    for (std::size_t t = 0; t < m.num_triangles(); ++t) {
      if (m.geometry().centroid[t].norm() < 0.5) marked.push_back(int(t));
    }
    m = afem::rgb_refine(m, marked);
  }
  return m;
}

TEST(Equivalence, RoutesAgreeOnGeneralData) {
  for (const Triangulation& mesh : {graded_disc(), afem::uniform_red_refine(afem::meshes::lshape())}) {
    const auto field = rough_field();
    const auto pw = afem::project_p0(field, mesh);
    const auto direct = afem::solve_mixed_direct(mesh, pw, field.u_D);
    const auto recon = afem::solve_mixed_via_equivalence(mesh, pw, field.u_D);
    const auto res = afem::equivalence_residual(mesh, direct, recon.mixed);
    EXPECT_LE(res.flux, 1e-8);
    EXPECT_LE(res.scalar, 1e-8);
    // Normal continuity of the reconstruction and the elementwise divergence identity.
    double scale = 0.0;
    for (int t = 0; t < int(mesh.num_triangles()); ++t) scale = std::max(scale, recon.mixed.flux(t, mesh.geometry().centroid[t]).norm());
    EXPECT_LE(afem::max_normal_jump(mesh, recon.mixed), 1e-10 * scale);
    EXPECT_LE(afem::max_normal_jump(mesh, direct), 1e-10 * scale);
    for (const auto* m : {&direct, &recon.mixed}) {
      for (int t = 0; t < int(mesh.num_triangles()); ++t) {
        const double rhs = pw.f[t] - pw.gamma[t] * m->u[t];
        EXPECT_NEAR(m->divergence(t), rhs, 1e-12 * (std::abs(pw.f[t]) + std::abs(pw.gamma[t] * m->u[t]) + 1.0));
      }
    }
  }
}

TEST(Equivalence, Benchmarks) {
  for (const auto& inst : {afem::benchmark("lshape"), afem::benchmark("crack"), afem::benchmark("eigen_sweep", 9.0)}) {
    Triangulation mesh = inst.initial_mesh();
    for (int level = 0; level < 3; ++level) {
      const auto pw = afem::project_p0(inst.field, mesh);
      const auto direct = afem::solve_mixed_direct(mesh, pw, inst.field.u_D);
      const auto recon = afem::solve_mixed_via_equivalence(mesh, pw, inst.field.u_D);
      const auto res = afem::equivalence_residual(mesh, direct, recon.mixed);
      EXPECT_LE(res.flux, 1e-8) << inst.name << " level " << level;
      EXPECT_LE(res.scalar, 1e-8) << inst.name << " level " << level;
      mesh = afem::uniform_red_refine(mesh);
    }
  }
}

TEST(Equivalence, DiscreteCompatibility) {
  // b = 0, gamma = 0: sum |T| div p_M = sum |T| f_h.
  const Triangulation mesh = graded_disc();
  afem::CoefficientField field = rough_field();
  field.b = [](const Vec2&) { return Vec2::Zero(); };
  field.gamma = [](const Vec2&) { return 0.0; };
  const auto pw = afem::project_p0(field, mesh);
  const auto direct = afem::solve_mixed_direct(mesh, pw, field.u_D);
  double lhs = 0.0, rhs = 0.0;
  for (int t = 0; t < int(mesh.num_triangles()); ++t) {
    lhs += mesh.geometry().area[t] * direct.divergence(t);
    rhs += mesh.geometry().area[t] * pw.f[t];
  }
  EXPECT_NEAR(lhs, rhs, 1e-12 * std::abs(rhs));
}

TEST(Equivalence, Sensitivity) {
  const Triangulation mesh = afem::meshes::lshape();
  const auto inst = afem::benchmark("lshape");
  const auto pw = afem::project_p0(inst.field, mesh);
  const auto direct = afem::solve_mixed_direct(mesh, pw, inst.field.u_D);
  const auto same = afem::equivalence_residual(mesh, direct, direct);
  EXPECT_EQ(same.flux, 0.0);
  EXPECT_EQ(same.scalar, 0.0);
  afem::MixedSolution perturbed = direct;
  perturbed.c[0].x() += 1e-3;
  EXPECT_GE(afem::equivalence_residual(mesh, direct, perturbed).flux, 1e-4);
  perturbed = direct;
  perturbed.u[0] += 1e-3;
  EXPECT_GE(afem::equivalence_residual(mesh, direct, perturbed).scalar, 1e-4);
  afem::MixedSolution small = direct;
  small.u.pop_back();
  EXPECT_EQ(code_of([&] { afem::equivalence_residual(mesh, direct, small); }), afem::ErrorCode::MeshMismatch);
}

}  // namespace
