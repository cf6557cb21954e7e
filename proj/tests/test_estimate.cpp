#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>

#include "afem/errors.hpp"
#include "afem/estimate.hpp"
#include "afem/meshes.hpp"
#include "afem/problem.hpp"
#include "afem/refine.hpp"
#include "afem/solver.hpp"

namespace {

using afem::Triangulation;
using afem::Vec2;

// CR function whose restriction to triangle t is fn(t, x).
afem::CRSolution cr_from(const Triangulation& mesh, const std::function<double(int, const Vec2&)>& fn) {
  afem::CRSolution u;
  u.num_triangles = mesh.num_triangles();
  u.edge_values.resize(mesh.num_edges());
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    const auto& nb = mesh.edge_neighbours()[e];
    u.edge_values[e] = fn(nb.plus >= 0 ? nb.plus : nb.minus, mesh.geometry().midpoint[e]);
  }
  return u;
}

int vertex_at(const Triangulation& mesh, const Vec2& p) {
  for (std::size_t i = 0; i < mesh.num_vertices(); ++i) {
    if ((mesh.vertices()[i] - p).norm() < 1e-14) return int(i);
  }
  return -1;
}

int triangle_containing(const Triangulation& mesh, const Vec2& p) {
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    if ((mesh.geometry().centroid[t] - p).norm() < 1e-14) return int(t);
  }
  return -1;
}

TEST(AverageCr, AffineIsReproduced) {
  const Triangulation mesh = afem::meshes::slit_disc();
  const auto f = [](const Vec2& x) { return 2.0 - x.x() + 3.0 * x.y(); };
  const auto nodal = afem::average_cr(mesh, cr_from(mesh, [&](int, const Vec2& x) { return f(x); }));
  for (std::size_t i = 0; i < mesh.num_vertices(); ++i) EXPECT_NEAR(nodal[i], f(mesh.vertices()[i]), 1e-14);
  for (int t = 0; t < int(mesh.num_triangles()); ++t) {
    EXPECT_LT((afem::p1_gradient(mesh, t, nodal) - Vec2(-1, 3)).norm(), 1e-13);
  }
}

TEST(AverageCr, SharedAndSingleVertices) {
  // On the square split along (0,0)-(1,1): lower triangle 1 + 2(x + y),
  // upper triangle 3; they agree at the diagonal midpoint.
  const Triangulation mesh = afem::meshes::unit_square();
  const int lower = triangle_containing(mesh, Vec2(2.0 / 3.0, 1.0 / 3.0));
  ASSERT_GE(lower, 0);
  const auto u = cr_from(mesh, [&](int t, const Vec2& x) { return t == lower ? 1.0 + 2.0 * (x.x() + x.y()) : 3.0; });
  const auto nodal = afem::average_cr(mesh, u);
  EXPECT_NEAR(nodal[vertex_at(mesh, Vec2(0, 0))], 2.0, 1e-14);
  EXPECT_NEAR(nodal[vertex_at(mesh, Vec2(1, 1))], 4.0, 1e-14);  // traces 5 and 3
  EXPECT_NEAR(nodal[vertex_at(mesh, Vec2(1, 0))], 3.0, 1e-14);  // lower only
  EXPECT_NEAR(nodal[vertex_at(mesh, Vec2(0, 1))], 3.0, 1e-14);  // upper only
}

struct Solved {
  Triangulation mesh;
  afem::PiecewiseData pw;
  afem::ReconstructedMixed recon;
};

Solved solve(const afem::ProblemInstance& inst, const Triangulation& mesh) {
  Solved s{mesh, afem::project_p0(inst.field, mesh), {}};
  s.recon = afem::solve_mixed_via_equivalence(mesh, s.pw, inst.field.u_D);
  return s;
}

afem::EstimatorReport estimate(const afem::ProblemInstance& inst, const Solved& s) {
  return afem::estimate_mixed(s.mesh, s.recon.mixed, s.recon.u_cr, inst.field, s.pw);
}

TEST(EstimateMixed, ZeroProblem) {
  for (std::string name : {"lshape", "crack"}) {
    afem::ProblemInstance inst = afem::benchmark(name);
    inst.field.f = [](const Vec2&) { return 0.0; };
    inst.field.u_D = [](const Vec2&) { return 0.0; };
    const auto s = solve(inst, afem::uniform_red_refine(inst.initial_mesh()));
    const auto r = estimate(inst, s);
    EXPECT_EQ(r.eta(), 0.0);
    EXPECT_EQ(r.eta_with_data(), 0.0);
    for (const auto& t : r.terms) EXPECT_EQ(t.norm(), 0.0) << t.name;
  }
}

TEST(EstimateMixed, ConstantDataHasNoDataTerms) {
  afem::ProblemInstance inst = afem::benchmark("eigen_sweep", 3.0);
  inst.field.b = [](const Vec2&) { return Vec2(1.0, -2.0); };
  inst.field.gamma = [](const Vec2&) { return 3.0; };
  inst.field.f = [](const Vec2&) { return 2.0; };
  const auto r = estimate(inst, solve(inst, inst.initial_mesh()));
  EXPECT_GT(r.eta(), 0.0);
  EXPECT_LT(r.term("osc").norm(), 1e-13);
  EXPECT_EQ(r.term("coeff_A").norm(), 0.0);
  EXPECT_EQ(r.term("coeff_b").norm(), 0.0);
  EXPECT_THROW(r.term("missing"), afem::Error);
}

TEST(EstimateMixed, TermsAreNonnegativeAndAdditive) {
  const auto inst = afem::benchmark("crack");
  const auto r = estimate(inst, solve(inst, afem::uniform_red_refine(inst.initial_mesh())));
  const auto local = r.eta_squared_per_triangle();
  double sum = 0.0;
  for (double v : local) {
    EXPECT_GE(v, 0.0);
    sum += v;
  }
  EXPECT_NEAR(r.eta() * r.eta(), sum, 1e-14 * sum);
  double by_term = 0.0;
  for (const auto& t : r.terms) {
    for (double v : t.squared) EXPECT_GE(v, 0.0);
    by_term += t.norm() * t.norm();
  }
  EXPECT_NEAR(by_term, sum, 1e-14 * sum);
  EXPECT_GE(r.eta_with_data(), r.eta());
}

TEST(EstimateMixed, LShapeLevelZero) {
  const auto inst = afem::benchmark("lshape");
  const double eta = estimate(inst, solve(inst, inst.initial_mesh())).eta();
  EXPECT_NEAR(eta, 1.0106, 0.15 * 1.0106);
}

TEST(EstimateMixed, PermutationInvariance) {
  const auto inst = afem::benchmark("lshape");
  Triangulation mesh = afem::uniform_red_refine(inst.initial_mesh());
  std::vector<int> adapt;
  for (int t = 0; t < int(mesh.num_triangles()); t += 5) adapt.push_back(t);
  mesh = afem::rgb_refine(mesh, adapt);
  const Solved s = solve(inst, mesh);
  const double eta = estimate(inst, s).eta();

  // Same triangles in shuffled order; the solution is carried over.
  std::vector<int> perm(mesh.num_triangles());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(99));
  std::vector<std::array<int, 3>> tris;
  for (int t : perm) tris.push_back(mesh.triangles()[t]);
  const Triangulation shuffled = afem::build_mesh(mesh.vertices(), tris, mesh.boundary_segments());
  std::unordered_map<std::uint64_t, double> by_key;
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    by_key[afem::edge_key(mesh.edges()[e][0], mesh.edges()[e][1])] = s.recon.u_cr.edge_values[e];
  }
  afem::CRSolution u_cr;
  u_cr.num_triangles = mesh.num_triangles();
  for (const auto& e : shuffled.edges()) u_cr.edge_values.push_back(by_key.at(afem::edge_key(e[0], e[1])));
  afem::MixedSolution mixed;
  for (int t : perm) {
    mixed.c.push_back(s.recon.mixed.c[t]);
    mixed.d.push_back(s.recon.mixed.d[t]);
    mixed.u.push_back(s.recon.mixed.u[t]);
  }
  const auto pw = afem::project_p0(inst.field, shuffled);
  const double eta_shuffled = afem::estimate_mixed(shuffled, mixed, u_cr, inst.field, pw).eta();
  EXPECT_NEAR(eta_shuffled, eta, 1e-14 * eta);

  // Solving from scratch on the shuffled mesh agrees to solver precision.
  const double resolved = estimate(inst, solve(inst, shuffled)).eta();
  EXPECT_NEAR(resolved, eta, 1e-10 * eta);
}

TEST(EstimateMixed, MeshMismatch) {
  const auto inst = afem::benchmark("lshape");
  const auto s = solve(inst, inst.initial_mesh());
  const Triangulation other = afem::uniform_red_refine(s.mesh);
  EXPECT_THROW(afem::estimate_mixed(other, s.recon.mixed, s.recon.u_cr, inst.field, s.pw), afem::Error);
}

TEST(EstimateNc, ZeroProblem) {
  const Triangulation mesh = afem::meshes::lshape();
  const auto u = afem::solve_ncfem(mesh, afem::CoefficientField::laplace());
  EXPECT_EQ(afem::estimate_nc(mesh, u, afem::CoefficientField::laplace()).eta(), 0.0);
}

TEST(EstimateNc, ConformingAffineHasNoJump) {
  const Triangulation mesh = afem::meshes::unit_square_grid(3);
  const auto u = cr_from(mesh, [](int, const Vec2& x) { return 1.0 + x.x() - 2.0 * x.y(); });
  const auto r = afem::estimate_nc(mesh, u, afem::CoefficientField::laplace());
  EXPECT_LT(r.term("jump").norm(), 1e-14);
  EXPECT_LT(r.term("volume").norm(), 1e-14);
}

TEST(EstimateNc, SingleEdgeJump) {
  // Lower triangle 1 + x - y, upper 1: continuous along the diagonal, with a
  // gradient jump (1, -1) normal to it, so |[p . nu]| = sqrt 2 on an edge of
  // length sqrt 2.
  const Triangulation mesh = afem::meshes::unit_square();
  const int lower = triangle_containing(mesh, Vec2(2.0 / 3.0, 1.0 / 3.0));
  const auto v = cr_from(mesh, [&](int t, const Vec2& x) { return t == lower ? 1.0 + (x.x() - x.y()) : 1.0; });
  const auto r = afem::estimate_nc(mesh, v, afem::CoefficientField::laplace());
  const double len = std::sqrt(2.0), j = std::sqrt(2.0);
  const auto& jump = r.term("jump").squared;
  EXPECT_NEAR(jump[0] + jump[1], len * len * j * j, 1e-13);
  EXPECT_NEAR(jump[0], jump[1], 1e-14);
}

}  // namespace
