#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "afem/errors.hpp"
#include "afem/mesh.hpp"
#include "afem/meshes.hpp"
#include "afem/refine.hpp"

namespace {

using afem::Triangulation;
using afem::Vec2;

std::set<std::vector<std::pair<double, double>>> shape_set(const Triangulation& m) {
  std::set<std::vector<std::pair<double, double>>> out;
  for (std::size_t t = 0; t < m.num_triangles(); ++t) {
    std::vector<std::pair<double, double>> tri;
    for (int k = 0; k < 3; ++k) {
      const Vec2 p = m.vertex(static_cast<int>(t), k);
      tri.emplace_back(p.x(), p.y());
    }
    std::sort(tri.begin(), tri.end());
    out.insert(tri);
  }
  return out;
}

int euler(const Triangulation& m) {
  return int(m.num_vertices()) - int(m.num_edges()) + int(m.num_triangles());
}

TEST(UniformRefine, CountRecursion) {
  Triangulation m = afem::meshes::lshape();
  for (int level = 0; level < 3; ++level) {
    const Triangulation r = afem::uniform_red_refine(m);
    EXPECT_EQ(r.num_vertices(), m.num_vertices() + m.num_edges());
    EXPECT_EQ(r.num_edges(), 2 * m.num_edges() + 3 * m.num_triangles());
    EXPECT_EQ(r.num_triangles(), 4 * m.num_triangles());
    EXPECT_EQ(euler(r), 1);
    EXPECT_NEAR(r.total_area(), 3.0, 3e-12);
    EXPECT_NEAR(r.min_angle(), m.min_angle(), 1e-12);
    m = r;
  }
}

TEST(UniformRefine, LShapeNdofSequence) {
  const auto start = std::chrono::steady_clock::now();
  Triangulation m = afem::meshes::lshape();
  std::vector<std::size_t> ndof{m.mixed_ndof()};
  for (int level = 1; level < 6; ++level) {
    m = afem::uniform_red_refine(m);
    ndof.push_back(m.mixed_ndof());
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_EQ(ndof, (std::vector<std::size_t>{68, 256, 992, 3904, 15488, 61696}));
  EXPECT_LT(seconds, 1.0);
}

TEST(UniformRefine, ReferenceTriangle) {
  const Triangulation r = afem::uniform_red_refine(afem::meshes::reference_triangle());
  EXPECT_EQ(r.num_triangles(), 4u);
  EXPECT_EQ(r.num_edges(), 9u);
  EXPECT_EQ(r.num_boundary_edges(), 6u);
}

TEST(UniformRefine, ChildrenAreContiguous) {
  // Children of triangle t are 4t .. 4t+3 and lie inside it.
  const Triangulation m = afem::meshes::slit_disc();
  const Triangulation r = afem::uniform_red_refine(m);
  for (std::size_t i = 0; i < r.num_triangles(); ++i) {
    const int parent = int(i) / 4;
    EXPECT_NEAR(r.geometry().area[i], m.geometry().area[parent] / 4.0, 1e-14);
    const Vec2 c = r.geometry().centroid[i];
    const Vec2 a = m.vertex(parent, 0), b = m.vertex(parent, 1), d = m.vertex(parent, 2);
    const auto cross = [](const Vec2& p, const Vec2& q, const Vec2& x) {
      return (q - p).x() * (x - p).y() - (q - p).y() * (x - p).x();
    };
    EXPECT_GT(cross(a, b, c), 0.0);
    EXPECT_GT(cross(b, d, c), 0.0);
    EXPECT_GT(cross(d, a, c), 0.0);
  }
}

TEST(RgbRefine, MarkAllEqualsUniform) {
  for (const Triangulation& m : {afem::meshes::lshape(), afem::meshes::slit_disc(), afem::meshes::unit_square_grid(3)}) {
    std::vector<int> all(m.num_triangles());
    std::iota(all.begin(), all.end(), 0);
    const Triangulation r = afem::rgb_refine(m, all);
    const Triangulation u = afem::uniform_red_refine(m);
    EXPECT_EQ(r.num_edges(), u.num_edges());
    EXPECT_EQ(shape_set(r), shape_set(u));
  }
}

TEST(RgbRefine, EmptyMarkIsIdentity) {
  const Triangulation m = afem::meshes::lshape();
  const Triangulation r = afem::rgb_refine(m, std::vector<int>{});
  EXPECT_EQ(r.num_triangles(), m.num_triangles());
  EXPECT_EQ(shape_set(r), shape_set(m));
}

TEST(RgbRefine, SquareOneMarked) {
  const Triangulation m = afem::meshes::unit_square();
  ASSERT_EQ(m.num_triangles(), 2u);
  const Triangulation r = afem::rgb_refine(m, std::vector<int>{0});
  EXPECT_EQ(r.num_triangles(), 6u);
  EXPECT_EQ(r.num_vertices(), 7u);
  EXPECT_EQ(euler(r), 1);
  EXPECT_NEAR(r.total_area(), 1.0, 1e-15);
  // The neighbour is split into a green pair.
  const int greens = int(std::count_if(r.green_sibling().begin(), r.green_sibling().end(), [](int s) { return s >= 0; }));
  EXPECT_EQ(greens, 2);
}

TEST(RgbRefine, RemarkedGreenIsRolledBack) {
  const Triangulation m = afem::meshes::unit_square();
  const double initial = m.min_angle();
  Triangulation r = afem::rgb_refine(m, std::vector<int>{0});
  for (int round = 0; round < 4; ++round) {
    std::vector<int> greens;
    for (std::size_t t = 0; t < r.num_triangles(); ++t) {
      if (r.green_sibling()[t] >= 0) greens.push_back(int(t));
    }
    if (round == 0) ASSERT_FALSE(greens.empty());
    if (greens.empty()) break;
    r = afem::rgb_refine(r, std::vector<int>{greens.front()});
    EXPECT_GE(r.min_angle(), initial * (1.0 - 1e-12));
    EXPECT_EQ(euler(r), 1);
    EXPECT_NEAR(r.total_area(), 1.0, 1e-14);
  }
}

TEST(RgbRefine, InvalidMark) {
  const Triangulation m = afem::meshes::unit_square();
  try {
    afem::rgb_refine(m, std::vector<int>{2});
    FAIL();
  } catch (const afem::Error& e) {
    EXPECT_EQ(e.code(), afem::ErrorCode::InvalidMark);
  }
  EXPECT_THROW(afem::rgb_refine(m, std::vector<int>{-1}), afem::Error);
}

// Twelve levels of random and corner-focused marking: every mesh is valid
// (build validates conformity), area is conserved and angles stay bounded.
void stress(const Triangulation& start, const Vec2& focus, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double area = start.total_area();
  const double initial_angle = start.min_angle();
  Triangulation m = start;
  for (int level = 0; level < 12; ++level) {
    std::vector<int> marked;
    std::bernoulli_distribution coin(0.1);
    for (std::size_t t = 0; t < m.num_triangles(); ++t) {
      if (coin(rng) || (m.geometry().centroid[t] - focus).norm() < 2.0 * m.geometry().diameter[t]) {
        marked.push_back(int(t));
      }
    }
    std::shuffle(marked.begin(), marked.end(), rng);
    const Triangulation next = afem::rgb_refine(m, marked);
    EXPECT_GT(next.num_triangles(), m.num_triangles());
    EXPECT_NEAR(next.total_area(), area, 1e-12 * area);
    EXPECT_EQ(euler(next), 1);
    EXPECT_GE(next.min_angle(), 0.4 * initial_angle) << "level " << level;
    m = next;
  }
}

TEST(RgbRefine, StressLShape) { stress(afem::meshes::lshape(), Vec2(0, 0), 7); }
TEST(RgbRefine, StressSlitDisc) { stress(afem::meshes::slit_disc(), Vec2(0, 0), 11); }
TEST(RgbRefine, StressSquareCorner) { stress(afem::meshes::unit_square_grid(2), Vec2(1, 1), 13); }

}  // namespace
