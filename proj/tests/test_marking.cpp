#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>

#include "afem/errors.hpp"
#include "afem/marking.hpp"

namespace {

using afem::dorfler_mark;

TEST(Dorfler, Examples) {
  const std::vector<double> eta{4.0, 1.0, 1.0};  // eta_T = 2, 1, 1
  const auto m = dorfler_mark(eta, 0.5);
  EXPECT_EQ(m.triangles, std::vector<int>{0});
  EXPECT_NEAR(m.fraction, 4.0 / 6.0, 1e-15);

  const std::vector<double> with_zero{0.5, 0.0, 2.0, 0.25};
  const auto all = dorfler_mark(with_zero, 1.0);
  EXPECT_EQ(all.triangles, (std::vector<int>{2, 0, 3}));
  EXPECT_DOUBLE_EQ(all.fraction, 1.0);

  const std::vector<double> equal(10, 1.0);
  const auto ties = dorfler_mark(equal, 0.3);
  EXPECT_EQ(ties.triangles, (std::vector<int>{0, 1, 2}));
}

TEST(Dorfler, ZeroEstimator) {
  const std::vector<double> zero(5, 0.0);
  const auto m = dorfler_mark(zero, 0.5);
  EXPECT_TRUE(m.triangles.empty());
  EXPECT_DOUBLE_EQ(m.fraction, 1.0);
}

TEST(Dorfler, Errors) {
  const std::vector<double> eta{1.0, 2.0};
  for (double theta : {0.0, -0.1, 1.5, std::numeric_limits<double>::quiet_NaN()}) {
    try {
      dorfler_mark(eta, theta);
      FAIL() << theta;
    } catch (const afem::Error& e) {
      EXPECT_EQ(e.code(), afem::ErrorCode::BadTheta);
    }
  }
  for (double bad : {-1.0, std::numeric_limits<double>::infinity(), std::numeric_limits<double>::quiet_NaN()}) {
    const std::vector<double> v{1.0, bad};
    try {
      dorfler_mark(v, 0.5);
      FAIL() << bad;
    } catch (const afem::Error& e) {
      EXPECT_EQ(e.code(), afem::ErrorCode::InvalidMark);
    }
  }
}

// Exhaustive check for n <= 12: no subset with fewer elements reaches the
// bulk fraction, and the greedy prefix is minimal under its own order.
TEST(Dorfler, MinimalByExhaustiveSearch) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> small(0, 3);
  for (int n = 1; n <= 12; ++n) {
    for (int trial = 0; trial < 25; ++trial) {
      std::vector<double> eta(n);
      // Mix continuous values with repeated small integers to force ties.
      for (auto& v : eta) v = trial % 2 ? u(rng) : double(small(rng));
      double total = 0.0;
      for (double v : eta) total += v;
      for (double theta : {0.1, 0.3, 0.5, 0.8, 1.0}) {
        const auto m = dorfler_mark(eta, theta);
        double marked = 0.0;
        for (int t : m.triangles) marked += eta[t];
        if (total == 0.0) {
          EXPECT_TRUE(m.triangles.empty());
          continue;
        }
        EXPECT_GE(marked, theta * total * (1.0 - 1e-15));
        std::size_t best = n + 1;
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
          double s = 0.0;
          for (int i = 0; i < n; ++i) {
            if (mask & (1u << i)) s += eta[i];
          }
          if (s >= theta * total * (1.0 - 1e-15)) best = std::min<std::size_t>(best, std::popcount(mask));
        }
        EXPECT_EQ(m.triangles.size(), best) << "n=" << n << " theta=" << theta;
        // Dropping the last selected element falls short.
        EXPECT_LT(marked - eta[m.triangles.back()], theta * total);
        // Selection order is descending with ties by ascending index.
        for (std::size_t i = 1; i < m.triangles.size(); ++i) {
          const int a = m.triangles[i - 1], b = m.triangles[i];
          EXPECT_TRUE(eta[a] > eta[b] || (eta[a] == eta[b] && a < b));
        }
        EXPECT_NEAR(m.fraction, marked / total, 1e-14);
      }
    }
  }
}

}  // namespace
