#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rbfpu/error.hpp"
#include "rbfpu/linalg.hpp"
#include "test_util.hpp"

namespace rbfpu {
namespace {

using testing::to_symmetric;

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

SymmetricMatrix two_by_two() { return to_symmetric({{1.0, kInvSqrt2}, {kInvSqrt2, 1.0}}); }

TEST(Cholesky, IdentityFactorIsIdentity) {
  const auto f = factorize_spd(to_symmetric({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(f(i, k), i == k ? 1.0 : 0.0);
}

TEST(Cholesky, HandFactoredTwoByTwo) {
  const auto f = factorize_spd(two_by_two());
  EXPECT_DOUBLE_EQ(f(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(f(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(f(1, 0), kInvSqrt2);
  EXPECT_NEAR(f(1, 1), std::sqrt(0.5), 1e-15);
}

TEST(Cholesky, RejectsIndefinite) {
  try {
    factorize_spd(to_symmetric({{0, 1}, {1, 0}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSpd);
  }
}

TEST(Cholesky, RejectsPivotAtTolerance) {
  EXPECT_THROW(factorize_spd(to_symmetric({{1e-14}})), Error);
  EXPECT_NO_THROW(factorize_spd(to_symmetric({{2e-14}})));
}

TEST(Cholesky, ReconstructsRandomSpd) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    const auto a = oracle::random_spd(12, rng);
    const auto f = factorize_spd(to_symmetric(a));
    double amax = 0.0, err = 0.0;
    for (std::size_t i = 0; i < 12; ++i) {
      for (std::size_t k = 0; k < 12; ++k) {
        double s = 0.0;
        for (std::size_t j = 0; j < 12; ++j) s += f(i, j) * f(k, j);
        err = std::max(err, std::abs(s - a[i][k]));
        amax = std::max(amax, std::abs(a[i][k]));
      }
      for (std::size_t k = i + 1; k < 12; ++k) EXPECT_EQ(f(i, k), 0.0);
      EXPECT_GT(f(i, i), 0.0);
    }
    EXPECT_LE(err, 1e-10 * amax);
  }
}

TEST(Solve, IdentityAndHandSolved) {
  const auto id = factorize_spd(to_symmetric({{1, 0}, {0, 1}}));
  const std::vector<double> rhs{3, 4};
  EXPECT_EQ(solve(id, rhs), rhs);

  const auto x = solve(factorize_spd(two_by_two()), std::vector<double>{0.0, 1.0});
  EXPECT_NEAR(x[0], -std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(x[1], 2.0, 1e-14);
}

TEST(Solve, DimensionMismatch) {
  const auto f = factorize_spd(two_by_two());
  try {
    f.solve(std::vector<double>{1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(Solve, RecoversKnownSolution) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto a = oracle::random_spd(10, rng);
  std::vector<double> x(10), b(10, 0.0);
  for (auto& v : x) v = u(rng);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t k = 0; k < 10; ++k) b[i] += a[i][k] * x[k];
  const auto got = solve(factorize_spd(to_symmetric(a)), b);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_NEAR(got[i], x[i], 1e-8 * oracle::max_abs(x));
}

TEST(Solve, AgreesWithGaussianEliminationOracle) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    const auto a = oracle::random_spd(8, rng);
    std::vector<double> b(8);
    for (auto& v : b) v = u(rng);
    const auto expected = oracle::gauss_solve(a, b);
    const auto got = solve(factorize_spd(to_symmetric(a)), b);
    for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(got[i], expected[i], 1e-9 * oracle::max_abs(expected));
  }
}

TEST(Solve, ResidualSmallForIllConditionedGram) {
  // IMQ Gram matrices on clustered points have large condition numbers.
  std::mt19937_64 rng(12);
  for (int t = 0; t < 20; ++t) {
    auto pts = testing::random_points(15, 2, rng);
    for (auto& p : pts) p = {0.2 * p[0], 0.2 * p[1]};
    const auto a = gram_matrix(Kernel(KernelTag::IMQ, 5.0), testing::to_pointset(pts));
    std::vector<double> rhs(15);
    for (std::size_t i = 0; i < 15; ++i) rhs[i] = std::sin(3.0 * pts[i][0]) + pts[i][1];
    const auto x = factorize_spd(a).solve(rhs);
    double res = 0.0;
    for (std::size_t i = 0; i < 15; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < 15; ++k) s += a(i, k) * x[k];
      res = std::max(res, std::abs(s - rhs[i]));
    }
    EXPECT_LE(res, 1e-8 * oracle::max_abs(rhs));
  }
}

TEST(InverseDiagonal, KnownCases) {
  const auto id = inverse_diagonal(factorize_spd(to_symmetric({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})));
  EXPECT_EQ(id, (std::vector<double>{1, 1, 1}));

  const auto d = inverse_diagonal(factorize_spd(to_symmetric({{2, 0}, {0, 4}})));
  EXPECT_DOUBLE_EQ(d[0], 0.5);
  EXPECT_DOUBLE_EQ(d[1], 0.25);

  const auto h = inverse_diagonal(factorize_spd(two_by_two()));
  EXPECT_NEAR(h[0], 2.0, 1e-14);
  EXPECT_NEAR(h[1], 2.0, 1e-14);
}

TEST(InverseDiagonal, MatchesExplicitInverseColumns) {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 2 + t % 12;
    const auto a = oracle::random_spd(n, rng);
    const auto diag = inverse_diagonal(factorize_spd(to_symmetric(a)));
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> e(n, 0.0);
      e[i] = 1.0;
      const double expected = oracle::gauss_solve(a, e)[i];
      EXPECT_GT(diag[i], 0.0);
      EXPECT_NEAR(diag[i], expected, 1e-9 * expected);
    }
  }
}

TEST(LuSolve, SolvesIndefiniteSystem) {
  const auto x = lu_solve(to_symmetric({{0, 1}, {1, 0}}), std::vector<double>{2, 3});
  EXPECT_DOUBLE_EQ(x[0], 3.0);
  EXPECT_DOUBLE_EQ(x[1], 2.0);
  EXPECT_THROW(lu_solve(to_symmetric({{0, 0}, {0, 0}}), std::vector<double>{1, 1}), Error);
}

}  // namespace
}  // namespace rbfpu
