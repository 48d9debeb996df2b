#include "jgsa/geig.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace jgsa;

namespace {

double residual_bound(const Matrix& g, const Matrix& h, double lambda) {
  return 1e-8 * (g.norm() + std::abs(lambda) * h.norm());
}

}  // namespace

TEST(Cholesky, Identity) {
  const CholeskyFactor f = cholesky_reduce(Matrix::Identity(4, 4));
  EXPECT_EQ(f.jitter, 0.0);
  EXPECT_EQ(f.escalations, 0);
  EXPECT_LE(oracle::max_abs(f.lower - Matrix::Identity(4, 4)), 1e-15);
}

TEST(Cholesky, HandExample) {
  Matrix h(2, 2);
  h << 4, 2, 2, 5;
  Matrix expected(2, 2);
  expected << 2, 0, 1, 2;
  const CholeskyFactor f = cholesky_reduce(h);
  EXPECT_LE(oracle::max_abs(f.lower - expected), 1e-15);
  EXPECT_EQ(f.jitter, 0.0);
}

TEST(Cholesky, ZeroMatrixNeedsJitter) {
  const CholeskyFactor f = cholesky_reduce(Matrix::Zero(3, 3));
  EXPECT_GT(f.jitter, 0.0);
  EXPECT_EQ(f.escalations, 1);
  EXPECT_DOUBLE_EQ(f.jitter, 1e-12);
  EXPECT_LE(oracle::max_abs(f.lower * f.lower.transpose() - f.jitter * Matrix::Identity(3, 3)), 1e-24);
}

TEST(Cholesky, SemidefiniteEscalatesFromTraceScale) {
  Matrix h = Matrix::Zero(2, 2);
  h(0, 0) = 2.0;  // trace 2, dim 2 -> base 1e-12
  const CholeskyFactor f = cholesky_reduce(h);
  EXPECT_DOUBLE_EQ(f.jitter, 1e-12);
}

TEST(Cholesky, IndefiniteExhaustsAndReportsPivot) {
  Matrix h = Matrix::Identity(3, 3);
  h(2, 2) = -1.0;
  try {
    cholesky_reduce(h);
    FAIL();
  } catch (const ConditioningError& e) {
    EXPECT_EQ(e.pivot(), 2);
    EXPECT_GT(e.jitter(), 0.0);
  }
}

TEST(Geig, StandardProblem) {
  const Matrix g = Eigen::Vector2d(2, 1).asDiagonal();
  const EigResult r = solve_definite_geig(g, Matrix::Identity(2, 2), 2);
  EXPECT_NEAR(r.values(0), 2.0, 1e-14);
  EXPECT_NEAR(r.values(1), 1.0, 1e-14);
  EXPECT_LE(oracle::max_abs(r.vectors - Matrix::Identity(2, 2)), 1e-14);
}

TEST(Geig, HandPencil) {
  const Matrix g = Eigen::Vector2d(2, 1).asDiagonal();
  const Matrix h = Eigen::Vector2d(1, 4).asDiagonal();
  const EigResult r = solve_definite_geig(g, h, 2);
  EXPECT_NEAR(r.values(0), 2.0, 1e-14);
  EXPECT_NEAR(r.values(1), 0.25, 1e-14);
  Matrix expected(2, 2);
  expected << 1, 0, 0, 0.5;
  EXPECT_LE(oracle::max_abs(r.vectors - expected), 1e-14);
}

TEST(Geig, ArgumentErrors) {
  const Matrix i2 = Matrix::Identity(2, 2);
  EXPECT_THROW(solve_definite_geig(i2, i2, 0), ConfigError);
  EXPECT_THROW(solve_definite_geig(i2, i2, 3), ConfigError);
  EXPECT_THROW(solve_definite_geig(i2, Matrix::Identity(3, 3), 1), ConfigError);
}

TEST(Geig, RandomPencilsAgainstDenseOracle) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 25; ++trial) {
    const Eigen::Index n = 2 + trial % 11;
    const Matrix g = oracle::random_symmetric(rng, n);
    const Matrix h = oracle::random_spd(rng, n);
    const Eigen::Index k = 1 + trial % n;
    const EigResult r = solve_definite_geig(g, h, k);
    const auto ref = oracle::pencil_eigenvalues(g, h);
    ASSERT_EQ(r.values.size(), k);
    for (Eigen::Index i = 0; i < k; ++i) {
      if (i > 0) {
        EXPECT_GE(r.values(i - 1), r.values(i));
      }
      const double expected = static_cast<double>(ref[static_cast<std::size_t>(i)]);
      EXPECT_NEAR(r.values(i), expected, 1e-8 * std::max(1.0, std::abs(expected)));
      const Vector w = r.vectors.col(i);
      EXPECT_LE((g * w - r.values(i) * h * w).norm(), residual_bound(g, h, r.values(i)));
    }
    EXPECT_LE((r.vectors.transpose() * h * r.vectors - Matrix::Identity(k, k)).norm(), 1e-8);
  }
}

TEST(Geig, CongruenceInvariance) {
  std::mt19937_64 rng(43);
  const Eigen::Index n = 8;
  const Matrix g = oracle::random_symmetric(rng, n);
  const Matrix h = oracle::random_spd(rng, n);
  const Matrix p = oracle::random_matrix(rng, n, n) + 3.0 * Matrix::Identity(n, n);
  const EigResult a = solve_definite_geig(g, h, n);
  const EigResult b = solve_definite_geig(p.transpose() * g * p, p.transpose() * h * p, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    EXPECT_NEAR(a.values(i), b.values(i), 1e-8 * std::max(1.0, std::abs(a.values(i))));
  }
}

TEST(Geig, ShiftByMultipleOfH) {
  std::mt19937_64 rng(44);
  const Eigen::Index n = 10;
  const Matrix g = oracle::random_symmetric(rng, n);
  const Matrix h = oracle::random_spd(rng, n);
  const EigResult a = solve_definite_geig(g, h, 4);
  const EigResult b = solve_definite_geig(g + 3.0 * h, h, 4);
  for (Eigen::Index i = 0; i < 4; ++i) EXPECT_NEAR(b.values(i) - a.values(i), 3.0, 1e-8);
}

TEST(Geig, SignConvention) {
  std::mt19937_64 rng(45);
  const Matrix g = oracle::random_symmetric(rng, 6);
  const Matrix h = oracle::random_spd(rng, 6);
  const EigResult r = solve_definite_geig(g, h, 6);
  for (Eigen::Index j = 0; j < 6; ++j) {
    Eigen::Index idx = 0;
    r.vectors.col(j).cwiseAbs().maxCoeff(&idx);
    EXPECT_GT(r.vectors(idx, j), 0.0);
  }
  Matrix m(2, 2);
  m << -1, 1, 1, -1;
  canonicalize_signs(m);
  EXPECT_EQ(m(0, 0), 1.0);  // tie: lowest index decides
  EXPECT_EQ(m(0, 1), 1.0);
}

TEST(Geig, SemidefiniteDenominatorReportsJitter) {
  Matrix h = Matrix::Identity(3, 3);
  h(2, 2) = 0.0;
  const EigResult r = solve_definite_geig(Matrix::Identity(3, 3), h, 1);
  EXPECT_GT(r.jitter, 0.0);
  EXPECT_TRUE(r.values.allFinite());
}
