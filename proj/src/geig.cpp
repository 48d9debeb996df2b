#include "jgsa/geig.hpp"

#include "jgsa/stats.hpp"

#include <lapacke.h>

#include <cmath>
#include <string>
#include <vector>

namespace jgsa {

namespace {

constexpr int kMaxEscalations = 6;

// Index of the first non-positive pivot of an unblocked Cholesky, or -1.
Eigen::Index failing_pivot(const Matrix& a) {
  const Eigen::Index n = a.rows();
  Matrix l = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double d = a(j, j) - l.row(j).head(j).squaredNorm();
    if (!(d > 0.0)) return j;
    l(j, j) = std::sqrt(d);
    const Eigen::Index rest = n - j - 1;
    if (rest > 0) {
      l.col(j).tail(rest) =
          (a.col(j).tail(rest) - l.bottomLeftCorner(rest, j) * l.row(j).head(j).transpose()) / l(j, j);
    }
  }
  return -1;
}

}  // namespace

CholeskyFactor cholesky_reduce(const Matrix& h) {
  if (h.rows() != h.cols() || h.rows() == 0) {
    throw ConfigError("cholesky_reduce: matrix must be square and non-empty");
  }
  const Eigen::Index n = h.rows();
  const Matrix sym = symmetrized(h);
  const double trace = sym.trace();
  const double base = trace > 0.0 ? 1e-12 * trace / static_cast<double>(n) : 1e-12;

  double jitter = 0.0;
  for (int attempt = 0; attempt <= kMaxEscalations; ++attempt) {
    if (attempt > 0) jitter = attempt == 1 ? base : jitter * 10.0;
    Matrix shifted = sym;
    shifted.diagonal().array() += jitter;
    Eigen::LLT<Matrix> llt(shifted);
    if (llt.info() == Eigen::Success && llt.matrixL().toDenseMatrix().allFinite()) {
      return {llt.matrixL().toDenseMatrix(), jitter, attempt};
    }
    if (attempt == kMaxEscalations) {
      const Eigen::Index pivot = failing_pivot(shifted);
      throw ConditioningError("matrix is not positive definite: pivot " + std::to_string(pivot) +
                                  " failed with jitter " + std::to_string(jitter) + " after " +
                                  std::to_string(kMaxEscalations) + " escalations",
                              pivot, jitter);
    }
  }
  // unreachable
  throw ConditioningError("cholesky_reduce: escalation loop exited", -1, jitter);
}

void canonicalize_signs(Matrix& vectors) {
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
      const double a = std::abs(vectors(i, j));
      if (a > best_abs) {
        best_abs = a;
        best = i;
      }
    }
    if (vectors.rows() > 0 && vectors(best, j) < 0.0) vectors.col(j) *= -1.0;
  }
}

EigResult solve_definite_geig(const Matrix& g, const Matrix& h, Eigen::Index k) {
  if (g.rows() != g.cols() || h.rows() != h.cols() || g.rows() != h.rows()) {
    throw ConfigError("solve_definite_geig: g and h must be square with equal size");
  }
  const Eigen::Index n = g.rows();
  if (k < 1 || k > n) {
    throw ConfigError("solve_definite_geig: k = " + std::to_string(k) + " outside [1, " +
                      std::to_string(n) + "]");
  }
  const CholeskyFactor chol = cholesky_reduce(h);
  // C = L^-1 g L^-T, lower triangle only (dsygst, itype 1).
  Matrix c = symmetrized(g);
  const lapack_int gst = LAPACKE_dsygst(LAPACK_COL_MAJOR, 1, 'L', static_cast<lapack_int>(n), c.data(),
                                        static_cast<lapack_int>(n), chol.lower.data(), static_cast<lapack_int>(n));
  if (gst != 0) {
    throw ConditioningError("solve_definite_geig: dsygst failed (info " + std::to_string(gst) + ")", -1, chol.jitter);
  }

  // Only the k largest eigenpairs of C are needed: LAPACK dsyevr with an
  // index range returns them in ascending order.
  lapack_int found = 0;
  Vector values(n);
  Matrix v(n, k);
  std::vector<lapack_int> support(static_cast<std::size_t>(2 * k));
  const lapack_int info = LAPACKE_dsyevr(
      LAPACK_COL_MAJOR, 'V', 'I', 'L', static_cast<lapack_int>(n), c.data(), static_cast<lapack_int>(n), 0.0, 0.0,
      static_cast<lapack_int>(n - k + 1), static_cast<lapack_int>(n), 0.0, &found, values.data(), v.data(),
      static_cast<lapack_int>(n), support.data());
  if (info != 0 || found != k) {
    throw ConditioningError("solve_definite_geig: dsyevr failed (info " + std::to_string(info) + ")", -1,
                            chol.jitter);
  }
  EigResult out;
  out.values = values.head(k).reverse();
  v = v.rowwise().reverse().eval();
  out.vectors = chol.lower.transpose().triangularView<Eigen::Upper>().solve(v);
  canonicalize_signs(out.vectors);
  out.jitter = chol.jitter;
  if (!out.values.allFinite() || !out.vectors.allFinite()) {
    throw ConditioningError("solve_definite_geig: non-finite eigenpairs", -1, chol.jitter);
  }
  return out;
}

}  // namespace jgsa
