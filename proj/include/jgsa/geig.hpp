#pragma once

#include "jgsa/common.hpp"

namespace jgsa {

/// Lower Cholesky factor of h + jitter * I.
struct CholeskyFactor {
  Matrix lower;
  double jitter = 0.0;
  int escalations = 0;
};

/// Factors a symmetric matrix, adding diagonal jitter when a pivot fails.
///
/// The first attempt uses no jitter. On failure the jitter starts at
/// 1e-12 * trace(h) / dim (or 1e-12 when the trace is not positive) and grows
/// by 10x per attempt, for at most six escalations. Throws ConditioningError
/// carrying the failing pivot index of the last attempt.
CholeskyFactor cholesky_reduce(const Matrix& h);

/// Leading generalized eigenpairs of a symmetric-definite pencil (g, h).
struct EigResult {
  Vector values;   // descending
  Matrix vectors;  // one h-orthonormal eigenvector per column
  double jitter = 0.0;
};

/// Solves g w = lambda h w for the k largest lambda.
///
/// g is symmetrized internally. h is reduced through cholesky_reduce, the
/// pencil becomes the standard symmetric problem L^-1 g L^-T, and vectors are
/// mapped back with L^-T. Each eigenvector is then sign-flipped so that its
/// largest-magnitude entry (lowest index on ties) is positive.
EigResult solve_definite_geig(const Matrix& g, const Matrix& h, Eigen::Index k);

/// Flips each column so its largest-magnitude entry is positive.
void canonicalize_signs(Matrix& vectors);

}  // namespace jgsa
