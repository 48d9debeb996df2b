#pragma once

#include "jgsa/common.hpp"

namespace jgsa {

/// Top-k principal directions (D x k, orthonormal columns) of the centered
/// columns of x_pool. Requires 1 <= k <= min(D, n).
Matrix baseline_pca(const Matrix& x_pool, Eigen::Index k);

struct SubspaceAlignment {
  Matrix source_basis;      // D x k, PCA of the source
  Matrix target_basis;      // D x k, PCA of the target
  Matrix alignment;         // k x k, source_basis' target_basis
  Matrix source_embedding;  // k x n_s: (source_basis alignment)' X_s
  Matrix target_embedding;  // k x n_t: target_basis' X_t
};

/// Subspace Alignment: maps the source PCA basis onto the target one with the
/// closed-form alignment M = A'B.
SubspaceAlignment baseline_sa(const Matrix& xs, const Matrix& xt, Eigen::Index k);

}  // namespace jgsa
