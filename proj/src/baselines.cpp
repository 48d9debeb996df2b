#include "jgsa/baselines.hpp"

#include "jgsa/geig.hpp"
#include "jgsa/stats.hpp"

#include <algorithm>
#include <string>

namespace jgsa {

Matrix baseline_pca(const Matrix& x_pool, Eigen::Index k) {
  const Eigen::Index limit = std::min(x_pool.rows(), x_pool.cols());
  if (k < 1 || k > limit) {
    throw ConfigError("PCA: k = " + std::to_string(k) + " outside [1, min(D, n) = " + std::to_string(limit) + "]");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(target_scatter(x_pool));
  Matrix basis = eig.eigenvectors().rightCols(k).rowwise().reverse();
  canonicalize_signs(basis);
  return basis;
}

SubspaceAlignment baseline_sa(const Matrix& xs, const Matrix& xt, Eigen::Index k) {
  if (xs.rows() != xt.rows()) throw DataError("SA: source and target dimensions differ");
  SubspaceAlignment out;
  out.source_basis = baseline_pca(xs, k);
  out.target_basis = baseline_pca(xt, k);
  out.alignment = out.source_basis.transpose() * out.target_basis;
  out.source_embedding = (out.source_basis * out.alignment).transpose() * xs;
  out.target_embedding = out.target_basis.transpose() * xt;
  return out;
}

}  // namespace jgsa
