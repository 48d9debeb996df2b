#pragma once

#include "jgsa/common.hpp"
#include "jgsa/data.hpp"

#include <optional>

namespace jgsa {

/// Target scatter plus source between/within-class scatter for one problem.
/// Side length is D in the primal form and n = n_s + n_t when kernelized.
struct ScatterSet {
  Matrix s_t;
  Matrix s_b;
  Matrix s_w;

  Eigen::Index dim() const noexcept { return s_t.rows(); }
};

/// Blocks of the joint marginal + class-conditional MMD quadratic form
///   Tr([A' B'] [[m_s, m_st], [m_ts, m_t]] [A; B]).
struct MmdBlocks {
  Matrix m_s;
  Matrix m_t;
  Matrix m_st;
  Matrix m_ts;

  Eigen::Index dim() const noexcept { return m_s.rows(); }
  /// The 2*dim square block matrix.
  Matrix assembled() const;
};

struct ClassScatters {
  Matrix s_b;
  Matrix s_w;
};

/// X H X' with H the n x n centering matrix; columns are samples.
Matrix target_scatter(const Matrix& xt);
Matrix target_scatter(const Dataset& xt);

/// Between- and within-class scatter of labeled columns. Every class id in
/// 1..max(labels) must have at least one sample.
ClassScatters source_class_scatters(const Matrix& xs, const Labels& labels);
ClassScatters source_class_scatters(const Dataset& xs);

/// MMD blocks from the source labels and (optionally) target pseudo labels.
///
/// Without pseudo labels only the marginal terms are present. A class that
/// has no source members or no pseudo-labeled target members contributes no
/// conditional term. Pseudo labels must lie in 1..C where C is the largest
/// source label.
MmdBlocks mmd_blocks(const Matrix& xs, const Labels& source_labels, const Matrix& xt,
                     const std::optional<Labels>& pseudo);
MmdBlocks mmd_blocks(const Dataset& xs, const Dataset& xt, const std::optional<Labels>& pseudo);

// Kernelized forms. Columns of gram_s / gram_t are k_i = Phi(X)' phi(x_i) for
// the pooled training set X = [X_s, X_t] of n samples.

/// Same as source_class_scatters on kernel columns.
ClassScatters kernel_class_scatters(const Matrix& gram_s, const Labels& labels);

/// Kt~ Kt~' with Kt~ = K_t - K_t 1_t, 1_t the n_t x n_t matrix of 1/n_t.
/// gram_t must have n rows.
Matrix kernel_target_scatter(const Matrix& gram_t, Eigen::Index n);

/// Returns (a + a') / 2.
Matrix symmetrized(const Matrix& a);

}  // namespace jgsa
