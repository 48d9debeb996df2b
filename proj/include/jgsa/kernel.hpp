#pragma once

#include "jgsa/common.hpp"

#include <optional>
#include <string>

namespace jgsa {

enum class KernelKind { primal, linear, rbf };

struct KernelSpec {
  KernelKind kind = KernelKind::primal;
  /// RBF sigma. Empty means "median heuristic", resolved against the pooled
  /// training data by resolve_bandwidth().
  std::optional<double> bandwidth;

  bool kernelized() const noexcept { return kind != KernelKind::primal; }
  void validate() const;
};

std::string to_string(KernelKind kind);
/// "primal" | "linear" | "rbf"; ConfigError otherwise.
KernelKind parse_kernel_kind(const std::string& text);

/// Median of the non-zero pairwise Euclidean distances between columns.
/// Throws DataError when fewer than two columns are given or all columns
/// coincide.
double median_bandwidth(const Matrix& x);

/// Returns spec with an RBF median bandwidth filled in from x.
KernelSpec resolve_bandwidth(const KernelSpec& spec, const Matrix& x);

/// m x p Gram matrix between the columns of x (D x m) and y (D x p).
/// linear: x'y. rbf: exp(-|x_i - y_j|^2 / (2 sigma^2)), requires a resolved
/// bandwidth.
Matrix gram(const KernelSpec& spec, const Matrix& x, const Matrix& y);

/// Squared distances |x_i - y_j|^2 via |x|^2 + |y|^2 - 2 x'y, clamped at 0.
Matrix squared_distances(const Matrix& x, const Matrix& y);

}  // namespace jgsa
