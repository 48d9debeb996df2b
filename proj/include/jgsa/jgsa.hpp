#pragma once

#include "jgsa/common.hpp"
#include "jgsa/data.hpp"
#include "jgsa/kernel.hpp"
#include "jgsa/stats.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace jgsa {

/// Hyperparameters of one adaptation run.
struct JgsaParams {
  Eigen::Index k = 30;       // subspace dimension
  int t_max = 10;            // iteration cap
  double beta = 0.1;         // within/between-class trade-off
  double lambda = 1.0;       // subspace-shift weight
  double mu = 1.0;           // target-variance weight
  KernelSpec kernel;
  double convergence_tol = 0.001;  // max fraction of pseudo labels allowed to change

  /// `side` is D (primal) or n_s + n_t (kernelized). Throws ConfigError.
  void validate(Eigen::Index side) const;
};

/// Source projection a and target projection b, each d x k. Stacked they are
/// the generalized eigenvectors W = [a; b].
struct ProjectionPair {
  Matrix a;
  Matrix b;

  Matrix stacked() const;
};

/// Numerator g and denominator h of the trace-ratio objective.
struct Pencil {
  Matrix g;
  Matrix h;
};

/// Builds
///   g = [[beta S_b, 0], [0, mu S_t]]
///   h = [[M_s + lambda R + beta S_w, M_st - lambda R],
///        [M_ts - lambda R,           M_t + (lambda + mu) R]]
/// with R = I. The second overload uses R = gram for the kernelized form.
Pencil assemble(const ScatterSet& scatters, const MmdBlocks& mmd, const JgsaParams& params);
Pencil assemble(const ScatterSet& scatters, const MmdBlocks& mmd, const JgsaParams& params,
                const Matrix& gram);

/// Labels query columns given a labeled training set in the same space.
using PseudoLabeler =
    std::function<Labels(const Matrix& train_x, const Labels& train_y, const Matrix& query_x)>;

/// The default labeler: knn1_classify.
PseudoLabeler nearest_neighbor_labeler();

enum class Domain { source, target };

/// Everything needed to embed new samples: the projections, the kernel, and
/// for kernelized models the pooled training columns [X_s, X_t].
struct Projector {
  ProjectionPair projections;
  KernelSpec kernel;     // bandwidth resolved
  Matrix train_x;        // empty for primal models
  Eigen::Index input_dim = 0;

  Eigen::Index k() const noexcept { return projections.a.cols(); }
  Eigen::Index side() const noexcept { return projections.a.rows(); }
};

struct Diagnostics {
  std::vector<std::string> warnings;
  double max_jitter = 0.0;
};

struct JgsaModel {
  Projector projector;
  Matrix z_s;  // k x n_s
  Matrix z_t;  // k x n_t
  /// Initial pseudo labels, then one entry per iteration.
  std::vector<Labels> pseudo_history;
  /// Sum of the k leading eigenvalues, one entry per iteration.
  std::vector<double> objective_history;
  /// Denominator of the last solved pencil (including any jitter).
  Matrix final_h;
  Diagnostics diagnostics;

  int iterations() const noexcept { return static_cast<int>(objective_history.size()); }
  const Labels& final_pseudo() const { return pseudo_history.back(); }
};

/// Runs the alternating loop: solve the pencil, embed both domains, relabel the
/// target with `labeler` trained on the source embedding, rebuild the MMD
/// blocks. Stops once the fraction of changed pseudo labels is at most
/// params.convergence_tol, or after params.t_max solves.
JgsaModel fit(const Dataset& xs, const Dataset& xt, const JgsaParams& params,
              const PseudoLabeler& labeler = nearest_neighbor_labeler());

/// Embeds new samples (D x m columns) with the source or target projection.
Matrix transform(const Projector& projector, const Matrix& x_new, Domain domain);
Matrix transform(const JgsaModel& model, const Matrix& x_new, Domain domain);

// Model file: see docs/FORMATS.md.
inline constexpr std::uint32_t kModelFormatVersion = 1;

/// FNV-1a 64 over the little-endian bytes of every training feature value.
std::uint64_t training_digest(const Matrix& xs, const Matrix& xt);

struct StoredModel {
  Projector projector;
  std::uint64_t digest = 0;
};

void save_model(const Projector& projector, std::uint64_t digest, const std::filesystem::path& path);
StoredModel load_model(const std::filesystem::path& path);

}  // namespace jgsa
