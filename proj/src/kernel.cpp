#include "jgsa/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace jgsa {

void KernelSpec::validate() const {
  if (bandwidth && !(*bandwidth > 0.0 && std::isfinite(*bandwidth))) {
    throw ConfigError("kernel bandwidth must be a positive finite number");
  }
}

std::string to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::primal: return "primal";
    case KernelKind::linear: return "linear";
    case KernelKind::rbf: return "rbf";
  }
  return "?";
}

KernelKind parse_kernel_kind(const std::string& text) {
  if (text == "primal") return KernelKind::primal;
  if (text == "linear") return KernelKind::linear;
  if (text == "rbf") return KernelKind::rbf;
  throw ConfigError("unknown kernel '" + text + "' (expected primal, linear or rbf)");
}

double median_bandwidth(const Matrix& x) {
  const Eigen::Index n = x.cols();
  if (n < 2) throw DataError("median_bandwidth: need at least two samples");
  std::vector<double> dist;
  dist.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index j = 1; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double d = (x.col(i) - x.col(j)).norm();
      if (d > 0.0) dist.push_back(d);
    }
  }
  if (dist.empty()) throw DataError("median_bandwidth: all samples are identical");
  const std::size_t mid = dist.size() / 2;
  std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(mid), dist.end());
  const double upper = dist[mid];
  if (dist.size() % 2 == 1) return upper;
  const double lower = *std::max_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

KernelSpec resolve_bandwidth(const KernelSpec& spec, const Matrix& x) {
  spec.validate();
  KernelSpec out = spec;
  if (out.kind == KernelKind::rbf && !out.bandwidth) out.bandwidth = median_bandwidth(x);
  return out;
}

Matrix squared_distances(const Matrix& x, const Matrix& y) {
  const Vector xn = x.colwise().squaredNorm().transpose();
  const Eigen::RowVectorXd yn = y.colwise().squaredNorm();
  Matrix d = -2.0 * (x.transpose() * y);
  d.colwise() += xn;
  d.rowwise() += yn;
  d = d.cwiseMax(0.0);
  // Self distances are exactly zero; the expanded form leaves round-off there.
  if (x.data() == y.data() && x.cols() == y.cols()) d.diagonal().setZero();
  return d;
}

Matrix gram(const KernelSpec& spec, const Matrix& x, const Matrix& y) {
  spec.validate();
  if (x.rows() != y.rows()) {
    throw DataError("gram: dimension mismatch (" + std::to_string(x.rows()) + " vs " +
                    std::to_string(y.rows()) + ")");
  }
  switch (spec.kind) {
    case KernelKind::primal:
      throw ConfigError("gram: the primal form has no kernel");
    case KernelKind::linear:
      return x.transpose() * y;
    case KernelKind::rbf: {
      if (!spec.bandwidth) throw ConfigError("gram: rbf bandwidth not resolved");
      const double sigma = *spec.bandwidth;
      Matrix k = squared_distances(x, y);
      return (k.array() * (-1.0 / (2.0 * sigma * sigma))).exp().matrix();
    }
  }
  throw ConfigError("gram: unknown kernel");
}

}  // namespace jgsa
