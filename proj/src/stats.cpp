#include "jgsa/stats.hpp"

#include <cmath>
#include <string>

namespace jgsa {

namespace {

struct ClassMeans {
  Matrix means;                       // dim x C
  std::vector<Eigen::Index> counts;   // per class
};

ClassMeans class_means(const Matrix& x, const Labels& labels, Label classes) {
  ClassMeans cm{Matrix::Zero(x.rows(), classes), std::vector<Eigen::Index>(static_cast<std::size_t>(classes), 0)};
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const Label c = labels[static_cast<std::size_t>(j)];
    cm.means.col(c - 1) += x.col(j);
    ++cm.counts[static_cast<std::size_t>(c - 1)];
  }
  for (Label c = 0; c < classes; ++c) {
    if (cm.counts[static_cast<std::size_t>(c)] > 0) {
      cm.means.col(c) /= static_cast<double>(cm.counts[static_cast<std::size_t>(c)]);
    }
  }
  return cm;
}

void check_labels(const Matrix& x, const Labels& labels, const char* what) {
  if (static_cast<Eigen::Index>(labels.size()) != x.cols()) {
    throw DataError(std::string(what) + ": " + std::to_string(labels.size()) + " labels for " +
                    std::to_string(x.cols()) + " samples");
  }
  for (Label l : labels) {
    if (l < 1) throw DataError(std::string(what) + ": label " + std::to_string(l) + " is not a positive class id");
  }
}

}  // namespace

Matrix symmetrized(const Matrix& a) { return 0.5 * (a + a.transpose()); }

Matrix MmdBlocks::assembled() const {
  const Eigen::Index d = dim();
  Matrix m(2 * d, 2 * d);
  m.topLeftCorner(d, d) = m_s;
  m.topRightCorner(d, d) = m_st;
  m.bottomLeftCorner(d, d) = m_ts;
  m.bottomRightCorner(d, d) = m_t;
  return m;
}

Matrix target_scatter(const Matrix& xt) {
  if (xt.cols() < 1) throw DataError("target_scatter: no samples");
  const Vector mean = xt.rowwise().mean();
  const Matrix centered = xt.colwise() - mean;
  return symmetrized(centered * centered.transpose());
}

Matrix target_scatter(const Dataset& xt) { return target_scatter(xt.features()); }

ClassScatters source_class_scatters(const Matrix& xs, const Labels& labels) {
  check_labels(xs, labels, "source_class_scatters");
  if (xs.cols() < 1) throw DataError("source_class_scatters: no samples");
  const Label classes = max_label(labels);
  const ClassMeans cm = class_means(xs, labels, classes);
  for (Label c = 0; c < classes; ++c) {
    if (cm.counts[static_cast<std::size_t>(c)] == 0) {
      throw DataError("source_class_scatters: class " + std::to_string(c + 1) + " has no samples");
    }
  }
  const Vector mean = xs.rowwise().mean();

  Matrix centered(xs.rows(), xs.cols());
  for (Eigen::Index j = 0; j < xs.cols(); ++j) {
    centered.col(j) = xs.col(j) - cm.means.col(labels[static_cast<std::size_t>(j)] - 1);
  }
  Matrix between(xs.rows(), classes);
  for (Label c = 0; c < classes; ++c) {
    between.col(c) = std::sqrt(static_cast<double>(cm.counts[static_cast<std::size_t>(c)])) * (cm.means.col(c) - mean);
  }
  return {symmetrized(between * between.transpose()), symmetrized(centered * centered.transpose())};
}

ClassScatters source_class_scatters(const Dataset& xs) {
  return source_class_scatters(xs.features(), xs.require_labels());
}

MmdBlocks mmd_blocks(const Matrix& xs, const Labels& source_labels, const Matrix& xt,
                     const std::optional<Labels>& pseudo) {
  check_labels(xs, source_labels, "mmd_blocks (source)");
  if (xs.rows() != xt.rows()) {
    throw DataError("mmd_blocks: source has " + std::to_string(xs.rows()) + " rows, target " +
                    std::to_string(xt.rows()));
  }
  if (xs.cols() < 1 || xt.cols() < 1) throw DataError("mmd_blocks: empty domain");
  const Label classes = max_label(source_labels);
  if (pseudo) {
    check_labels(xt, *pseudo, "mmd_blocks (pseudo)");
    for (Label l : *pseudo) {
      if (l > classes) {
        throw DataError("mmd_blocks: pseudo label " + std::to_string(l) + " outside {1.." +
                        std::to_string(classes) + "}");
      }
    }
  }

  // X L X' with L a sum of scaled all-ones blocks collapses to outer products
  // of (class) means: the (c) term of M_s is m_s^(c) m_s^(c)', of M_st it is
  // -m_s^(c) m_t^(c)', and so on.
  // Columns: [marginal, class 1, ..., class C] with unused classes dropped.
  std::vector<Vector> src_means{xs.rowwise().mean()};
  std::vector<Vector> tgt_means{xt.rowwise().mean()};
  if (pseudo) {
    const ClassMeans cs = class_means(xs, source_labels, classes);
    const ClassMeans ct = class_means(xt, *pseudo, classes);
    for (Label c = 0; c < classes; ++c) {
      const auto ci = static_cast<std::size_t>(c);
      if (cs.counts[ci] == 0 || ct.counts[ci] == 0) continue;
      src_means.emplace_back(cs.means.col(c));
      tgt_means.emplace_back(ct.means.col(c));
    }
  }
  Matrix ps(xs.rows(), static_cast<Eigen::Index>(src_means.size()));
  Matrix pt(xs.rows(), static_cast<Eigen::Index>(tgt_means.size()));
  for (std::size_t i = 0; i < src_means.size(); ++i) {
    ps.col(static_cast<Eigen::Index>(i)) = src_means[i];
    pt.col(static_cast<Eigen::Index>(i)) = tgt_means[i];
  }
  MmdBlocks out;
  out.m_s = symmetrized(ps * ps.transpose());
  out.m_t = symmetrized(pt * pt.transpose());
  out.m_st = -(ps * pt.transpose());
  out.m_ts = out.m_st.transpose();
  return out;
}

MmdBlocks mmd_blocks(const Dataset& xs, const Dataset& xt, const std::optional<Labels>& pseudo) {
  return mmd_blocks(xs.features(), xs.require_labels(), xt.features(), pseudo);
}

ClassScatters kernel_class_scatters(const Matrix& gram_s, const Labels& labels) {
  return source_class_scatters(gram_s, labels);
}

Matrix kernel_target_scatter(const Matrix& gram_t, Eigen::Index n) {
  if (gram_t.rows() != n) {
    throw DataError("kernel_target_scatter: gram has " + std::to_string(gram_t.rows()) +
                    " rows, expected n = " + std::to_string(n));
  }
  if (gram_t.cols() < 1) throw DataError("kernel_target_scatter: no target samples");
  // K_t 1_t replaces every column by the row mean.
  const Matrix centered = gram_t.colwise() - gram_t.rowwise().mean();
  return symmetrized(centered * centered.transpose());
}

}  // namespace jgsa
