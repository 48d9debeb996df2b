#include "jgsa/classify.hpp"

#include <string>

namespace jgsa {

namespace {
constexpr Eigen::Index kQueryBlock = 512;
}

Labels knn1_classify(const Matrix& train_x, const Labels& train_y, const Matrix& query_x) {
  if (train_x.cols() < 1) throw DataError("knn1_classify: empty training set");
  if (static_cast<Eigen::Index>(train_y.size()) != train_x.cols()) {
    throw DataError("knn1_classify: " + std::to_string(train_y.size()) + " labels for " +
                    std::to_string(train_x.cols()) + " training samples");
  }
  if (train_x.rows() != query_x.rows()) {
    throw DataError("knn1_classify: training dim " + std::to_string(train_x.rows()) +
                    " != query dim " + std::to_string(query_x.rows()));
  }
  const Vector train_norms = train_x.colwise().squaredNorm().transpose();
  Labels out(static_cast<std::size_t>(query_x.cols()));

  for (Eigen::Index start = 0; start < query_x.cols(); start += kQueryBlock) {
    const Eigen::Index len = std::min(kQueryBlock, query_x.cols() - start);
    const auto block = query_x.middleCols(start, len);
    const Matrix cross = train_x.transpose() * block;
    for (Eigen::Index q = 0; q < len; ++q) {
      const double qn = block.col(q).squaredNorm();
      Eigen::Index best = 0;
      double best_d = std::max(0.0, train_norms(0) + qn - 2.0 * cross(0, q));
      for (Eigen::Index i = 1; i < train_x.cols(); ++i) {
        const double d = std::max(0.0, train_norms(i) + qn - 2.0 * cross(i, q));
        if (d < best_d) {
          best_d = d;
          best = i;
        }
      }
      out[static_cast<std::size_t>(start + q)] = train_y[static_cast<std::size_t>(best)];
    }
  }
  return out;
}

double accuracy(const Labels& predicted, const Labels& reference) {
  if (predicted.size() != reference.size()) {
    throw DataError("accuracy: " + std::to_string(predicted.size()) + " predictions vs " +
                    std::to_string(reference.size()) + " reference labels");
  }
  if (predicted.empty()) throw DataError("accuracy: empty label vectors");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) hits += predicted[i] == reference[i];
  return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

LabeledPrediction make_prediction(Labels predicted, std::optional<Labels> reference) {
  LabeledPrediction p{std::move(predicted), std::move(reference), std::nullopt};
  if (p.reference) p.accuracy = accuracy(p.predicted, *p.reference);
  return p;
}

double empirical_mmd(const Matrix& zs, const Matrix& zt) {
  if (zs.cols() < 1 || zt.cols() < 1) throw DataError("empirical_mmd: empty input");
  if (zs.rows() != zt.rows()) throw DataError("empirical_mmd: embedding dimensions differ");
  return (zs.rowwise().mean() - zt.rowwise().mean()).squaredNorm();
}

}  // namespace jgsa
