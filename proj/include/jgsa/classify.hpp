#pragma once

#include "jgsa/common.hpp"

#include <optional>

namespace jgsa {

/// Labels each query column with the label of its Euclidean-nearest training
/// column. Ties go to the lowest training index.
Labels knn1_classify(const Matrix& train_x, const Labels& train_y, const Matrix& query_x);

/// Fraction of positions where predicted and reference agree.
double accuracy(const Labels& predicted, const Labels& reference);

struct LabeledPrediction {
  Labels predicted;
  std::optional<Labels> reference;
  std::optional<double> accuracy;
};

LabeledPrediction make_prediction(Labels predicted, std::optional<Labels> reference);

/// Squared distance between the column means of zs and zt.
double empirical_mmd(const Matrix& zs, const Matrix& zt);

}  // namespace jgsa
