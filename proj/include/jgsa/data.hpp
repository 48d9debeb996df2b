#pragma once

#include "jgsa/common.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace jgsa {

/// A feature matrix with one sample per column and optional 1-based labels.
///
/// Construction validates the invariants (non-empty, finite, label range), so
/// a Dataset in hand is always well formed. Instances are immutable.
class Dataset {
 public:
  Dataset(Matrix features, std::optional<Labels> labels, std::string name = {});

  const Matrix& features() const noexcept { return features_; }
  const std::optional<Labels>& labels() const noexcept { return labels_; }
  const std::string& name() const noexcept { return name_; }

  bool has_labels() const noexcept { return labels_.has_value(); }
  /// Labels, or DataError if this dataset is unlabeled.
  const Labels& require_labels() const;

  Eigen::Index dim() const noexcept { return features_.rows(); }
  Eigen::Index size() const noexcept { return features_.cols(); }
  /// Number of classes C (largest label), 0 when unlabeled.
  Label num_classes() const noexcept;

  Dataset with_name(std::string name) const;

 private:
  Matrix features_;
  std::optional<Labels> labels_;
  std::string name_;
};

enum class DataFormat { csv, rawmatrix };

/// csv for *.csv, rawmatrix otherwise.
DataFormat format_for_path(const std::filesystem::path& path);

Dataset load_dataset(const std::filesystem::path& path, DataFormat format);
void save_dataset(const Dataset& d, const std::filesystem::path& path, DataFormat format);

// rawmatrix block codec, shared with model files. The block layout is:
//   "JGSA" | u32 version=1 | u32 D | u32 n | u8 has_labels |
//   D*n f64 column-major | n u32 labels (if has_labels)
// All integers and floats little-endian.
inline constexpr std::uint32_t kRawMatrixVersion = 1;
void write_rawmatrix(std::ostream& out, const Matrix& m, const std::optional<Labels>& labels);
/// Reads one block. `source` is used in error messages only.
std::pair<Matrix, std::optional<Labels>> read_rawmatrix(std::istream& in,
                                                        const std::string& source);

/// Scales each column to unit L2 norm. Throws DataError naming the first
/// zero-norm column.
Dataset normalize_unit_columns(const Dataset& d);

/// `count` columns drawn without replacement, original relative order kept.
Dataset subsample(const Dataset& d, std::size_t count, std::uint64_t seed);

/// Three isotropic Gaussian classes in 3-D for each of two domains.
struct SyntheticSpec {
  static constexpr int kClasses = 3;
  static constexpr int kDims = 3;
  using Point = std::array<double, kDims>;

  std::array<Point, kClasses> source_means{};
  std::array<Point, kClasses> target_means{};
  std::array<double, kClasses> source_scales{};
  std::array<double, kClasses> target_scales{};
  std::size_t samples_per_class = 100;
  std::uint64_t seed = 0;

  /// Throws ConfigError on a non-positive scale or fewer than 2 samples/class.
  void validate() const;
};

/// Source means (0,0,0), (2,0,0), (4,0,0); target = source + (3,3,0) with class
/// 3 moved a further (1.5,0,0); scale 0.45; 100 samples per class.
SyntheticSpec default_synthetic_spec(std::uint64_t seed = 0);

struct DomainPair {
  Dataset source;
  Dataset target;
};

/// Draws class-ordered samples (all of class 1, then 2, then 3) for the source
/// then the target domain from one Rng stream seeded with spec.seed.
DomainPair generate_synthetic(const SyntheticSpec& spec);

}  // namespace jgsa
