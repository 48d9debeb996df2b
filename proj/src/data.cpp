#include "jgsa/data.hpp"

#include "jgsa/random.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string_view>

namespace jgsa {

Label max_label(const Labels& labels) {
  Label c = 0;
  for (Label l : labels) c = std::max(c, l);
  return c;
}

// ---------------------------------------------------------------------------
// Dataset

Dataset::Dataset(Matrix features, std::optional<Labels> labels, std::string name)
    : features_(std::move(features)), labels_(std::move(labels)), name_(std::move(name)) {
  if (features_.rows() < 1 || features_.cols() < 1) {
    throw DataError("dataset '" + name_ + "' must have at least one dimension and one sample");
  }
  for (Eigen::Index j = 0; j < features_.cols(); ++j) {
    if (!features_.col(j).allFinite()) {
      throw DataError("dataset '" + name_ + "': column " + std::to_string(j) +
                      " contains NaN or Inf");
    }
  }
  if (labels_) {
    if (static_cast<Eigen::Index>(labels_->size()) != features_.cols()) {
      throw DataError("dataset '" + name_ + "': " + std::to_string(labels_->size()) +
                      " labels for " + std::to_string(features_.cols()) + " samples");
    }
    for (std::size_t i = 0; i < labels_->size(); ++i) {
      if ((*labels_)[i] < 1) {
        throw DataError("dataset '" + name_ + "': label " + std::to_string((*labels_)[i]) +
                        " at sample " + std::to_string(i) + " is not a positive class id");
      }
    }
  }
}

const Labels& Dataset::require_labels() const {
  if (!labels_) throw DataError("dataset '" + name_ + "' has no labels");
  return *labels_;
}

Label Dataset::num_classes() const noexcept { return labels_ ? max_label(*labels_) : 0; }

Dataset Dataset::with_name(std::string name) const { return Dataset(features_, labels_, std::move(name)); }

DataFormat format_for_path(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? DataFormat::csv : DataFormat::rawmatrix;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  const std::string source = path.string();

  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string_view> header;
  std::string header_line;
  while (std::getline(in, header_line)) {
    ++lineno;
    if (!trim(header_line).empty()) break;
  }
  if (trim(header_line).empty()) throw ParseError(source, lineno, "missing header line");
  header = split_fields(header_line);
  const bool has_label = header.back() == "label";
  const std::size_t n_features = header.size() - (has_label ? 1 : 0);
  if (n_features == 0) throw ParseError(source, lineno, "header declares no feature columns");

  std::vector<double> values;
  Labels labels;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw ParseError(source, lineno,
                       "expected " + std::to_string(header.size()) + " fields, found " +
                           std::to_string(fields.size()));
    }
    for (std::size_t f = 0; f < n_features; ++f) {
      double v = 0.0;
      const auto* b = fields[f].data();
      const auto* e = b + fields[f].size();
      const auto [ptr, ec] = std::from_chars(b, e, v);
      if (ec != std::errc{} || ptr != e || fields[f].empty()) {
        throw ParseError(source, lineno, "non-numeric value '" + std::string(fields[f]) + "'");
      }
      if (!std::isfinite(v)) throw ParseError(source, lineno, "non-finite value");
      values.push_back(v);
    }
    if (has_label) {
      const auto field = fields.back();
      long long l = 0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), l);
      if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
        throw ParseError(source, lineno, "label '" + std::string(field) + "' is not an integer");
      }
      if (l < 1 || l > std::numeric_limits<Label>::max()) {
        throw ParseError(source, lineno, "label " + std::to_string(l) + " outside {1..C}");
      }
      labels.push_back(static_cast<Label>(l));
    }
    ++n;
  }
  if (n == 0) throw ParseError(source, lineno, "no data rows");

  Matrix features(static_cast<Eigen::Index>(n_features), static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t f = 0; f < n_features; ++f) {
      features(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(j)) = values[j * n_features + f];
    }
  }
  std::optional<Labels> lab;
  if (has_label) lab = std::move(labels);
  return Dataset(std::move(features), std::move(lab), path.stem().string());
}

void append_double(std::string& out, double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

void save_csv(const Dataset& d, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  std::string text;
  for (Eigen::Index f = 0; f < d.dim(); ++f) {
    if (f) text += ',';
    text += "f" + std::to_string(f + 1);
  }
  if (d.has_labels()) text += ",label";
  text += '\n';
  for (Eigen::Index j = 0; j < d.size(); ++j) {
    for (Eigen::Index f = 0; f < d.dim(); ++f) {
      if (f) text += ',';
      append_double(text, d.features()(f, j));
    }
    if (d.has_labels()) text += "," + std::to_string((*d.labels())[static_cast<std::size_t>(j)]);
    text += '\n';
  }
  out << text;
  if (!out) throw DataError("write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// rawmatrix

void put_u32(std::ostream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

void read_exact(std::istream& in, unsigned char* dst, std::size_t n, const std::string& source,
                const char* what) {
  in.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) {
    throw DataError(source + ": truncated rawmatrix while reading " + what);
  }
}

std::uint32_t get_u32(std::istream& in, const std::string& source, const char* what) {
  unsigned char b[4];
  read_exact(in, b, 4, source, what);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

void write_rawmatrix(std::ostream& out, const Matrix& m, const std::optional<Labels>& labels) {
  out.write("JGSA", 4);
  put_u32(out, kRawMatrixVersion);
  put_u32(out, static_cast<std::uint32_t>(m.rows()));
  put_u32(out, static_cast<std::uint32_t>(m.cols()));
  const char has = labels ? 1 : 0;
  out.write(&has, 1);
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) put_f64(out, m(i, j));
  }
  if (labels) {
    for (Label l : *labels) put_u32(out, static_cast<std::uint32_t>(l));
  }
}

std::pair<Matrix, std::optional<Labels>> read_rawmatrix(std::istream& in, const std::string& source) {
  unsigned char magic[4];
  read_exact(in, magic, 4, source, "magic");
  if (std::memcmp(magic, "JGSA", 4) != 0) throw DataError(source + ": bad rawmatrix magic");
  const auto version = get_u32(in, source, "version");
  if (version != kRawMatrixVersion) {
    throw DataError(source + ": unsupported rawmatrix version " + std::to_string(version));
  }
  const auto rows = get_u32(in, source, "D");
  const auto cols = get_u32(in, source, "n");
  unsigned char has = 0;
  read_exact(in, &has, 1, source, "label flag");
  if (has > 1) throw DataError(source + ": bad label flag");

  Matrix m(rows, cols);
  std::vector<unsigned char> buf(static_cast<std::size_t>(rows) * cols * 8);
  if (!buf.empty()) read_exact(in, buf.data(), buf.size(), source, "features");
  std::size_t off = 0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i, off += 8) {
      std::uint64_t bits = 0;
      for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(buf[off + b]) << (8 * b);
      m(i, j) = std::bit_cast<double>(bits);
    }
  }
  std::optional<Labels> labels;
  if (has) {
    Labels l(cols);
    for (auto& v : l) {
      const auto raw = get_u32(in, source, "labels");
      if (raw > static_cast<std::uint32_t>(std::numeric_limits<Label>::max())) {
        throw DataError(source + ": label " + std::to_string(raw) + " out of range");
      }
      v = static_cast<Label>(raw);
    }
    labels = std::move(l);
  }
  return {std::move(m), std::move(labels)};
}

Dataset load_dataset(const std::filesystem::path& path, DataFormat format) {
  if (!std::filesystem::exists(path)) throw DataError("no such file: " + path.string());
  if (format == DataFormat::csv) return load_csv(path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  auto [m, labels] = read_rawmatrix(in, path.string());
  return Dataset(std::move(m), std::move(labels), path.stem().string());
}

void save_dataset(const Dataset& d, const std::filesystem::path& path, DataFormat format) {
  if (format == DataFormat::csv) {
    save_csv(d, path);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  write_rawmatrix(out, d.features(), d.labels());
  if (!out) throw DataError("write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// Transforms

Dataset normalize_unit_columns(const Dataset& d) {
  Matrix out = d.features();
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const double norm = out.col(j).norm();
    if (norm == 0.0) {
      throw DataError("dataset '" + d.name() + "': column " + std::to_string(j) + " has zero norm");
    }
    out.col(j) /= norm;
  }
  return Dataset(std::move(out), d.labels(), d.name());
}

Dataset subsample(const Dataset& d, std::size_t count, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(d.size());
  if (count < 1 || count > n) {
    throw DataError("subsample: count " + std::to_string(count) + " outside [1, " +
                    std::to_string(n) + "] for dataset '" + d.name() + "'");
  }
  const auto idx = sample_without_replacement(n, count, seed);
  Matrix m(d.dim(), static_cast<Eigen::Index>(count));
  std::optional<Labels> labels;
  if (d.has_labels()) labels.emplace(count);
  for (std::size_t j = 0; j < count; ++j) {
    m.col(static_cast<Eigen::Index>(j)) = d.features().col(static_cast<Eigen::Index>(idx[j]));
    if (labels) (*labels)[j] = (*d.labels())[idx[j]];
  }
  return Dataset(std::move(m), std::move(labels), d.name());
}

// ---------------------------------------------------------------------------
// Synthetic

void SyntheticSpec::validate() const {
  for (int c = 0; c < kClasses; ++c) {
    if (!(source_scales[c] > 0.0) || !(target_scales[c] > 0.0)) {
      throw ConfigError("synthetic spec: class " + std::to_string(c + 1) + " scale must be > 0");
    }
  }
  if (samples_per_class < 2) throw ConfigError("synthetic spec: samples per class must be >= 2");
}

SyntheticSpec default_synthetic_spec(std::uint64_t seed) {
  SyntheticSpec s;
  s.source_means = {{{0.0, 0.0, 0.0}, {2.0, 0.0, 0.0}, {4.0, 0.0, 0.0}}};
  const SyntheticSpec::Point shift = {3.0, 3.0, 0.0};
  for (int c = 0; c < SyntheticSpec::kClasses; ++c) {
    for (int k = 0; k < SyntheticSpec::kDims; ++k) s.target_means[c][k] = s.source_means[c][k] + shift[k];
  }
  s.target_means[2][0] += 1.5;
  s.source_scales = {0.45, 0.45, 0.45};
  s.target_scales = {0.45, 0.45, 0.45};
  s.samples_per_class = 100;
  s.seed = seed;
  return s;
}

namespace {

Dataset draw_domain(Rng& rng, const std::array<SyntheticSpec::Point, SyntheticSpec::kClasses>& means,
                    const std::array<double, SyntheticSpec::kClasses>& scales, std::size_t per_class,
                    std::string name) {
  const auto n = static_cast<Eigen::Index>(per_class * SyntheticSpec::kClasses);
  Matrix x(SyntheticSpec::kDims, n);
  Labels y(static_cast<std::size_t>(n));
  Eigen::Index j = 0;
  for (int c = 0; c < SyntheticSpec::kClasses; ++c) {
    for (std::size_t s = 0; s < per_class; ++s, ++j) {
      for (int k = 0; k < SyntheticSpec::kDims; ++k) x(k, j) = means[c][k] + scales[c] * rng.normal();
      y[static_cast<std::size_t>(j)] = c + 1;
    }
  }
  return Dataset(std::move(x), std::move(y), std::move(name));
}

}  // namespace

DomainPair generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  Dataset source = draw_domain(rng, spec.source_means, spec.source_scales, spec.samples_per_class, "synthetic-source");
  Dataset target = draw_domain(rng, spec.target_means, spec.target_scales, spec.samples_per_class, "synthetic-target");
  return {std::move(source), std::move(target)};
}

}  // namespace jgsa
