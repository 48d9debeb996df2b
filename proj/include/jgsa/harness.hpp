#pragma once

#include "jgsa/data.hpp"
#include "jgsa/jgsa.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace jgsa {

inline constexpr const char* kLibraryVersion = "0.1.0";

enum class Method { none, pca, sa, jgsa };

std::string to_string(Method m);
Method parse_method(const std::string& text);
/// Comma-separated list, e.g. "none,sa,jgsa". "all" selects every method.
std::vector<Method> parse_methods(const std::string& text);

/// One experiment. `source` is a dataset path or the word "synthetic"; with a
/// synthetic source the target is generated too and `target` is ignored.
struct ExperimentConfig {
  std::string source = "synthetic";
  std::string target;
  std::size_t source_count = 0;  // subsample size, 0 keeps all samples
  std::size_t target_count = 0;
  std::size_t samples_per_class = 100;  // synthetic only
  std::vector<Method> methods{Method::jgsa};
  JgsaParams params;
  /// Unit-L2 sample normalization. Defaults to on for file data and off for
  /// synthetic data.
  std::optional<bool> normalize;
  std::uint64_t seed = 0;
  std::string out;             // report path; empty = no file
  std::string iterations_csv;  // per-iteration CSV path; empty = none
  std::string model_out;       // JGSA model file; empty = none

  bool synthetic() const noexcept { return source == "synthetic"; }
  bool normalized() const noexcept { return normalize.value_or(!synthetic()); }

  /// Sets one field from its config-file key. ConfigError on unknown keys or
  /// unparseable values.
  void set(const std::string& key, const std::string& value);
  /// Ordered key/value echo, as written into reports.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

/// Flat "key = value" file, '#' starts a comment.
ExperimentConfig parse_config(const std::filesystem::path& path);

/// Subsample seeds derived from the run seed.
std::uint64_t source_subsample_seed(std::uint64_t seed);
std::uint64_t target_subsample_seed(std::uint64_t seed);

struct MethodResult {
  std::optional<double> accuracy;  // rounded to 4 decimals; absent without target labels
  double mmd = 0.0;                // empirical MMD of the method's embedding
  bool operator==(const MethodResult&) const = default;
};

struct IterationRecord {
  int iteration = 0;  // 0 = initial pseudo labels
  std::optional<double> pseudo_accuracy;  // rounded to 4 decimals
  double objective = 0.0;
  double changed_fraction = 0.0;
  bool operator==(const IterationRecord&) const = default;
};

struct RunReport {
  std::string version = kLibraryVersion;
  std::vector<std::pair<std::string, std::string>> config;
  bool normalized = false;
  long long n_source = 0;
  long long n_target = 0;
  double mmd_pre = 0.0;
  std::map<std::string, MethodResult> methods;
  std::vector<IterationRecord> iterations;
  std::vector<std::string> warnings;
  double wall_clock_seconds = 0.0;

  bool operator==(const RunReport&) const = default;
};

/// Accuracy as reported: rounded half-away-from-zero to 4 decimals.
double round4(double x);

/// Result of a run plus the artifacts tests may want to inspect.
struct RunOutcome {
  RunReport report;
  std::optional<JgsaModel> model;
};

/// Loads or generates the data, applies normalization and subsampling, runs
/// each configured method on the same samples, writes the configured outputs.
RunOutcome run_experiment(const ExperimentConfig& cfg);

/// Loads the source/target pair exactly as run_experiment would.
DomainPair prepare_data(const ExperimentConfig& cfg);

std::string report_to_text(const RunReport& report);
RunReport parse_report_text(const std::string& text, const std::string& source = "<report>");
RunReport parse_report(const std::filesystem::path& path);

/// Writes the report; if csv_path is non-empty also the per-iteration CSV.
/// Throws DataError naming the path when it cannot be written.
void emit_report(const RunReport& report, const std::filesystem::path& path,
                 const std::filesystem::path& csv_path = {});

/// Keys whose values differ between two report files, timing fields ignored.
struct ReportDifference {
  std::string key;
  std::string left;   // "<absent>" when missing
  std::string right;
};
std::vector<ReportDifference> report_diff(const std::filesystem::path& a, const std::filesystem::path& b);

}  // namespace jgsa
