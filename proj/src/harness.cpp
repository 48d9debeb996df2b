#include "jgsa/harness.hpp"

#include "jgsa/baselines.hpp"
#include "jgsa/classify.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace jgsa {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

template <typename T>
T parse_value(const std::string& key, const std::string& value) {
  T v{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size() || value.empty()) {
    throw ConfigError("bad value '" + value + "' for '" + key + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "on" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "off" || value == "0" || value == "no") return false;
  throw ConfigError("bad boolean '" + value + "' for '" + key + "'");
}

std::string join_methods(const std::vector<Method>& methods) {
  std::string out;
  for (const auto m : methods) {
    if (!out.empty()) out += ',';
    out += to_string(m);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

std::string to_string(Method m) {
  switch (m) {
    case Method::none: return "none";
    case Method::pca: return "pca";
    case Method::sa: return "sa";
    case Method::jgsa: return "jgsa";
  }
  return "?";
}

Method parse_method(const std::string& text) {
  if (text == "none" || text == "raw") return Method::none;
  if (text == "pca") return Method::pca;
  if (text == "sa") return Method::sa;
  if (text == "jgsa") return Method::jgsa;
  throw ConfigError("unknown method '" + text + "' (expected none, pca, sa or jgsa)");
}

std::vector<Method> parse_methods(const std::string& text) {
  if (trim(text) == "all") return {Method::none, Method::pca, Method::sa, Method::jgsa};
  std::vector<Method> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    const Method m = parse_method(trim(item));
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
  }
  if (out.empty()) throw ConfigError("no method given");
  return out;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (key == "source") source = value;
  else if (key == "target") target = value;
  else if (key == "source_count") source_count = parse_value<std::size_t>(key, value);
  else if (key == "target_count") target_count = parse_value<std::size_t>(key, value);
  else if (key == "samples_per_class") samples_per_class = parse_value<std::size_t>(key, value);
  else if (key == "method") methods = parse_methods(value);
  else if (key == "k") params.k = parse_value<Eigen::Index>(key, value);
  else if (key == "t_max") params.t_max = parse_value<int>(key, value);
  else if (key == "beta") params.beta = parse_value<double>(key, value);
  else if (key == "lambda") params.lambda = parse_value<double>(key, value);
  else if (key == "mu") params.mu = parse_value<double>(key, value);
  else if (key == "kernel") params.kernel.kind = parse_kernel_kind(value);
  else if (key == "bandwidth") {
    if (value == "median") params.kernel.bandwidth.reset();
    else params.kernel.bandwidth = parse_value<double>(key, value);
  }
  else if (key == "convergence_tol") params.convergence_tol = parse_value<double>(key, value);
  else if (key == "normalize") normalize = parse_bool(key, value);
  else if (key == "seed") seed = parse_value<std::uint64_t>(key, value);
  else if (key == "out") out = value;
  else if (key == "iterations_csv") iterations_csv = value;
  else if (key == "model_out") model_out = value;
  else throw ConfigError("unknown config key '" + key + "'");
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> e{
      {"source", source},
      {"target", synthetic() ? std::string("synthetic") : target},
      {"source_count", std::to_string(source_count)},
      {"target_count", std::to_string(target_count)},
  };
  if (synthetic()) e.emplace_back("samples_per_class", std::to_string(samples_per_class));
  e.insert(e.end(), {
                        {"method", join_methods(methods)},
                        {"k", std::to_string(params.k)},
                        {"t_max", std::to_string(params.t_max)},
                        {"beta", shortest(params.beta)},
                        {"lambda", shortest(params.lambda)},
                        {"mu", shortest(params.mu)},
                        {"kernel", to_string(params.kernel.kind)},
                        {"bandwidth", params.kernel.bandwidth ? shortest(*params.kernel.bandwidth) : "median"},
                        {"convergence_tol", shortest(params.convergence_tol)},
                        {"normalize", normalized() ? "true" : "false"},
                        {"seed", std::to_string(seed)},
                    });
  return e;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  ExperimentConfig cfg;
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    try {
      cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

std::uint64_t source_subsample_seed(std::uint64_t seed) { return seed; }
std::uint64_t target_subsample_seed(std::uint64_t seed) { return seed ^ 0x9e3779b97f4a7c15ULL; }

double round4(double x) { return std::round(x * 1e4) / 1e4; }

// ---------------------------------------------------------------------------
// Running

DomainPair prepare_data(const ExperimentConfig& cfg) {
  std::optional<Dataset> source;
  std::optional<Dataset> target;
  if (cfg.synthetic()) {
    SyntheticSpec spec = default_synthetic_spec(cfg.seed);
    spec.samples_per_class = cfg.samples_per_class;
    auto pair = generate_synthetic(spec);
    source.emplace(std::move(pair.source));
    target.emplace(std::move(pair.target));
  } else {
    if (cfg.target.empty()) throw ConfigError("config names a source file but no target");
    source.emplace(load_dataset(cfg.source, format_for_path(cfg.source)));
    target.emplace(load_dataset(cfg.target, format_for_path(cfg.target)));
  }
  if (cfg.normalized()) {
    source.emplace(normalize_unit_columns(*source));
    target.emplace(normalize_unit_columns(*target));
  }
  if (cfg.source_count > 0) source.emplace(subsample(*source, cfg.source_count, source_subsample_seed(cfg.seed)));
  if (cfg.target_count > 0) target.emplace(subsample(*target, cfg.target_count, target_subsample_seed(cfg.seed)));
  return {std::move(*source), std::move(*target)};
}

RunOutcome run_experiment(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  if (cfg.methods.empty()) throw ConfigError("no method selected");
  const DomainPair data = prepare_data(cfg);
  const Dataset& src = data.source;
  const Dataset& tgt = data.target;
  const Labels& ys = src.require_labels();
  if (src.dim() != tgt.dim()) {
    throw DataError("source has " + std::to_string(src.dim()) + " features, target " + std::to_string(tgt.dim()));
  }
  const Matrix& xs = src.features();
  const Matrix& xt = tgt.features();

  RunOutcome outcome;
  RunReport& report = outcome.report;
  report.config = cfg.echo();
  report.normalized = cfg.normalized();
  report.n_source = src.size();
  report.n_target = tgt.size();
  report.mmd_pre = empirical_mmd(xs, xt);

  auto score = [&](const Labels& predicted) -> std::optional<double> {
    if (!tgt.has_labels()) return std::nullopt;
    return round4(accuracy(predicted, *tgt.labels()));
  };

  for (const Method method : cfg.methods) {
    MethodResult result;
    switch (method) {
      case Method::none:
        result.accuracy = score(knn1_classify(xs, ys, xt));
        result.mmd = report.mmd_pre;
        break;
      case Method::pca: {
        Matrix pooled(xs.rows(), xs.cols() + xt.cols());
        pooled << xs, xt;
        const Matrix basis = baseline_pca(pooled, cfg.params.k);
        const Matrix zs = basis.transpose() * xs;
        const Matrix zt = basis.transpose() * xt;
        result.accuracy = score(knn1_classify(zs, ys, zt));
        result.mmd = empirical_mmd(zs, zt);
        break;
      }
      case Method::sa: {
        const SubspaceAlignment sa = baseline_sa(xs, xt, cfg.params.k);
        result.accuracy = score(knn1_classify(sa.source_embedding, ys, sa.target_embedding));
        result.mmd = empirical_mmd(sa.source_embedding, sa.target_embedding);
        break;
      }
      case Method::jgsa: {
        JgsaModel model = fit(src, tgt, cfg.params);
        result.accuracy = score(model.final_pseudo());
        result.mmd = empirical_mmd(model.z_s, model.z_t);
        for (std::size_t i = 0; i < model.pseudo_history.size(); ++i) {
          IterationRecord rec;
          rec.iteration = static_cast<int>(i);
          rec.pseudo_accuracy = score(model.pseudo_history[i]);
          if (i > 0) {
            rec.objective = model.objective_history[i - 1];
            const auto& prev = model.pseudo_history[i - 1];
            const auto& cur = model.pseudo_history[i];
            std::size_t changed = 0;
            for (std::size_t j = 0; j < cur.size(); ++j) changed += prev[j] != cur[j];
            rec.changed_fraction = static_cast<double>(changed) / static_cast<double>(cur.size());
          }
          report.iterations.push_back(rec);
        }
        report.warnings = model.diagnostics.warnings;
        if (!cfg.model_out.empty()) {
          save_model(model.projector, training_digest(xs, xt), cfg.model_out);
        }
        outcome.model = std::move(model);
        break;
      }
    }
    report.methods[to_string(method)] = result;
  }

  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!cfg.out.empty()) emit_report(report, cfg.out, cfg.iterations_csv);
  return outcome;
}

// ---------------------------------------------------------------------------
// Report format

std::string report_to_text(const RunReport& r) {
  std::ostringstream out;
  out << "# jgsa run report\n";
  out << "format = 1\n";
  out << "version = " << r.version << '\n';
  for (const auto& [k, v] : r.config) out << "config." << k << " = " << v << '\n';
  out << "normalized = " << (r.normalized ? "true" : "false") << '\n';
  out << "n_source = " << r.n_source << '\n';
  out << "n_target = " << r.n_target << '\n';
  out << "mmd.pre = " << shortest(r.mmd_pre) << '\n';
  for (const auto& [name, m] : r.methods) {
    if (m.accuracy) out << "method." << name << ".accuracy = " << fixed4(*m.accuracy) << '\n';
    out << "method." << name << ".mmd = " << shortest(m.mmd) << '\n';
  }
  for (const auto& it : r.iterations) {
    const std::string p = "iteration." + std::to_string(it.iteration) + ".";
    if (it.pseudo_accuracy) out << p << "pseudo_accuracy = " << fixed4(*it.pseudo_accuracy) << '\n';
    out << p << "objective = " << shortest(it.objective) << '\n';
    out << p << "changed = " << shortest(it.changed_fraction) << '\n';
  }
  for (std::size_t i = 0; i < r.warnings.size(); ++i) out << "warning." << i + 1 << " = " << r.warnings[i] << '\n';
  out << "wall_clock_seconds = " << shortest(r.wall_clock_seconds) << '\n';
  return out.str();
}

namespace {

std::vector<std::pair<std::string, std::string>> parse_pairs(const std::string& text, const std::string& source) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find(" = ");
    if (eq == std::string::npos) throw ParseError(source, lineno, "expected 'key = value'");
    out.emplace_back(t.substr(0, eq), t.substr(eq + 3));
  }
  return out;
}

double report_double(const std::string& key, const std::string& value, const std::string& source) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw DataError(source + ": bad number '" + value + "' for " + key);
  }
  return v;
}

IterationRecord& iteration_slot(RunReport& r, int index) {
  for (auto& it : r.iterations) {
    if (it.iteration == index) return it;
  }
  r.iterations.push_back(IterationRecord{index, std::nullopt, 0.0, 0.0});
  return r.iterations.back();
}

}  // namespace

RunReport parse_report_text(const std::string& text, const std::string& source) {
  RunReport r;
  r.version.clear();
  for (const auto& [key, value] : parse_pairs(text, source)) {
    if (key == "format") {
      if (value != "1") throw DataError(source + ": unsupported report format " + value);
    } else if (key == "version") {
      r.version = value;
    } else if (key.rfind("config.", 0) == 0) {
      r.config.emplace_back(key.substr(7), value);
    } else if (key == "normalized") {
      r.normalized = value == "true";
    } else if (key == "n_source") {
      r.n_source = static_cast<long long>(report_double(key, value, source));
    } else if (key == "n_target") {
      r.n_target = static_cast<long long>(report_double(key, value, source));
    } else if (key == "mmd.pre") {
      r.mmd_pre = report_double(key, value, source);
    } else if (key.rfind("method.", 0) == 0) {
      const auto dot = key.rfind('.');
      const std::string name = key.substr(7, dot - 7);
      const std::string field = key.substr(dot + 1);
      if (field == "accuracy") r.methods[name].accuracy = report_double(key, value, source);
      else if (field == "mmd") r.methods[name].mmd = report_double(key, value, source);
      else throw DataError(source + ": unknown key " + key);
    } else if (key.rfind("iteration.", 0) == 0) {
      const auto dot = key.rfind('.');
      const int index = static_cast<int>(report_double(key, key.substr(10, dot - 10), source));
      const std::string field = key.substr(dot + 1);
      auto& it = iteration_slot(r, index);
      if (field == "pseudo_accuracy") it.pseudo_accuracy = report_double(key, value, source);
      else if (field == "objective") it.objective = report_double(key, value, source);
      else if (field == "changed") it.changed_fraction = report_double(key, value, source);
      else throw DataError(source + ": unknown key " + key);
    } else if (key.rfind("warning.", 0) == 0) {
      r.warnings.push_back(value);
    } else if (key == "wall_clock_seconds") {
      r.wall_clock_seconds = report_double(key, value, source);
    } else {
      throw DataError(source + ": unknown key " + key);
    }
  }
  return r;
}

RunReport parse_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open report " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_report_text(ss.str(), path.string());
}

void emit_report(const RunReport& report, const std::filesystem::path& path, const std::filesystem::path& csv_path) {
  auto write = [](const std::filesystem::path& p, const std::string& body) {
    const auto parent = p.parent_path();
    if (!parent.empty() && !std::filesystem::is_directory(parent)) {
      throw DataError("output directory does not exist: " + parent.string() + " (for " + p.string() + ")");
    }
    std::ofstream out(p);
    if (!out) throw DataError("cannot open " + p.string() + " for writing");
    out << body;
    if (!out) throw DataError("write failed for " + p.string());
  };
  write(path, report_to_text(report));
  if (!csv_path.empty()) {
    std::ostringstream csv;
    csv << "iteration,pseudo_accuracy,objective,changed_fraction\n";
    for (const auto& it : report.iterations) {
      csv << it.iteration << ',' << (it.pseudo_accuracy ? fixed4(*it.pseudo_accuracy) : std::string()) << ','
          << shortest(it.objective) << ',' << shortest(it.changed_fraction) << '\n';
    }
    write(csv_path, csv.str());
  }
}

std::vector<ReportDifference> report_diff(const std::filesystem::path& a, const std::filesystem::path& b) {
  auto load = [](const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw DataError("cannot open report " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    std::map<std::string, std::string> kv;
    for (auto& [k, v] : parse_pairs(ss.str(), p.string())) kv[k] = v;
    kv.erase("wall_clock_seconds");
    return kv;
  };
  const auto left = load(a);
  const auto right = load(b);
  std::set<std::string> keys;
  for (const auto& [k, v] : left) keys.insert(k);
  for (const auto& [k, v] : right) keys.insert(k);
  std::vector<ReportDifference> out;
  for (const auto& k : keys) {
    const auto l = left.find(k);
    const auto r = right.find(k);
    const std::string lv = l == left.end() ? "<absent>" : l->second;
    const std::string rv = r == right.end() ? "<absent>" : r->second;
    if (lv != rv) out.push_back({k, lv, rv});
  }
  return out;
}

}  // namespace jgsa
