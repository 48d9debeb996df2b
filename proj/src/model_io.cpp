#include "jgsa/jgsa.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace jgsa {

std::uint64_t training_digest(const Matrix& xs, const Matrix& xt) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const Matrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const auto bits = std::bit_cast<std::uint64_t>(m(i, j));
        for (int b = 0; b < 8; ++b) {
          h ^= (bits >> (8 * b)) & 0xffU;
          h *= 0x100000001b3ULL;
        }
      }
    }
  };
  feed(xs);
  feed(xt);
  return h;
}

namespace {

std::string shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void put_u32(std::ostream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& in, const std::string& source) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (in.gcount() != 4) throw DataError(source + ": truncated model header");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

template <typename T>
T parse_number(const std::map<std::string, std::string>& kv, const std::string& key, const std::string& source,
               int base = 10) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw DataError(source + ": model header lacks '" + key + "'");
  T v{};
  const auto& s = it->second;
  std::from_chars_result r{};
  if constexpr (std::is_floating_point_v<T>) {
    r = std::from_chars(s.data(), s.data() + s.size(), v);
  } else {
    r = std::from_chars(s.data(), s.data() + s.size(), v, base);
  }
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) {
    throw DataError(source + ": bad value for '" + key + "' in model header");
  }
  return v;
}

}  // namespace

void save_model(const Projector& projector, std::uint64_t digest, const std::filesystem::path& path) {
  std::ostringstream header;
  header << "kernel=" << to_string(projector.kernel.kind) << '\n'
         << "bandwidth=" << (projector.kernel.bandwidth ? shortest(*projector.kernel.bandwidth) : "none") << '\n'
         << "k=" << projector.k() << '\n'
         << "d=" << projector.side() << '\n'
         << "input_dim=" << projector.input_dim << '\n';
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(digest));
  header << "digest=" << hex << '\n';
  const std::string text = header.str();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  out.write("JGSM", 4);
  put_u32(out, kModelFormatVersion);
  put_u32(out, static_cast<std::uint32_t>(text.size()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  write_rawmatrix(out, projector.projections.a, std::nullopt);
  write_rawmatrix(out, projector.projections.b, std::nullopt);
  if (projector.kernel.kernelized()) write_rawmatrix(out, projector.train_x, std::nullopt);
  if (!out) throw DataError("write failed for " + path.string());
}

StoredModel load_model(const std::filesystem::path& path) {
  const std::string source = path.string();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + source);
  char magic[4];
  in.read(magic, 4);
  if (in.gcount() != 4 || std::memcmp(magic, "JGSM", 4) != 0) throw DataError(source + ": not a model file");
  const auto version = get_u32(in, source);
  if (version != kModelFormatVersion) {
    throw DataError(source + ": unsupported model version " + std::to_string(version));
  }
  const auto len = get_u32(in, source);
  std::string text(len, '\0');
  in.read(text.data(), len);
  if (static_cast<std::uint32_t>(in.gcount()) != len) throw DataError(source + ": truncated model header");

  std::map<std::string, std::string> kv;
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DataError(source + ": malformed model header line '" + line + "'");
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }

  StoredModel m;
  if (!kv.count("kernel")) throw DataError(source + ": model header lacks 'kernel'");
  try {
    m.projector.kernel.kind = parse_kernel_kind(kv["kernel"]);
  } catch (const ConfigError& e) {
    throw DataError(source + ": " + e.what());
  }
  if (kv["bandwidth"] != "none") m.projector.kernel.bandwidth = parse_number<double>(kv, "bandwidth", source);
  const auto k = parse_number<long long>(kv, "k", source);
  const auto d = parse_number<long long>(kv, "d", source);
  m.projector.input_dim = parse_number<long long>(kv, "input_dim", source);
  m.digest = parse_number<std::uint64_t>(kv, "digest", source, 16);

  m.projector.projections.a = read_rawmatrix(in, source).first;
  m.projector.projections.b = read_rawmatrix(in, source).first;
  if (m.projector.kernel.kernelized()) m.projector.train_x = read_rawmatrix(in, source).first;

  const auto& p = m.projector.projections;
  if (p.a.rows() != d || p.b.rows() != d || p.a.cols() != k || p.b.cols() != k) {
    throw DataError(source + ": projection blocks disagree with header k/d");
  }
  if (m.projector.kernel.kernelized() &&
      (m.projector.train_x.cols() != d || m.projector.train_x.rows() != m.projector.input_dim)) {
    throw DataError(source + ": training block disagrees with header");
  }
  return m;
}

}  // namespace jgsa
