#include "blt/io.hpp"

#include <fmt/format.h>

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "blt/error_eval.hpp"
#include "blt/rational_approx.hpp"
#include "json.hpp"

namespace blt {

using nlohmann::json;

std::string blt_to_json(const BltFactorization& f) {
  json j;
  j["degree"] = f.degree();
  j["theta"] = f.theta;
  j["theta_hat"] = f.theta_hat;
  j["n"] = f.n;
  json meta = json::object();
  for (const auto& [k, v] : f.meta) meta[k] = v;
  meta["method"] = f.method;
  meta["version"] = 1;
  j["meta"] = meta;
  return j.dump(2);
}

BltFactorization blt_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("blt json: ") + e.what());
  }
  try {
    const int d = j.at("degree").get<int>();
    auto theta = j.at("theta").get<std::vector<double>>();
    auto theta_hat = j.at("theta_hat").get<std::vector<double>>();
    const auto n = j.at("n").get<std::uint64_t>();
    const json& meta = j.at("meta");
    const auto method = meta.at("method").get<std::string>();
    if (meta.value("version", 0) != 1) throw std::invalid_argument("blt json: unsupported version");
    if (d < 0 || std::size_t(d) != theta.size() || theta.size() != theta_hat.size())
      throw std::invalid_argument("blt json: degree does not match theta/theta_hat lengths");
    for (double v : theta)
      if (!std::isfinite(v)) throw std::invalid_argument("blt json: non-finite theta");
    for (double v : theta_hat)
      if (!std::isfinite(v)) throw std::invalid_argument("blt json: non-finite theta_hat");

    BltFactorization f;
    if (method == "identity") {
      if (d != 0) throw std::invalid_argument("blt json: identity must have degree 0");
      f = identity_factorization(n);
    } else if (method == "ra") {
      f = ra_blt_build(d, n);
      for (int i = 0; i < d; ++i)
        if (std::abs(f.theta[i] - theta[i]) > 1e-9 * std::max(1.0, std::abs(theta[i])))
          throw std::invalid_argument("blt json: ra theta does not match degree " +
                                      std::to_string(d));
    } else if (method == "opt" || method == "degree1") {
      if (d < 1) throw std::invalid_argument("blt json: degree must be >= 1");
      f = make_factorization(theta, theta_hat, n, method);
    } else {
      throw std::invalid_argument("blt json: unknown method '" + method + "'");
    }
    for (auto it = meta.begin(); it != meta.end(); ++it)
      if (it.value().is_number() && it.key() != "version") f.meta[it.key()] = it.value().get<double>();
    return f;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("blt json: ") + e.what());
  }
}

void save_blt(const BltFactorization& f, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os << blt_to_json(f) << '\n';
  if (!os) throw std::runtime_error("write failed: " + path);
}

BltFactorization load_blt(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return blt_from_json(ss.str());
}

namespace {
struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;
}  // namespace

void write_noise(const NoiseStreamConfig& cfg, NoiseFormat format, const std::string& path,
                 const std::string& factorization_path, unsigned threads) {
  static_assert(std::endian::native == std::endian::little, "f64 output assumes little-endian");
  FilePtr fp(std::fopen(path.c_str(), format == NoiseFormat::Csv ? "w" : "wb"));
  if (!fp) throw std::runtime_error("cannot open " + path + " for writing");
  std::FILE* out = fp.get();
  const std::size_t m = cfg.m;

  if (format == NoiseFormat::Csv) {
    fmt::memory_buffer buf;
    fmt::format_to(std::back_inserter(buf), "step");
    for (std::size_t c = 0; c < m; ++c) fmt::format_to(std::back_inserter(buf), ",dim{}", c);
    buf.push_back('\n');
    generate_noise(
        cfg,
        [&](std::uint64_t k, const double* row) {
          fmt::format_to(std::back_inserter(buf), "{}", k);
          for (std::size_t c = 0; c < m; ++c) fmt::format_to(std::back_inserter(buf), ",{}", row[c]);
          buf.push_back('\n');
          if (buf.size() > (1u << 20)) {
            std::fwrite(buf.data(), 1, buf.size(), out);
            buf.clear();
          }
        },
        threads);
    std::fwrite(buf.data(), 1, buf.size(), out);
  } else {
    generate_noise(
        cfg, [&](std::uint64_t, const double* row) { std::fwrite(row, sizeof(double), m, out); },
        threads);
    json side;
    side["n"] = cfg.n;
    side["m"] = cfg.m;
    side["zeta"] = cfg.zeta;
    side["sigma"] = noise_sigma(cfg.factorization, cfg.n, cfg.zeta);
    side["seed"] = cfg.seed;
    side["rng"] = kRngName;
    side["mode"] = cfg.mode == NoiseMode::Prefix ? "prefix" : "per-step";
    side["factorization_path"] = factorization_path;
    std::ofstream os(path + ".json");
    if (!os) throw std::runtime_error("cannot open " + path + ".json for writing");
    os << side.dump(2) << '\n';
  }
  if (std::ferror(out)) throw std::runtime_error("write failed: " + path);
}

}  // namespace blt
