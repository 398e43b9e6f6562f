#include "blt/cli.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "blt/error_eval.hpp"
#include "blt/io.hpp"
#include "blt/optimizer.hpp"
#include "blt/rational_approx.hpp"
#include "blt/recursive.hpp"
#include "blt/streaming.hpp"
#include "json.hpp"

namespace blt::cli {

namespace {

using nlohmann::json;

constexpr std::uint64_t kVerifyCap = std::uint64_t{1} << 14;
constexpr std::uint64_t kFullGridCap = std::uint64_t{1} << 16;

// Thrown for verification failures; carries the report already printed.
struct Mismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v) { return std::isfinite(v) ? fmt::format("{}", v) : std::string(); }

std::vector<std::uint64_t> geometric_grid(std::uint64_t n_max, int k) {
  std::set<std::uint64_t> s;
  if (k < 2) throw CLI::ValidationError("--log-grid", "must be >= 2");
  const double L = std::log(double(n_max));
  for (int i = 0; i < k; ++i)
    s.insert(std::max<std::uint64_t>(1, std::uint64_t(std::llround(std::exp(L * i / (k - 1))))));
  s.insert(n_max);
  return {s.begin(), s.end()};
}

unsigned noise_threads() {
  if (const char* e = std::getenv("BLT_NOISE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(e, &end, 10);
    if (end != e && *end == '\0' && v >= 1) return unsigned(v);
    throw std::invalid_argument("BLT_NOISE_THREADS must be a positive integer");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

json report_json(const BltFactorization& f, const MaxErrReport& r) {
  json j;
  j["n"] = r.n;
  j["method"] = f.method;
  j["degree"] = f.degree();
  j["sensitivity"] = r.sensitivity;
  j["row_norm"] = r.row_norm;
  j["max_err"] = r.max_err;
  j["ratio"] = r.ratio();
  j["bounds"] = {{"opt_lt_toe", r.bounds.opt_lt_toe},
                 {"mathias_ub", r.bounds.mathias_ub},
                 {"matousek_lb", r.bounds.matousek_lb},
                 {"bintree", r.bounds.bintree}};
  const bool below_one = std::all_of(f.theta.begin(), f.theta.end(), [](double t) { return t < 1.0; });
  if (below_one)
    j["alpha1"] = linear_growth_alpha1(f.omega, f.theta);
  else
    j["alpha1"] = nullptr;
  return j;
}

void check_finite(const MaxErrReport& r) {
  if (!std::isfinite(r.max_err)) throw std::domain_error("MaxErr evaluated to a non-finite value");
}

std::vector<std::uint64_t> parse_u64_list(const std::string& s, const char* what) {
  std::vector<std::uint64_t> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t pos = 0;
    double x = 0.0;
    try {
      x = std::stod(tok, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != tok.size() || !(x >= 1.0) || x != std::floor(x))
      throw CLI::ValidationError(what, "expected a comma list of positive integers");
    v.push_back(std::uint64_t(x));
  }
  if (v.empty()) throw CLI::ValidationError(what, "empty list");
  return v;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) v.push_back(tok);
  return v;
}

// ---- subcommands ----

struct BoundsOpts {
  std::uint64_t n_max = 0;
  int log_grid = 0;
  std::string blt;
};

int cmd_bounds(const BoundsOpts& o, std::ostream& out) {
  std::vector<std::uint64_t> grid;
  if (o.log_grid > 0) {
    grid = geometric_grid(o.n_max, o.log_grid);
  } else {
    if (o.n_max > kFullGridCap)
      throw std::invalid_argument(fmt::format("bounds: --n-max above {} needs --log-grid", kFullGridCap));
    for (std::uint64_t n = 1; n <= o.n_max; ++n) grid.push_back(n);
  }
  std::optional<BltFactorization> f;
  if (!o.blt.empty()) f = load_blt(o.blt);
  out << "n,opt_lt_toe,mathias_ub,matousek_lb,bintree,mechanism_maxerr,ratio\n";
  for (std::uint64_t n : grid) {
    const Bounds b = bounds_table(n);
    std::string me, ratio;
    if (f) {
      const MaxErrReport r = max_err(*f, n);
      check_finite(r);
      me = num(r.max_err);
      ratio = num(r.ratio());
    }
    out << fmt::format("{},{},{},{},{},{},{}\n", n, num(b.opt_lt_toe), num(b.mathias_ub),
                       num(b.matousek_lb), num(b.bintree), me, ratio);
  }
  return kExitOk;
}

struct BuildOpts {
  std::string method;
  int degree = 0;
  std::uint64_t steps = 0;
  double mu = 0.0;
  std::string out;
};

int cmd_build(const BuildOpts& o, std::ostream& out) {
  BltFactorization f;
  if (o.method == "ra") {
    int d = o.degree;
    if (d == 0) {
      if (o.mu <= 0.0 || o.steps == 0)
        throw std::invalid_argument("build: ra needs --degree, or --mu with --steps");
      d = degree_for_error(o.steps, o.mu);
    }
    f = ra_blt_build(d, o.steps);
  } else {
    if (o.steps < 1) throw std::invalid_argument("build: degree1 needs --steps");
    if (o.degree != 0 && o.degree != 1) throw std::invalid_argument("build: degree1 has degree 1");
    f = degree1_factorization(o.steps);
  }
  save_blt(f, o.out);
  json j{{"out", o.out}, {"method", f.method}, {"degree", f.degree()}, {"n", f.n}};
  if (o.steps > 0) {
    const MaxErrReport r = max_err(f, o.steps);
    check_finite(r);
    j["max_err"] = r.max_err;
    j["ratio"] = r.ratio();
  }
  out << j.dump(2) << '\n';
  return kExitOk;
}

struct OptimizeOpts {
  int degree = 0;
  std::uint64_t steps = 0;
  int max_iters = 500;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int cmd_optimize(const OptimizeOpts& o, std::ostream& out) {
  OptConfig cfg;
  cfg.degree = o.degree;
  cfg.n = o.steps;
  cfg.max_iters = o.max_iters;
  cfg.seed = o.seed;
  const OptResult res = optimize_blt(cfg);
  if (!std::isfinite(res.final_max_err)) throw std::domain_error("optimize: non-finite result");
  save_blt(res.factorization, o.out);
  json j{{"out", o.out},
         {"degree", o.degree},
         {"n", o.steps},
         {"final_loss", res.final_loss},
         {"final_max_err", res.final_max_err},
         {"ratio", res.final_max_err / opt_lt_toe(o.steps)},
         {"iterations", res.iterations},
         {"converged", res.converged}};
  out << j.dump(2) << '\n';
  return kExitOk;
}

struct EvalOpts {
  std::string blt;
  std::uint64_t steps = 0;
};

int cmd_eval(const EvalOpts& o, std::ostream& out) {
  const BltFactorization f = load_blt(o.blt);
  const MaxErrReport r = max_err(f, o.steps);
  check_finite(r);
  out << report_json(f, r).dump(2) << '\n';
  return kExitOk;
}

struct NoiseOpts {
  std::string blt;
  std::uint64_t steps = 0;
  std::size_t dim = 1;
  std::uint64_t seed = 0;
  double zeta = 1.0;
  std::string mode = "per-step";
  std::string format = "csv";
  std::string out;
};

int cmd_noisegen(const NoiseOpts& o, std::ostream& out) {
  NoiseStreamConfig cfg;
  cfg.factorization = load_blt(o.blt);
  cfg.n = o.steps;
  cfg.m = o.dim;
  cfg.seed = o.seed;
  cfg.zeta = o.zeta;
  cfg.mode = o.mode == "prefix" ? NoiseMode::Prefix : NoiseMode::PerStep;
  write_noise(cfg, o.format == "f64" ? NoiseFormat::F64 : NoiseFormat::Csv, o.out, o.blt,
              noise_threads());
  json j{{"out", o.out}, {"n", o.steps}, {"m", o.dim}, {"rng", kRngName},
         {"sigma", noise_sigma(cfg.factorization, cfg.n, cfg.zeta)}};
  out << j.dump(2) << '\n';
  return kExitOk;
}

struct VerifyOpts {
  std::string blt;
  std::uint64_t steps = 0;
  std::size_t dim = 1;
  std::uint64_t seed = 0;
  double tol = 1e-9;
};

int cmd_verify(const VerifyOpts& o, std::ostream& out) {
  if (o.steps > kVerifyCap)
    throw std::invalid_argument(fmt::format("verify: --steps is capped at {}", kVerifyCap));
  const BltFactorization f = load_blt(o.blt);
  const std::size_t n = std::size_t(o.steps), m = o.dim;

  // Z exactly as the streams draw it (sigma = 1 via zeta scaling).
  const double sigma1 = noise_sigma(f, n, 1.0);
  GaussianSource src(o.seed);
  Matrix Z(n, m);
  std::vector<double> row(m);
  for (std::size_t k = 0; k < n; ++k) {
    src.fill(row.data(), m, sigma1);
    for (std::size_t c = 0; c < m; ++c) Z(Eigen::Index(k), Eigen::Index(c)) = row[c];
  }
  const Matrix dense_step = ltt_apply_dense(blt_coeffs(f.r(), n), Z);
  const Matrix dense_prefix = ltt_apply_dense(b_coeffs(f, n), Z);

  double dev_step = 0.0, dev_prefix = 0.0, abs_step = 0.0, abs_prefix = 0.0;
  for (NoiseMode mode : {NoiseMode::PerStep, NoiseMode::Prefix}) {
    NoiseStreamConfig cfg{f, n, m, o.seed, 1.0, mode};
    const Matrix& dense = mode == NoiseMode::Prefix ? dense_prefix : dense_step;
    double& rel = mode == NoiseMode::Prefix ? dev_prefix : dev_step;
    double& ab = mode == NoiseMode::Prefix ? abs_prefix : abs_step;
    generate_noise(cfg, [&](std::uint64_t k, const double* r) {
      for (std::size_t c = 0; c < m; ++c) {
        const double ref = dense(Eigen::Index(k), Eigen::Index(c));
        const double d = std::abs(r[c] - ref);
        ab = std::max(ab, d);
        rel = std::max(rel, d / std::max(1.0, std::abs(ref)));
      }
    });
  }
  // B C = A on a leading block
  const std::size_t nb = std::min<std::size_t>(n, 256);
  const double bc_dev =
      (ltt_matrix(b_coeffs(f, nb)) * ltt_matrix(c_coeffs(f, nb)) - all_ones_lower(nb))
          .cwiseAbs()
          .maxCoeff();
  const bool ok = dev_step <= o.tol && dev_prefix <= o.tol && bc_dev <= std::max(o.tol, 1e-8);
  json j{{"n", n},
         {"m", m},
         {"seed", o.seed},
         {"tol", o.tol},
         {"max_abs_dev", std::max(abs_step, abs_prefix)},
         {"max_rel_dev_per_step", dev_step},
         {"max_rel_dev_prefix", dev_prefix},
         {"bc_minus_a_max_abs", bc_dev},
         {"ok", ok}};
  out << j.dump(2) << '\n';
  if (!ok) throw Mismatch("verify: streaming output differs from the dense product");
  return kExitOk;
}

struct CompareOpts {
  std::string degrees;
  std::string methods = "ra,opt";
  std::string n_grid;
  std::uint64_t opt_target = 0;
  int max_iters = 500;
};

int cmd_compare(const CompareOpts& o, std::ostream& out) {
  const auto degrees = parse_u64_list(o.degrees, "--degrees");
  const auto grid = parse_u64_list(o.n_grid, "--n-grid");
  const auto methods = split(o.methods);
  for (const auto& m : methods)
    if (m != "ra" && m != "opt") throw CLI::ValidationError("--methods", "unknown method " + m);
  out << "method,degree,n,opt_lt_toe,mathias_ub,matousek_lb,bintree,mechanism_maxerr,ratio\n";
  auto row = [&](const std::string& m, std::uint64_t d, std::uint64_t n, const MaxErrReport& r) {
    check_finite(r);
    out << fmt::format("{},{},{},{},{},{},{},{},{}\n", m, d, n, num(r.bounds.opt_lt_toe),
                       num(r.bounds.mathias_ub), num(r.bounds.matousek_lb), num(r.bounds.bintree),
                       num(r.max_err), num(r.ratio()));
  };
  for (const auto& m : methods)
    for (std::uint64_t d : degrees) {
      if (m == "ra") {
        const BltFactorization f = ra_blt_build(int(d), 0);
        for (std::uint64_t n : grid) row(m, d, n, max_err(f, n));
      } else if (o.opt_target > 0) {
        OptConfig cfg;
        cfg.degree = int(d);
        cfg.n = o.opt_target;
        cfg.max_iters = o.max_iters;
        const BltFactorization f = optimize_blt(cfg).factorization;
        for (std::uint64_t n : grid) row(m, d, n, max_err(f, n));
      } else {
        for (std::uint64_t n : grid) {
          OptConfig cfg;
          cfg.degree = int(d);
          cfg.n = std::max<std::uint64_t>(n, 2);
          cfg.max_iters = o.max_iters;
          row(m, d, n, max_err(optimize_blt(cfg).factorization, n));
        }
      }
    }
  return kExitOk;
}

struct RecursiveOpts {
  std::string base;
  int levels = 1;
  std::uint64_t steps_check = 0;
  std::uint64_t n1 = 0;
  std::size_t dim = 1;
  std::uint64_t seed = 0;
  double tol = 1e-9;
};

int cmd_recursive(const RecursiveOpts& o, std::ostream& out) {
  const BltFactorization f = load_blt(o.base);
  const std::uint64_t n1 = o.n1 > 0 ? o.n1 : f.n;
  if (n1 < 2 || n1 > 4096)
    throw std::invalid_argument("recursive: base step count must be in [2, 4096]; set --n1");
  const std::uint64_t n = recursive_rows(n1, o.levels);
  const std::uint64_t np = recursive_cols(n1, o.levels);
  if (o.levels > 63 || double(n1) * std::pow(double(n1), o.levels - 1) > 1e15)
    throw std::invalid_argument("recursive: n1^levels too large");

  const MaxErrReport base = max_err(f, n1);
  check_finite(base);
  const auto [sens, rown] = recursive_norms(base.sensitivity, base.row_norm, o.levels);

  const Matrix B1 = ltt_matrix(b_coeffs(f, n1));
  const Matrix C1 = ltt_matrix(c_coeffs(f, n1));
  const double base_dev = (B1 * C1 - all_ones_lower(n1)).cwiseAbs().maxCoeff();

  // Stream the first rows and compare against rows of B_l applied to the recorded Z.
  const std::uint64_t k = std::min(o.steps_check, n);
  std::map<std::uint64_t, std::vector<double>> zrec;
  GaussianSource src(o.seed);
  RecursiveStreamer rs(blt_base(f, n1), o.levels, o.dim, [&](std::uint64_t idx, double* z) {
    src.fill(z, o.dim, 1.0);
    zrec[idx].assign(z, z + o.dim);
  });
  std::vector<double> orow(o.dim);
  double dev = 0.0;
  bool causal = true;
  for (std::uint64_t i = 0; i < k; ++i) {
    rs.next(orow.data());
    const std::vector<double> b = recursive_b_row(B1, o.levels, i);
    std::vector<double> ref(o.dim, 0.0);
    for (std::uint64_t c = 0; c < b.size(); ++c) {
      if (b[c] == 0.0) continue;
      auto it = zrec.find(c);
      if (it == zrec.end()) {
        causal = false;
        continue;
      }
      for (std::size_t q = 0; q < o.dim; ++q) ref[q] += b[c] * it->second[q];
    }
    for (std::size_t q = 0; q < o.dim; ++q)
      dev = std::max(dev, std::abs(orow[q] - ref[q]) / std::max(1.0, std::abs(ref[q])));
  }
  const bool valid = causal && base_dev <= 1e-8 && dev <= o.tol;
  json j{{"n1", n1},
         {"levels", o.levels},
         {"n", n},
         {"n_prime", np},
         {"sens", sens},
         {"rownorm_bound", rown},
         {"max_err_bound", sens * rown},
         {"base_bc_dev", base_dev},
         {"rows_checked", k},
         {"max_abs_dev", dev},
         {"state_bytes", rs.state_bytes()},
         {"valid", valid}};
  out << j.dump(2) << '\n';
  if (!valid) throw Mismatch("recursive: streamed rows differ from B_l Z");
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Buffered linear Toeplitz factorizations for private prefix sums", "blt"};
  app.require_subcommand(1);

  BoundsOpts bo;
  auto* bounds = app.add_subcommand("bounds", "CSV table of error bounds");
  bounds->add_option("--n-max", bo.n_max, "largest n")->required()->check(CLI::PositiveNumber);
  bounds->add_option("--log-grid", bo.log_grid, "number of geometric grid points");
  bounds->add_option("--blt", bo.blt, "factorization file for the mechanism columns");

  BuildOpts bu;
  auto* build = app.add_subcommand("build", "construct a factorization");
  build->add_option("--method", bu.method)->required()->check(CLI::IsMember({"ra", "degree1"}));
  build->add_option("--degree", bu.degree)->check(CLI::Range(0, 100000));
  build->add_option("--steps", bu.steps);
  build->add_option("--mu", bu.mu, "target excess error; picks the degree (ra)");
  build->add_option("--out", bu.out)->required();

  OptimizeOpts oo;
  auto* optimize = app.add_subcommand("optimize", "optimize a factorization for n steps");
  optimize->add_option("--degree", oo.degree)->required()->check(CLI::Range(1, kMaxOptDegree));
  optimize->add_option("--steps", oo.steps)->required()->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 62));
  optimize->add_option("--max-iters", oo.max_iters)->check(CLI::PositiveNumber);
  optimize->add_option("--seed", oo.seed);
  optimize->add_option("--out", oo.out)->required();

  EvalOpts eo;
  auto* eval = app.add_subcommand("eval", "MaxErr report as JSON");
  eval->add_option("--blt", eo.blt)->required();
  eval->add_option("--steps", eo.steps)->required()->check(CLI::PositiveNumber);

  NoiseOpts no;
  auto* noisegen = app.add_subcommand("noisegen", "stream correlated noise to a file");
  noisegen->add_option("--blt", no.blt)->required();
  noisegen->add_option("--steps", no.steps)->required()->check(CLI::PositiveNumber);
  noisegen->add_option("--dim", no.dim)->required()->check(CLI::PositiveNumber);
  noisegen->add_option("--seed", no.seed)->required();
  noisegen->add_option("--zeta", no.zeta)->check(CLI::NonNegativeNumber);
  noisegen->add_option("--mode", no.mode)->check(CLI::IsMember({"per-step", "prefix"}));
  noisegen->add_option("--format", no.format)->check(CLI::IsMember({"csv", "f64"}));
  noisegen->add_option("--out", no.out)->required();

  VerifyOpts vo;
  auto* verify = app.add_subcommand("verify", "compare streaming output with dense products");
  verify->add_option("--blt", vo.blt)->required();
  verify->add_option("--steps", vo.steps)->required()->check(CLI::PositiveNumber);
  verify->add_option("--dim", vo.dim)->check(CLI::PositiveNumber);
  verify->add_option("--seed", vo.seed);
  verify->add_option("--tol", vo.tol)->check(CLI::PositiveNumber);

  CompareOpts co;
  auto* compare = app.add_subcommand("compare", "CSV of MaxErr ratios across methods and n");
  compare->add_option("--degrees", co.degrees)->required();
  compare->add_option("--methods", co.methods);
  compare->add_option("--n-grid", co.n_grid)->required();
  compare->add_option("--opt-target", co.opt_target, "optimize once for this n instead of per n");
  compare->add_option("--max-iters", co.max_iters)->check(CLI::PositiveNumber);

  RecursiveOpts ro;
  auto* recursive = app.add_subcommand("recursive", "recursive construction check and norms");
  recursive->add_option("--base", ro.base)->required();
  recursive->add_option("--levels", ro.levels)->required()->check(CLI::Range(1, 63));
  recursive->add_option("--steps-check", ro.steps_check);
  recursive->add_option("--n1", ro.n1, "base step count (default: the file's n)");
  recursive->add_option("--dim", ro.dim)->check(CLI::PositiveNumber);
  recursive->add_option("--seed", ro.seed);
  recursive->add_option("--tol", ro.tol)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*bounds) return cmd_bounds(bo, out);
    if (*build) return cmd_build(bu, out);
    if (*optimize) return cmd_optimize(oo, out);
    if (*eval) return cmd_eval(eo, out);
    if (*noisegen) return cmd_noisegen(no, out);
    if (*verify) return cmd_verify(vo, out);
    if (*compare) return cmd_compare(co, out);
    if (*recursive) return cmd_recursive(ro, out);
  } catch (const Mismatch& e) {
    err << "error: " << e.what() << '\n';
    return kExitMismatch;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::logic_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitUsage;
}

}  // namespace blt::cli
