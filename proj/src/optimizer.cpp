#include "blt/optimizer.hpp"

#include <ceres/ceres.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <type_traits>

#include "blt/error_eval.hpp"
#include "blt/geom.hpp"

namespace blt {

namespace {

inline double val(double x) { return x; }
template <int N>
double val(const ceres::Jet<double, N>& x) {
  return x.a;
}

bool distinct(const double* v, int d) {
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (v[i] == v[j]) return false;
  return true;
}

// Loss on (theta, theta_hat) for any scalar type. False outside the valid region.
template <class T>
bool loss_generic(const T* th, const T* thh, int d, std::uint64_t n, double bw, T& out) {
  std::vector<double> a(d), b(d);
  for (int i = 0; i < d; ++i) {
    a[i] = val(th[i]);
    b[i] = val(thh[i]);
    if (!(a[i] > 0.0 && a[i] < 1.0 && b[i] > 0.0 && b[i] < 1.0)) return false;
  }
  if (!distinct(a.data(), d) || !distinct(b.data(), d)) return false;
  std::vector<T> w(d), wh(d);
  residues_generic(th, thh, d, w.data());
  residues_generic(thh, th, d, wh.data());
  for (int i = 0; i < d; ++i)
    if (!(val(wh[i]) > 0.0)) return false;
  const T s2 = sensitivity2_generic(wh.data(), thh, d, n);
  const T r2 = rownorm2_generic(w.data(), th, d, n);
  if (!(val(s2) > 0.0 && val(r2) > 0.0)) return false;
  using std::log;
  using std::sqrt;
  T L = sqrt(s2 * r2);
  for (int i = 0; i < d; ++i) L = L + bw * (-log(th[i]) - log(wh[i]));
  if (!std::isfinite(val(L))) return false;
  out = L;
  return true;
}

// Calls f with an integral_constant holding the smallest jet width >= k.
template <class F>
decltype(auto) with_width(int k, F&& f) {
  if (k <= 2) return f(std::integral_constant<int, 2>{});
  if (k <= 4) return f(std::integral_constant<int, 4>{});
  if (k <= 8) return f(std::integral_constant<int, 8>{});
  if (k <= 16) return f(std::integral_constant<int, 16>{});
  if (k <= 32) return f(std::integral_constant<int, 32>{});
  throw std::invalid_argument("optimizer: degree above " + std::to_string(kMaxOptDegree));
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double logit(double p) { return std::log(p) - std::log1p(-p); }

// Loss in logit coordinates x = logit(theta, theta_hat).
template <int N>
class LogitLoss final : public ceres::FirstOrderFunction {
 public:
  LogitLoss(int d, std::uint64_t n, double bw) : d_(d), n_(n), bw_(bw) {}

  bool Evaluate(const double* x, double* cost, double* grad) const override {
    const int k = 2 * d_;
    if (!grad) {
      std::vector<double> p(k);
      for (int i = 0; i < k; ++i) p[i] = sigmoid(x[i]);
      return loss_generic(p.data(), p.data() + d_, d_, n_, bw_, *cost);
    }
    using J = ceres::Jet<double, N>;
    std::vector<J> p(k);
    for (int i = 0; i < k; ++i) {
      const double s = sigmoid(x[i]);
      p[i] = J(s);
      p[i].v[i] = s * (1.0 - s);
    }
    J L;
    if (!loss_generic(p.data(), p.data() + d_, d_, n_, bw_, L)) return false;
    *cost = L.a;
    for (int i = 0; i < k; ++i) grad[i] = L.v[i];
    return true;
  }
  int NumParameters() const override { return 2 * d_; }

 private:
  int d_;
  std::uint64_t n_;
  double bw_;
};

void check_pair(const std::vector<double>& theta, const std::vector<double>& theta_hat) {
  if (theta.empty() || theta.size() != theta_hat.size())
    throw std::invalid_argument("loss: theta and theta_hat must be non-empty and equal length");
  if (theta.size() > std::size_t(kMaxOptDegree))
    throw std::invalid_argument("loss: degree above " + std::to_string(kMaxOptDegree));
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> geometric_ladder(int d, std::uint64_t n) {
  const double c = 1.0 / std::sqrt(double(n));
  std::vector<double> th(d), thh(d);
  for (int i = 0; i < d; ++i) {
    th[i] = 1.0 - c * std::pow(0.25, i);
    thh[i] = 1.0 - c * std::pow(0.25, i + 0.5);
  }
  return {th, thh};
}

double loss(const std::vector<double>& theta, const std::vector<double>& theta_hat,
            std::uint64_t n, double barrier_weight) {
  check_pair(theta, theta_hat);
  double L = 0.0;
  if (!loss_generic(theta.data(), theta_hat.data(), int(theta.size()), n, barrier_weight, L))
    return std::numeric_limits<double>::infinity();
  return L;
}

std::vector<double> gradient(const std::vector<double>& theta,
                             const std::vector<double>& theta_hat, std::uint64_t n,
                             double barrier_weight) {
  check_pair(theta, theta_hat);
  const int d = int(theta.size());
  return with_width(2 * d, [&](auto w) {
    constexpr int N = decltype(w)::value;
    using J = ceres::Jet<double, N>;
    std::vector<J> p(2 * d);
    for (int i = 0; i < d; ++i) {
      p[i] = J(theta[i], i);
      p[d + i] = J(theta_hat[i], d + i);
    }
    J L;
    if (!loss_generic(p.data(), p.data() + d, d, n, barrier_weight, L))
      throw std::domain_error("gradient: point outside the valid region");
    std::vector<double> g(2 * d);
    for (int i = 0; i < 2 * d; ++i) g[i] = L.v[i];
    return g;
  });
}

OptResult optimize_blt(const OptConfig& cfg) {
  if (cfg.degree < 1 || cfg.degree > kMaxOptDegree)
    throw std::invalid_argument("optimize: degree must be in [1, " +
                                std::to_string(kMaxOptDegree) + "]");
  if (cfg.n < 2) throw std::invalid_argument("optimize: n must be >= 2");
  if (cfg.max_iters < 1) throw std::invalid_argument("optimize: max_iters must be >= 1");
  const int d = cfg.degree;

  std::vector<double> th, thh;
  if (cfg.init_theta.empty() && cfg.init_theta_hat.empty()) {
    std::tie(th, thh) = geometric_ladder(d, cfg.n);
  } else {
    th = cfg.init_theta;
    thh = cfg.init_theta_hat;
    if (int(th.size()) != d || int(thh.size()) != d)
      throw std::invalid_argument("optimize: init vectors must have length degree");
  }

  std::vector<double> x(2 * d);
  for (int i = 0; i < d; ++i) {
    x[i] = logit(th[i]);
    x[d + i] = logit(thh[i]);
  }
  if (cfg.seed) {
    std::mt19937_64 eng(*cfg.seed);
    std::normal_distribution<double> nd(0.0, 0.05);
    for (double& xi : x) xi += nd(eng);
  }
  for (int i = 0; i < d; ++i) {
    th[i] = sigmoid(x[i]);
    thh[i] = sigmoid(x[d + i]);
  }

  OptResult res;
  res.initial_loss = loss(th, thh, cfg.n, cfg.barrier_weight);
  if (!std::isfinite(res.initial_loss))
    throw std::invalid_argument("optimize: starting point outside the valid region");

  ceres::GradientProblemSolver::Options opts;
  opts.line_search_direction_type = ceres::LBFGS;
  opts.max_num_iterations = cfg.max_iters;
  opts.gradient_tolerance = cfg.grad_tol;
  opts.function_tolerance = 1e-15;
  opts.parameter_tolerance = 1e-15;
  opts.logging_type = ceres::SILENT;
  ceres::GradientProblemSolver::Summary summary;
  with_width(2 * d, [&](auto w) {
    constexpr int N = decltype(w)::value;
    ceres::GradientProblem problem(new LogitLoss<N>(d, cfg.n, cfg.barrier_weight));
    ceres::Solve(opts, problem, x.data(), &summary);
    return 0;
  });

  for (int i = 0; i < d; ++i) {
    th[i] = sigmoid(x[i]);
    thh[i] = sigmoid(x[d + i]);
  }
  separate_roots(th, cfg.collision_eps);
  separate_roots(thh, cfg.collision_eps);

  res.final_loss = loss(th, thh, cfg.n, cfg.barrier_weight);
  res.iterations = int(summary.iterations.size()) - 1;
  res.converged = summary.termination_type == ceres::CONVERGENCE;
  res.factorization = make_factorization(th, thh, cfg.n, "opt");
  res.final_max_err = max_err(res.factorization, cfg.n).max_err;

  // B C = A on a small leading block
  const std::size_t m = std::size_t(std::min<std::uint64_t>(cfg.n, 64));
  const Matrix BC = ltt_matrix(b_coeffs(res.factorization, m)) *
                    ltt_matrix(c_coeffs(res.factorization, m));
  const double dev = (BC - all_ones_lower(m)).cwiseAbs().maxCoeff();
  if (!(dev <= 1e-8)) res.converged = false;

  auto& meta = res.factorization.meta;
  meta["n_target"] = double(cfg.n);
  meta["iterations"] = res.iterations;
  meta["final_ratio"] = res.final_max_err / opt_lt_toe(cfg.n);
  meta["dense_check_dev"] = dev;
  return res;
}

}  // namespace blt
