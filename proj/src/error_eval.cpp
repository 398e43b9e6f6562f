#include "blt/error_eval.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "blt/geom.hpp"

namespace blt {

double geometric_prefix(double theta, std::uint64_t n) {
  if (!(theta >= 0.0 && theta <= 1.0))
    throw std::invalid_argument("geometric_prefix: theta outside [0,1]");
  if (n == 0) return 0.0;
  if (theta == 1.0) return double(n);
  const double delta = 1.0 - theta;
  const double nd = double(n);
  if (delta * nd < 1e-3) {
    // sum_m (-delta)^m binom(n, m+1)
    double term = nd, sum = nd;
    for (std::uint64_t m = 1; m < n && m < 64; ++m) {
      term *= -delta * (nd - double(m)) / double(m + 1);
      sum += term;
      if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  return -std::expm1(nd * std::log1p(-delta)) / delta;
}

static void check_unit_interval(const std::vector<double>& th, const char* who) {
  for (double t : th)
    if (!(t >= 0.0 && t <= 1.0))
      throw std::invalid_argument(std::string(who) + ": theta outside [0,1]");
}

double sensitivity_closed(const std::vector<double>& omega_hat,
                          const std::vector<double>& theta_hat, std::uint64_t n) {
  if (omega_hat.size() != theta_hat.size())
    throw std::invalid_argument("sensitivity_closed: size mismatch");
  check_unit_interval(theta_hat, "sensitivity_closed");
  const double s2 =
      sensitivity2_generic(omega_hat.data(), theta_hat.data(), int(theta_hat.size()), n);
  if (!(s2 >= 0.0)) throw std::domain_error("sensitivity_closed: negative radicand");
  return std::sqrt(s2);
}

double rownorm_closed(const std::vector<double>& omega, const std::vector<double>& theta,
                      std::uint64_t n) {
  if (omega.size() != theta.size()) throw std::invalid_argument("rownorm_closed: size mismatch");
  check_unit_interval(theta, "rownorm_closed");
  if (n == 0) return 0.0;
  const double s2 = rownorm2_generic(omega.data(), theta.data(), int(theta.size()), n);
  if (!(s2 >= 0.0)) throw std::domain_error("rownorm_closed: negative radicand");
  return std::sqrt(s2);
}

double sensitivity_direct(const ToeplitzSeq& c) {
  double s = 0.0;
  for (double v : c.coeffs()) s += v * v;
  return std::sqrt(s);
}

double rownorm_direct(const ToeplitzSeq& r) {
  double s = 0.0, t = 0.0;
  for (double v : r.coeffs()) {
    t += v;
    s += t * t;
  }
  return std::sqrt(s);
}

namespace {
// Prefix sums of f_k^2, grown on demand. Callers see a consistent prefix
// because growth happens under the lock.
class OptCache {
 public:
  double get(std::uint64_t n) {
    if (n > kMaxCached) return direct(n);
    std::lock_guard<std::mutex> lock(mu_);
    if (cum_.empty()) {
      cum_.push_back(1.0);
      f_ = 1.0;
    }
    while (cum_.size() < n) {
      const double k = double(cum_.size());
      f_ *= 1.0 - 1.0 / (2.0 * k);
      cum_.push_back(cum_.back() + f_ * f_);
    }
    return cum_[n - 1];
  }

 private:
  static double direct(std::uint64_t n) {
    double f = 1.0, s = 1.0;
    for (std::uint64_t k = 1; k < n; ++k) {
      f *= 1.0 - 1.0 / (2.0 * double(k));
      s += f * f;
    }
    return s;
  }
  static constexpr std::uint64_t kMaxCached = std::uint64_t{1} << 22;
  std::mutex mu_;
  std::vector<double> cum_;
  double f_ = 1.0;
};
OptCache& opt_cache() {
  static OptCache c;
  return c;
}
}  // namespace

double opt_lt_toe(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("opt_lt_toe: n must be >= 1");
  return opt_cache().get(n);
}

double mathias_ub(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("mathias_ub: n must be >= 1");
  const double nd = double(n);
  double s = 0.0;
  for (std::uint64_t j = 1; j <= n; ++j) s += 1.0 / std::sin(std::numbers::pi * (2.0 * double(j) - 1.0) / (2.0 * nd));
  return 0.5 + s / (2.0 * nd);
}

double matousek_lb(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("matousek_lb: n must be >= 1");
  const double nd = double(n);
  double s = 0.0;
  for (std::uint64_t j = 1; j <= n; ++j)
    s += 1.0 / std::sin(std::numbers::pi * (2.0 * double(j) - 1.0) / (4.0 * nd + 2.0));
  return s / (2.0 * nd);
}

double bintree_value(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("bintree_value: n must be >= 1");
  std::uint64_t l = 0;
  while ((std::uint64_t{1} << l) < n) ++l;
  return double(l) + 1.0;
}

Bounds bounds_table(std::uint64_t n) {
  return {opt_lt_toe(n), mathias_ub(n), matousek_lb(n), bintree_value(n)};
}

MaxErrReport max_err(const BltFactorization& f, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("max_err: n must be >= 1");
  MaxErrReport rep;
  rep.n = n;
  rep.row_norm = rownorm_closed(f.omega, f.theta, n);
  if (f.c_closed)
    rep.sensitivity = sensitivity_closed(f.omega_hat, f.theta_hat, n);
  else
    rep.sensitivity = sensitivity_direct(blt_inverse_coeffs(f.r(), n));
  rep.max_err = rep.sensitivity * rep.row_norm;
  rep.bounds = bounds_table(n);
  return rep;
}

MaxErrReport max_err_direct(const BltFactorization& f, std::uint64_t n) {
  MaxErrReport rep;
  rep.n = n;
  rep.row_norm = rownorm_direct(blt_coeffs(f.r(), n));
  rep.sensitivity = sensitivity_direct(c_coeffs(f, n));
  rep.max_err = rep.sensitivity * rep.row_norm;
  rep.bounds = bounds_table(n);
  return rep;
}

double linear_growth_alpha1(const std::vector<double>& omega, const std::vector<double>& theta) {
  // (1 + sum_j w_j/(1-th_j))^2, written out term by term
  double s = 0.0;
  for (std::size_t j = 0; j < theta.size(); ++j) {
    if (theta[j] >= 1.0) throw std::invalid_argument("linear_growth_alpha1: theta must be < 1");
    s += omega[j] / (1.0 - theta[j]);
  }
  double a = 1.0 + 2.0 * s;
  for (std::size_t j = 0; j < theta.size(); ++j)
    for (std::size_t k = 0; k < theta.size(); ++k)
      a += omega[j] * omega[k] / ((1.0 - theta[j]) * (1.0 - theta[k]));
  return a;
}

}  // namespace blt
