#include "blt/rational_approx.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace blt {

namespace {
constexpr double kPi = std::numbers::pi;
}

cplx SqrtApproxTerms::eval(cplx x) const {
  cplx s = 0.0;
  for (std::size_t i = 0; i < pole.size(); ++i) s += scale[i] * (1.0 - x) / (pole[i] - x);
  return s;
}

double SqrtApproxTerms::at_zero() const {
  double s = 0.0;
  for (std::size_t i = 0; i < pole.size(); ++i) s += scale[i] / pole[i];
  return s;
}

SqrtApproxTerms newman_sqrt(int d) {
  if (d < 3) throw std::invalid_argument("newman_sqrt: d must be >= 3");
  SqrtApproxTerms t;
  t.d = d;
  t.d_plus = (d - 1) / 2;
  t.d_minus = d / 2;  // ceil((d-1)/2)
  t.h = kPi / std::sqrt(2.0 * t.d_plus);
  const double K = 2.0 * t.h * std::numbers::sqrt2 / kPi;
  for (int k = -t.d_minus; k <= t.d_plus; ++k) {
    t.k.push_back(k);
    t.pole.push_back(1.0 + 2.0 * std::exp(2.0 * t.h * k));
    t.scale.push_back(K * std::exp(t.h * k));
  }
  return t;
}

double newman_error_bound(int d) { return 8.0 * std::exp(-0.5 * kPi * std::sqrt(double(d) - 2.0)); }

cplx sqrt_approx_general(int d_plus, int d_minus, double h, cplx x) {
  cplx s = 0.0;
  for (int k = -d_minus; k <= d_plus; ++k)
    s += x * std::exp(h * k) / (x + std::exp(2.0 * h * k));
  return 2.0 * h / kPi * s;
}

double sqrt_approx_general_bound(int d_plus, int d_minus, double h, cplx x) {
  const double c = std::arg(x) / kPi;
  const double ax = std::abs(x);
  const double e1 = 1.0 / (std::exp((1.0 - c) * kPi * kPi / h) - 1.0);
  const double e2 = 1.0 / (std::exp((1.0 + c) * kPi * kPi / h) - 1.0);
  return 2.0 * std::sqrt(ax) * (e1 + e2) +
         2.0 * h / (kPi * (std::exp(h) - 1.0)) *
             (ax * std::exp(-h * d_plus) + std::exp(-h * d_minus));
}

int degree_for_error(std::uint64_t n, double mu) {
  if (n < 5) throw std::invalid_argument("degree_for_error: n must be >= 5");
  if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("degree_for_error: mu must be in (0,1)");
  const double ln = std::log(double(n));
  const double a = (12.0 + 4.0 * ln) / kPi;
  int d = int(std::ceil(2.0 + a * a));
  auto tail_ok = [&](int dd) {
    return 16.0 * std::sqrt(double(n)) * std::exp(-0.5 * kPi * std::sqrt(dd - 2.0)) <=
           mu / (4.0 + ln);
  };
  const double b = 2.0 / kPi * std::log(16.0 * std::sqrt(double(n)) * (4.0 + ln) / mu);
  d = std::max(d, int(std::ceil(2.0 + b * b)) - 1);
  while (!tail_ok(d)) ++d;
  while (d - 1 >= 2.0 + a * a && tail_ok(d - 1)) --d;
  return std::max(d, 3);
}

namespace {
// Root of sum_j w_j / (y + c_j) between the poles -c_hi < y < -c_lo, by
// bisection in log|y|.
double interlaced_root(const std::vector<double>& w, const std::vector<double>& c, double c_lo,
                       double c_hi) {
  auto g = [&](double y) {
    double s = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) s += w[j] / (y + c[j]);
    return s;
  };
  double lo = std::log(c_lo), hi = std::log(c_hi);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    // g > 0 just right of -c_hi, g < 0 just left of -c_lo
    if (g(-std::exp(mid)) > 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return -std::exp(0.5 * (lo + hi));
}
}  // namespace

BltFactorization ra_blt_build(int d, std::uint64_t n) {
  const SqrtApproxTerms t = newman_sqrt(d);
  const double r0 = t.at_zero();
  const double K = 2.0 * t.h * std::numbers::sqrt2 / kPi;
  BltFactorization f;
  f.method = "ra";
  f.n = n;
  f.c_closed = false;
  f.scale = r0;
  std::vector<double> c, w;
  for (std::size_t i = 0; i < t.pole.size(); ++i) {
    const double hk = t.h * t.k[i];
    const double P = t.pole[i];
    f.theta.push_back(1.0 / P);
    f.omega.push_back(-2.0 * K * std::exp(3.0 * hk) / (P * P) / r0);
    c.push_back(2.0 * std::exp(2.0 * hk));
    w.push_back(std::exp(hk));
  }
  // numerator roots: x = 1 (from the factor 1 - x) and one between each pair of poles
  f.theta_hat.push_back(1.0);
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    const double y = interlaced_root(w, c, c[i], c[i + 1]);
    f.theta_hat.push_back(1.0 / (1.0 - y));
  }
  return f;
}

ParsevalResult weighted_parseval_check(const ComplexFn& f, const ComplexFn& g,
                                       const std::vector<double>& f_coeffs,
                                       const std::vector<double>& g_coeffs, double tau,
                                       std::size_t M) {
  if (M < 16) throw std::invalid_argument("weighted_parseval_check: M must be >= 16");
  if (!(tau > 0.0)) throw std::invalid_argument("weighted_parseval_check: tau must be > 0");
  ParsevalResult res;
  const double rad = std::exp(-tau);
  double acc = 0.0;
  for (std::size_t j = 0; j < M; ++j) {
    const cplx x = std::polar(rad, 2.0 * kPi * double(j) / double(M));
    acc += std::norm(f(x) - g(x));
  }
  res.integral = acc / double(M);
  const std::size_t N = std::max(f_coeffs.size(), g_coeffs.size());
  double s = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    const double a = k < f_coeffs.size() ? f_coeffs[k] : 0.0;
    const double b = k < g_coeffs.size() ? g_coeffs[k] : 0.0;
    s += (a - b) * (a - b) * std::exp(-2.0 * tau * double(k));
  }
  res.coeff_sum = s;
  return res;
}

}  // namespace blt
