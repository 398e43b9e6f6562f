#include <cmath>
#include <numbers>

#include "blt/error_eval.hpp"
#include "blt/rational_approx.hpp"
#include "doctest.h"

using namespace blt;

TEST_CASE("newman bound and sweep") {
  const double bound = newman_error_bound(30);
  CHECK(bound == doctest::Approx(1.97e-3).epsilon(0.01));
  const SqrtApproxTerms t = newman_sqrt(30);
  CHECK(t.pole.size() == 30);
  CHECK(std::abs(t.at_zero() - 1.0) <= bound);
  double worst = 0.0;
  for (int j = 0; j < 256; ++j) {
    const cplx x = std::polar(1.0, 2.0 * std::numbers::pi * j / 256.0);
    worst = std::max(worst, std::abs(t.eval(x) - std::sqrt(1.0 - x)));
  }
  CHECK(worst <= bound);
  CHECK_THROWS_AS(newman_sqrt(2), std::invalid_argument);
}

TEST_CASE("general form obeys its error decomposition") {
  for (double h : {0.4, 0.8, 1.5})
    for (int dp : {3, 6})
      for (double mag : {0.01, 0.3, 1.0, 1.9})
        for (double ang : {-1.5, -0.7, 0.0, 0.9, 1.5}) {
          const cplx x = std::polar(mag, ang);
          const double err = std::abs(sqrt_approx_general(dp, dp + 1, h, x) - std::sqrt(x));
          CHECK(err <= sqrt_approx_general_bound(dp, dp + 1, h, x) * (1 + 1e-12) + 1e-15);
        }
}

TEST_CASE("degree for error") {
  CHECK(degree_for_error(1000, 0.1) == 162);
  // both conditions evaluated independently at n = 5, mu just below 1
  const double ln5 = std::log(5.0);
  const double a = (12.0 + 4.0 * ln5) / std::numbers::pi;
  const int d1 = int(std::ceil(2.0 + a * a));
  int d2 = 3;
  while (16.0 * std::sqrt(5.0) * std::exp(-0.5 * std::numbers::pi * std::sqrt(d2 - 2.0)) >
         0.999999 / (4.0 + ln5))
    ++d2;
  CHECK(degree_for_error(5, 0.999999) == std::max(d1, d2));
  CHECK(degree_for_error(5, 0.999999) == 37);
  int prev = 0;
  for (std::uint64_t n : {5u, 50u, 500u, 5000u, 50000u, 500000u}) {
    const int d = degree_for_error(n, 0.3);
    CHECK(d >= prev);
    prev = d;
    int pm = 1 << 30;
    for (double mu : {0.01, 0.05, 0.2, 0.5, 0.9}) {
      const int dm = degree_for_error(n, mu);
      CHECK(dm <= pm);
      pm = dm;
    }
  }
  CHECK_THROWS_AS(degree_for_error(4, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(degree_for_error(100, 1.5), std::invalid_argument);
}

TEST_CASE("RA-BLT factorization") {
  const BltFactorization f = ra_blt_build(9, 1000);
  CHECK(max_err(f, 1000).ratio() <= 1.2);
  // closed-form row norm against direct summation
  CHECK(max_err(f, 3000).max_err == doctest::Approx(max_err_direct(f, 3000).max_err).epsilon(1e-9));

  const BltFactorization g = ra_blt_build(3, 10);
  const Matrix BC = ltt_matrix(b_coeffs(g, 10)) * ltt_matrix(c_coeffs(g, 10));
  CHECK((BC - all_ones_lower(10)).cwiseAbs().maxCoeff() <= 1e-8);

  // numerator roots: r~(1/theta_hat) = 0
  const BltFactorization h = ra_blt_build(12, 100);
  const SqrtApproxTerms t = newman_sqrt(12);
  for (std::size_t i = 1; i < h.theta_hat.size(); ++i)
    CHECK(std::abs(t.eval(1.0 / h.theta_hat[i])) < 1e-10);
  CHECK(h.theta_hat[0] == 1.0);
}

TEST_CASE("RA-BLT with the degree from degree_for_error") {
  const int d = degree_for_error(1000, 0.5);
  const BltFactorization f = ra_blt_build(d, 1000);
  const MaxErrReport r = max_err(f, 1000);
  CHECK(r.max_err <= opt_lt_toe(1000) + 0.5);
}

TEST_CASE("weighted Parseval") {
  const std::vector<double> none;
  auto one = [](cplx) { return cplx(1.0); };
  auto id = [](cplx x) { return x; };
  const ParsevalResult same = weighted_parseval_check(one, one, {1.0}, {1.0}, 0.5, 1024);
  CHECK(same.integral == 0.0);
  CHECK(same.coeff_sum == 0.0);
  const ParsevalResult p = weighted_parseval_check(one, id, {1.0}, {0.0, 1.0}, 0.5, 1024);
  CHECK(p.coeff_sum == doctest::Approx(1.0 + std::exp(-1.0)).epsilon(1e-14));
  CHECK(std::abs(p.integral - p.coeff_sum) < 1e-6);
  // geometric series: coefficients 0.5^k
  std::vector<double> geo(200);
  for (std::size_t k = 0; k < geo.size(); ++k) geo[k] = std::pow(0.5, double(k));
  auto rat = [](cplx x) { return 1.0 / (1.0 - 0.5 * x); };
  auto zero = [](cplx) { return cplx(0.0); };
  const ParsevalResult q = weighted_parseval_check(rat, zero, geo, none, 0.1, 1024);
  CHECK(std::abs(q.integral - q.coeff_sum) < 1e-6);
  CHECK_THROWS_AS(weighted_parseval_check(one, id, {}, {}, 0.5, 8), std::invalid_argument);
}
