#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <random>
#include <thread>

#include "blt/error_eval.hpp"
#include "doctest.h"

using namespace blt;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

BltFactorization random_fact(std::mt19937_64& eng, int d, std::uint64_t n) {
  // interlaced roots keep the C side well conditioned, jitter keeps it generic
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> th(d), thh(d);
  for (int i = 0; i < d; ++i) {
    const double a = std::pow(u(eng), 0.3);
    th[i] = a;
    thh[i] = a + (1.0 - a) * u(eng);
  }
  return make_factorization(th, thh, n, "opt");
}
}  // namespace

TEST_CASE("geometric prefix") {
  CHECK(geometric_prefix(0.5, 3) == 1.75);
  CHECK(geometric_prefix(1.0, 100) == 100.0);
  CHECK(geometric_prefix(0.0, 5) == 1.0);
  using big = boost::multiprecision::cpp_bin_float_50;
  for (double th : {1.0 - 1e-12, 1.0 - 1e-7, 1.0 - 1e-3}) {
    const std::uint64_t n = 1000000;
    const big t = th;
    const big ref = (1 - boost::multiprecision::pow(t, big(n))) / (1 - t);
    CHECK(rel(geometric_prefix(th, n), ref.convert_to<double>()) < 1e-9);
  }
  CHECK_THROWS_AS(geometric_prefix(1.5, 3), std::invalid_argument);
}

TEST_CASE("closed forms by hand") {
  CHECK(sensitivity_closed({0.5}, {0.5}, 3) == doctest::Approx(std::sqrt(1.3125)).epsilon(1e-14));
  CHECK(sensitivity_closed({}, {}, 77) == 1.0);
  CHECK(rownorm_closed({0.5}, {0.5}, 3) == doctest::Approx(std::sqrt(6.3125)).epsilon(1e-14));
  CHECK(rownorm_closed({}, {}, 49) == doctest::Approx(7.0));
  CHECK(max_err(identity_factorization(100), 100).max_err == doctest::Approx(10.0));
  CHECK_THROWS_AS(sensitivity_closed({0.5}, {1.2}, 3), std::invalid_argument);
}

TEST_CASE("closed forms match direct summation") {
  std::mt19937_64 eng(2024);
  for (int trial = 0; trial < 30; ++trial) {
    const BltFactorization f = random_fact(eng, 3, 4096);
    CHECK(rel(sensitivity_closed(f.omega_hat, f.theta_hat, 4096),
              sensitivity_direct(c_coeffs(f, 4096))) < 1e-10);
    CHECK(rel(rownorm_closed(f.omega, f.theta, 2048), rownorm_direct(blt_coeffs(f.r(), 2048))) < 1e-9);
  }
}

TEST_CASE("closed forms near theta = 1") {
  const BltFactorization f = make_factorization({1.0 - 1e-9, 0.9}, {1.0 - 5e-10, 0.95}, 4096, "opt");
  const auto a = max_err(f, 4096), b = max_err_direct(f, 4096);
  CHECK(rel(a.sensitivity, b.sensitivity) < 1e-8);
  CHECK(rel(a.row_norm, b.row_norm) < 1e-8);
}

TEST_CASE("bounds table") {
  const Bounds b1 = bounds_table(1);
  CHECK(b1.opt_lt_toe == 1.0);
  CHECK(b1.matousek_lb == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(b1.bintree == 1.0);
  CHECK(opt_lt_toe(3) == 1.390625);
  CHECK(bintree_value(8) == 4.0);
  CHECK(bintree_value(9) == 5.0);
  for (std::uint64_t n : {2u, 10u, 100u, 1000u}) {
    const Bounds b = bounds_table(n);
    CHECK(b.matousek_lb <= b.opt_lt_toe);
    CHECK(b.matousek_lb <= b.mathias_ub);
  }
}

TEST_CASE("opt_lt_toe is consistent across threads") {
  std::vector<double> got(4);
  std::vector<std::thread> ts;
  for (int i = 0; i < 4; ++i) ts.emplace_back([&, i] { got[i] = opt_lt_toe(200000 + i * 1000); });
  for (auto& t : ts) t.join();
  for (int i = 0; i < 4; ++i) CHECK(got[i] == opt_lt_toe(200000 + i * 1000));
}

TEST_CASE("linear growth coefficient") {
  // d=1: 1 + 2 w/(1-t) + w^2/(1-t)^2 = (1 + w/(1-t))^2
  CHECK(linear_growth_alpha1({-0.25}, {0.5}) == doctest::Approx(0.25));
}

TEST_CASE("row norm with fast and slow poles at large n") {
  using big = boost::multiprecision::cpp_bin_float_50;
  const std::uint64_t n = 200000;
  const BltFactorization f =
      make_factorization({0.5, 0.999, 0.99999, 1.0 - 1e-8}, {0.6, 0.9995, 0.999995, 1.0 - 5e-9}, n, "opt");
  std::vector<big> g(f.theta.size(), big(0));
  big acc = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    big t = 1;
    for (std::size_t j = 0; j < g.size(); ++j) t += big(f.omega[j]) * g[j];
    acc += t * t;
    for (std::size_t j = 0; j < g.size(); ++j) g[j] = 1 + big(f.theta[j]) * g[j];
  }
  const double ref = boost::multiprecision::sqrt(acc).convert_to<double>();
  CHECK(rel(rownorm_closed(f.omega, f.theta, n), ref) < 1e-9);
}
