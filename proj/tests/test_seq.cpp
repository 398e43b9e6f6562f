#include <cmath>
#include <numbers>
#include <random>

#include "blt/seq.hpp"
#include "doctest.h"

using namespace blt;

TEST_CASE("optimal coefficients") {
  const auto f = optimal_coeffs(4);
  CHECK(f[0] == 1.0);
  CHECK(f[1] == 0.5);
  CHECK(f[2] == 0.375);
  CHECK(f[3] == 0.3125);
  CHECK(optimal_coeffs(1).n() == 1);
  const auto g = optimal_coeffs(20);
  CHECK(g[19] >= 1.0 / std::sqrt(std::numbers::pi * 20));
  CHECK(g[19] <= 1.0 / std::sqrt(std::numbers::pi * 19));
  CHECK_THROWS_AS(optimal_coeffs(0), std::invalid_argument);
}

TEST_CASE("cauchy product") {
  const auto f = optimal_coeffs(4);
  const auto ff = cauchy_product(f, f);
  for (std::size_t k = 0; k < 4; ++k) CHECK(ff[k] == doctest::Approx(1.0).epsilon(1e-14));
  const ToeplitzSeq b({0.3, -2.0, 7.0});
  const auto e = cauchy_product(ToeplitzSeq({1, 0, 0}), b);
  for (std::size_t k = 0; k < 3; ++k) CHECK(e[k] == b[k]);
  const auto p = cauchy_product(ToeplitzSeq({1, 1}), ToeplitzSeq({1, -1}));
  CHECK(p[0] == 1.0);
  CHECK(p[1] == 0.0);
}

TEST_CASE("series reciprocal") {
  const auto r = series_reciprocal(ToeplitzSeq({1, 1, 1, 1}));
  CHECK(r.coeffs() == std::vector<double>{1, -1, 0, 0});
  CHECK(series_reciprocal(ToeplitzSeq({1, 0.5})).coeffs() == std::vector<double>{1, -0.5});
  const auto f = optimal_coeffs(6);
  const auto e = cauchy_product(f, series_reciprocal(f));
  CHECK(e[0] == doctest::Approx(1.0));
  for (std::size_t k = 1; k < 6; ++k) CHECK(std::abs(e[k]) < 1e-14);
  CHECK_THROWS_AS(series_reciprocal(ToeplitzSeq({0.0, 1.0})), std::invalid_argument);
}

TEST_CASE("dense LTT application") {
  Matrix Z = Matrix::Ones(3, 1);
  const Matrix Y = ltt_apply_dense(ToeplitzSeq({1, 1, 1}), Z);
  CHECK(Y(0, 0) == 1);
  CHECK(Y(1, 0) == 2);
  CHECK(Y(2, 0) == 3);

  std::mt19937_64 eng(3);
  std::normal_distribution<double> nd;
  Matrix R(3, 2);
  for (int i = 0; i < 6; ++i) R.data()[i] = nd(eng);
  CHECK((ltt_apply_dense(ToeplitzSeq({1, 0, 0}), R) - R).norm() == 0.0);

  const auto f = optimal_coeffs(3);
  const Matrix L = ltt_apply_dense(f, Matrix::Identity(3, 3));
  CHECK(L(0, 0) == 1);
  CHECK(L(1, 0) == 0.5);
  CHECK(L(2, 0) == 0.375);
  CHECK(L(2, 1) == 0.5);
  CHECK(L(0, 1) == 0.0);
  CHECK_THROWS(ltt_apply_dense(f, Matrix::Ones(4, 1)));
}

TEST_CASE("prefix sums and norms") {
  CHECK(prefix_sums(ToeplitzSeq({1, 2, 3})).coeffs() == std::vector<double>{1, 3, 6});
  const Matrix A = all_ones_lower(4);
  CHECK(col_norm_max(A) == doctest::Approx(2.0));
  CHECK(row_norm_max(A) == doctest::Approx(2.0));
  CHECK_THROWS(ToeplitzSeq({1.0, NAN}));
}
