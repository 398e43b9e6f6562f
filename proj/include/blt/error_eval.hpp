#pragma once

#include <cstdint>
#include <vector>

#include "blt/params.hpp"

namespace blt {

inline constexpr double kEulerGamma = 0.5772156649015329;

struct Bounds {
  double opt_lt_toe = 0.0;
  double mathias_ub = 0.0;
  double matousek_lb = 0.0;
  double bintree = 0.0;
};

struct MaxErrReport {
  std::uint64_t n = 0;
  double sensitivity = 0.0;  // ||C||_{1->2}
  double row_norm = 0.0;     // ||B||_{2->inf}
  double max_err = 0.0;
  Bounds bounds;
  double ratio() const { return max_err / bounds.opt_lt_toe; }
};

// 1 + theta + ... + theta^(n-1); series around theta = 1 when (1-theta) n < 1e-3.
double geometric_prefix(double theta, std::uint64_t n);

double sensitivity_closed(const std::vector<double>& omega_hat,
                          const std::vector<double>& theta_hat, std::uint64_t n);
double rownorm_closed(const std::vector<double>& omega, const std::vector<double>& theta,
                      std::uint64_t n);

// Direct summation from coefficient sequences.
double sensitivity_direct(const ToeplitzSeq& c);
double rownorm_direct(const ToeplitzSeq& r);  // r is the C^{-1} generator; sums prefix sums

double opt_lt_toe(std::uint64_t n);
double mathias_ub(std::uint64_t n);
double matousek_lb(std::uint64_t n);
double bintree_value(std::uint64_t n);
Bounds bounds_table(std::uint64_t n);

// Closed form where a side has pole/residue form, O(n d) summation otherwise.
MaxErrReport max_err(const BltFactorization& f, std::uint64_t n);
// Same quantity from explicit coefficient sequences only.
MaxErrReport max_err_direct(const BltFactorization& f, std::uint64_t n);

// 1 + 2 sum_j w_j/(1-th_j) + sum_{j,k} w_j w_k / ((1-th_j)(1-th_k)): the
// coefficient of the eventual linear growth of the squared row norm.
double linear_growth_alpha1(const std::vector<double>& omega, const std::vector<double>& theta);

}  // namespace blt
