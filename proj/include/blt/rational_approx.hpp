#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "blt/params.hpp"

namespace blt {

using cplx = std::complex<double>;

// r~(x) = sum_k scale_k (1 - x) / (pole_k - x), k = -d_minus..d_plus, with
// scale_k = (2 h sqrt2 / pi) e^{hk} and pole_k = 1 + 2 e^{2hk}.
struct SqrtApproxTerms {
  int d = 0;
  int d_plus = 0;
  int d_minus = 0;
  double h = 0.0;
  std::vector<double> pole;
  std::vector<double> scale;
  std::vector<int> k;

  cplx eval(cplx x) const;
  double at_zero() const;
};

SqrtApproxTerms newman_sqrt(int d);

// 8 exp(-(pi/2) sqrt(d - 2))
double newman_error_bound(int d);

// (2h/pi) sum_{k=-d_minus}^{d_plus} x e^{hk} / (x + e^{2hk}), approximating sqrt(x) for Re x >= 0.
cplx sqrt_approx_general(int d_plus, int d_minus, double h, cplx x);
// Right-hand side of the error decomposition for the general form at x.
double sqrt_approx_general_bound(int d_plus, int d_minus, double h, cplx x);

// Smallest d with d >= 2 + ((12 + 4 ln n)/pi)^2 and
// 16 sqrt(n) exp(-(pi/2) sqrt(d-2)) <= mu / (4 + ln n).
int degree_for_error(std::uint64_t n, double mu);

// B = LTT(r/(1-x)), C = LTT(1/r) with r = r~ / r~(0). theta_hat is filled with
// the numerator roots for the file format; the C side is summed from 1/r.
BltFactorization ra_blt_build(int d, std::uint64_t n);

struct ParsevalResult {
  double integral = 0.0;   // trapezoid (1/2pi) int |f-g|^2 on |x| = e^{-tau}
  double coeff_sum = 0.0;  // sum |f_k - g_k|^2 e^{-2 tau k}
};

using ComplexFn = std::function<cplx(cplx)>;

ParsevalResult weighted_parseval_check(const ComplexFn& f, const ComplexFn& g,
                                       const std::vector<double>& f_coeffs,
                                       const std::vector<double>& g_coeffs, double tau,
                                       std::size_t M);

}  // namespace blt
