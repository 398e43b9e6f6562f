#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace blt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// First n coefficients c_0..c_{n-1} of a lower-triangular Toeplitz operator,
// equivalently a truncated power series.
class ToeplitzSeq {
 public:
  ToeplitzSeq() = default;
  explicit ToeplitzSeq(std::vector<double> coeffs);

  std::size_t n() const { return c_.size(); }
  double operator[](std::size_t k) const { return c_[k]; }
  const std::vector<double>& coeffs() const { return c_; }

 private:
  std::vector<double> c_;
};

// f_k = f_{k-1} (1 - 1/(2k)), the coefficients of 1/sqrt(1-x).
ToeplitzSeq optimal_coeffs(std::size_t n);

ToeplitzSeq cauchy_product(const ToeplitzSeq& a, const ToeplitzSeq& b);

// 1/a as a truncated series; requires a_0 != 0.
ToeplitzSeq series_reciprocal(const ToeplitzSeq& a);

// Running sums t_k = a_0 + ... + a_k, i.e. the coefficients of a(x)/(1-x).
ToeplitzSeq prefix_sums(const ToeplitzSeq& a);

// Dense LTT(a) * Z. Test oracle, O(n^2 m).
Matrix ltt_apply_dense(const ToeplitzSeq& a, const Matrix& Z);

// Dense LTT(a) itself.
Matrix ltt_matrix(const ToeplitzSeq& a);

// Lower-triangular all-ones matrix of size n.
Matrix all_ones_lower(std::size_t n);

// Largest column 2-norm and largest row 2-norm of a dense matrix.
double col_norm_max(const Matrix& M);
double row_norm_max(const Matrix& M);

inline constexpr std::size_t kDenseCap = std::size_t{1} << 16;

}  // namespace blt
