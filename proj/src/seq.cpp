#include "blt/seq.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace blt {

ToeplitzSeq::ToeplitzSeq(std::vector<double> coeffs) : c_(std::move(coeffs)) {
  if (c_.empty()) throw std::invalid_argument("ToeplitzSeq: empty sequence");
  for (double v : c_)
    if (!std::isfinite(v)) throw std::invalid_argument("ToeplitzSeq: non-finite coefficient");
}

ToeplitzSeq optimal_coeffs(std::size_t n) {
  if (n == 0) throw std::invalid_argument("optimal_coeffs: n must be >= 1");
  std::vector<double> f(n);
  f[0] = 1.0;
  for (std::size_t k = 1; k < n; ++k) f[k] = f[k - 1] * (1.0 - 1.0 / (2.0 * double(k)));
  return ToeplitzSeq(std::move(f));
}

ToeplitzSeq cauchy_product(const ToeplitzSeq& a, const ToeplitzSeq& b) {
  if (a.n() != b.n()) throw std::invalid_argument("cauchy_product: length mismatch");
  const std::size_t n = a.n();
  std::vector<double> h(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i <= k; ++i) s += a[i] * b[k - i];
    h[k] = s;
  }
  return ToeplitzSeq(std::move(h));
}

ToeplitzSeq series_reciprocal(const ToeplitzSeq& a) {
  if (a[0] == 0.0) throw std::invalid_argument("series_reciprocal: zero constant term");
  const std::size_t n = a.n();
  std::vector<double> r(n, 0.0);
  r[0] = 1.0 / a[0];
  for (std::size_t k = 1; k < n; ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j <= k; ++j) s += a[j] * r[k - j];
    r[k] = -s / a[0];
  }
  return ToeplitzSeq(std::move(r));
}

ToeplitzSeq prefix_sums(const ToeplitzSeq& a) {
  std::vector<double> t(a.n());
  double s = 0.0;
  for (std::size_t k = 0; k < a.n(); ++k) t[k] = (s += a[k]);
  return ToeplitzSeq(std::move(t));
}

Matrix ltt_apply_dense(const ToeplitzSeq& a, const Matrix& Z) {
  const std::size_t n = a.n();
  if (std::size_t(Z.rows()) != n)
    throw std::invalid_argument("ltt_apply_dense: Z has " + std::to_string(Z.rows()) +
                                " rows, expected " + std::to_string(n));
  if (n > kDenseCap) throw std::invalid_argument("ltt_apply_dense: n above dense cap");
  Matrix out = Matrix::Zero(Z.rows(), Z.cols());
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j <= k; ++j) out.row(k) += a[k - j] * Z.row(j);
  return out;
}

Matrix ltt_matrix(const ToeplitzSeq& a) {
  const std::size_t n = a.n();
  if (n > kDenseCap) throw std::invalid_argument("ltt_matrix: n above dense cap");
  Matrix M = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) M(i, j) = a[i - j];
  return M;
}

Matrix all_ones_lower(std::size_t n) {
  Matrix A = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) A(i, j) = 1.0;
  return A;
}

double col_norm_max(const Matrix& M) { return M.colwise().norm().maxCoeff(); }
double row_norm_max(const Matrix& M) { return M.rowwise().norm().maxCoeff(); }

}  // namespace blt
