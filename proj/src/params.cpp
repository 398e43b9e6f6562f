#include "blt/params.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace blt {

double RationalBlt::t() const {
  double s = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) s += omega[i] / theta[i];
  return 1.0 - s;
}

bool MatrixPowerForm::is_diagonal() const {
  for (Eigen::Index i = 0; i < W.rows(); ++i)
    for (Eigen::Index j = 0; j < W.cols(); ++j)
      if (i != j && W(i, j) != 0.0) return false;
  return true;
}

ToeplitzSeq MatrixPowerForm::coeffs(std::size_t n) const {
  if (n == 0) throw std::invalid_argument("coeffs: n must be >= 1");
  std::vector<double> r(n);
  Vector x = v;
  for (std::size_t k = 0; k < n; ++k) {
    r[k] = (dim() ? u.dot(x) : 0.0) + (k == 0 ? t : 0.0);
    if (dim()) x = W * x;
  }
  return ToeplitzSeq(std::move(r));
}

static void check_roots(const std::vector<double>& v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) throw std::invalid_argument(std::string(what) + ": non-finite root");
    if (v[i] == 0.0) throw std::invalid_argument(std::string(what) + ": zero root");
    for (std::size_t j = 0; j < i; ++j)
      if (v[i] == v[j]) throw std::invalid_argument(std::string(what) + ": repeated root");
  }
}

std::pair<std::vector<double>, std::vector<double>> residues_from_roots(
    const std::vector<double>& theta, const std::vector<double>& theta_hat) {
  if (theta.size() != theta_hat.size())
    throw std::invalid_argument("residues_from_roots: theta and theta_hat differ in length");
  check_roots(theta, "theta");
  check_roots(theta_hat, "theta_hat");
  const int d = int(theta.size());
  std::vector<double> w(d), wh(d);
  residues_generic(theta.data(), theta_hat.data(), d, w.data());
  residues_generic(theta_hat.data(), theta.data(), d, wh.data());
  return {w, wh};
}

ToeplitzSeq blt_coeffs(const RationalBlt& r, std::size_t n) {
  if (n == 0) throw std::invalid_argument("blt_coeffs: n must be >= 1");
  const std::size_t d = r.degree();
  std::vector<double> c(n, 0.0);
  c[0] = 1.0;
  std::vector<double> pw(r.omega.begin(), r.omega.end());  // omega_j theta_j^(k-1)
  for (std::size_t k = 1; k < n; ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      s += pw[j];
      pw[j] *= r.theta[j];
    }
    c[k] = s;
  }
  return ToeplitzSeq(std::move(c));
}

ToeplitzSeq blt_inverse_coeffs(const RationalBlt& r, std::size_t n) {
  if (n == 0) throw std::invalid_argument("blt_inverse_coeffs: n must be >= 1");
  const std::size_t d = r.degree();
  std::vector<double> y(n, 0.0), S(d, 0.0);
  y[0] = 1.0;
  for (std::size_t k = 1; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      S[j] = r.theta[j] * S[j] + y[k - 1];
      acc += r.omega[j] * S[j];
    }
    y[k] = -acc;
  }
  return ToeplitzSeq(std::move(y));
}

MatrixPowerForm diagonal_form(const RationalBlt& r) {
  const Eigen::Index d = Eigen::Index(r.degree());
  MatrixPowerForm f;
  f.u = Vector::Ones(d);
  f.W = Matrix::Zero(d, d);
  f.v = Vector(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (r.theta[i] == 0.0) throw std::invalid_argument("diagonal_form: zero theta");
    f.W(i, i) = r.theta[i];
    f.v(i) = r.omega[i] / r.theta[i];
  }
  f.t = r.t();
  return f;
}

MatrixPowerForm companion_form(const std::vector<double>& p_in, const std::vector<double>& q_in) {
  if (q_in.empty() || std::abs(q_in[0] - 1.0) > 1e-15)
    throw std::invalid_argument("companion_form: q_0 must be 1");
  std::vector<double> q = q_in, p = p_in;
  while (q.size() > 1 && q.back() == 0.0) q.pop_back();
  while (p.size() > 1 && p.back() == 0.0) p.pop_back();
  if (p.empty()) p = {0.0};
  const std::size_t d = q.size() - 1;
  if (p.size() > d + 1) throw std::invalid_argument("companion_form: deg(p) > deg(q)");
  MatrixPowerForm f;
  if (p.size() == d + 1) {
    f.t = p[d] / q[d];
    for (std::size_t i = 0; i <= d; ++i) p[i] -= f.t * q[i];
    p[d] = 0.0;
  }
  p.resize(d + 1, 0.0);
  const Eigen::Index D = Eigen::Index(d);
  f.u = Vector::Zero(D);
  f.W = Matrix::Zero(D, D);
  f.v = Vector(D);
  if (D > 0) f.u(0) = 1.0;
  for (Eigen::Index i = 0; i < D; ++i) {
    f.W(i, 0) = -q[i + 1];
    if (i + 1 < D) f.W(i, i + 1) = 1.0;
    f.v(i) = p[i];
  }
  return f;
}

MatrixPowerForm reciprocal_matrix_form(const MatrixPowerForm& f, int beta) {
  if (beta != 0 && beta != 1) throw std::invalid_argument("reciprocal_matrix_form: beta must be 0 or 1");
  Vector u = f.u, v = f.v;
  Matrix W = f.W;
  if (f.t != 0.0) {
    const Eigen::Index d = Eigen::Index(f.dim());
    u.conservativeResize(d + 1);
    v.conservativeResize(d + 1);
    W.conservativeResize(d + 1, d + 1);
    W.row(d).setZero();
    W.col(d).setZero();
    u(d) = 1.0;
    v(d) = f.t;
  }
  const double r0 = u.dot(v);
  if (r0 == 0.0) throw std::invalid_argument("reciprocal_matrix_form: <u,v> = 0");
  v /= r0;
  const Eigen::Index d = u.size();
  MatrixPowerForm g;
  g.W = Matrix::Zero(d + 1, d + 1);
  g.W(0, 0) = double(beta);
  g.W.block(1, 0, d, 1) = v;
  g.W.block(1, 1, d, d) = W - v * (u.transpose() * W);
  g.u = Vector(d + 1);
  g.u(0) = 1.0;
  g.u.tail(d) = -(W.transpose() * u);
  g.u /= r0;
  g.v = Vector::Zero(d + 1);
  g.v(0) = 1.0;
  g.t = 0.0;
  return g;
}

Degree1Params degree1_closed_form(std::uint64_t n) {
  if (n < 2) throw std::invalid_argument("degree1_closed_form: n must be >= 2");
  const double c = std::cbrt(double(n));
  Degree1Params p;
  p.lambda = 1.0 - 1.0 / (c * c);
  p.a2 = (1.0 / c) * (1.0 - 1.0 / c);
  p.c = {{p.lambda}, {p.a2}};
  p.c_inv = {{p.lambda - p.a2}, {-p.a2}};
  p.sens2_bound = 1.0 + p.a2 * p.a2 / (1.0 - p.lambda * p.lambda);
  return p;
}

BltFactorization make_factorization(const std::vector<double>& theta,
                                    const std::vector<double>& theta_hat, std::uint64_t n,
                                    const std::string& method) {
  BltFactorization f;
  f.theta = theta;
  f.theta_hat = theta_hat;
  auto [w, wh] = residues_from_roots(theta, theta_hat);
  f.omega = std::move(w);
  f.omega_hat = std::move(wh);
  f.n = n;
  f.method = method;
  return f;
}

BltFactorization degree1_factorization(std::uint64_t n) {
  const Degree1Params p = degree1_closed_form(n);
  BltFactorization f;
  f.theta = {p.lambda - p.a2};
  f.theta_hat = {p.lambda};
  f.omega = {-p.a2};
  f.omega_hat = {p.a2};
  f.n = n;
  f.method = "degree1";
  return f;
}

BltFactorization identity_factorization(std::uint64_t n) {
  BltFactorization f;
  f.n = n;
  f.method = "identity";
  return f;
}

ToeplitzSeq c_coeffs(const BltFactorization& f, std::size_t n) {
  if (f.c_closed) return blt_coeffs(f.s(), n);
  return blt_inverse_coeffs(f.r(), n);
}

ToeplitzSeq b_coeffs(const BltFactorization& f, std::size_t n) {
  return prefix_sums(blt_coeffs(f.r(), n));
}

void separate_roots(std::vector<double>& v, double eps) {
  bool moved = true;
  for (int pass = 0; moved && pass < 1000; ++pass) {
    moved = false;
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (std::abs(v[i] - v[j]) < eps) {
          v[i] -= eps;
          moved = true;
        }
  }
}

}  // namespace blt
