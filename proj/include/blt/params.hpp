#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "blt/seq.hpp"

namespace blt {

// r(x) = 1 + x * sum_i omega_i / (1 - theta_i x), so r_0 = 1 and
// r_k = sum_j omega_j theta_j^(k-1) for k >= 1.
struct RationalBlt {
  std::vector<double> theta;
  std::vector<double> omega;

  std::size_t degree() const { return theta.size(); }
  // Additive constant of the diagonal matrix-power form.
  double t() const;
};

// r_k = u^T W^k v + t [k == 0].
struct MatrixPowerForm {
  Vector u;
  Matrix W;
  Vector v;
  double t = 0.0;

  std::size_t dim() const { return std::size_t(u.size()); }
  bool is_diagonal() const;
  ToeplitzSeq coeffs(std::size_t n) const;
};

// Matched pair of BLTs: B = LTT(r/(1-x)) and C = LTT(1/r) with
// r = prod(1 - theta_hat_i x) / prod(1 - theta_i x).
// theta are the B-side poles (roots of q), theta_hat the C-side poles (roots of p).
struct BltFactorization {
  std::vector<double> theta;
  std::vector<double> theta_hat;
  std::vector<double> omega;      // derived, B side
  std::vector<double> omega_hat;  // derived, C side; empty when c_closed is false
  std::uint64_t n = 0;            // target step count
  std::string method = "opt";
  // The C-side pole/residue form is available. RA factorizations leave it off
  // and sum the 1/r series directly.
  bool c_closed = true;
  // The construction's own generator is scale * r (r_0 = 1 after normalizing).
  double scale = 1.0;
  std::map<std::string, double> meta;

  std::size_t degree() const { return theta.size(); }
  RationalBlt r() const { return {theta, omega}; }
  RationalBlt s() const { return {theta_hat, omega_hat}; }
};

// omega_i = prod_j (theta_i - theta_hat_j) / prod_{j != i} (theta_i - theta_j).
// Generic over the scalar so the optimizer can push dual numbers through it.
template <class T>
void residues_generic(const T* theta, const T* theta_hat, int d, T* omega) {
  for (int i = 0; i < d; ++i) {
    T num = T(1.0);
    T den = T(1.0);
    for (int j = 0; j < d; ++j) {
      num = num * (theta[i] - theta_hat[j]);
      if (j != i) den = den * (theta[i] - theta[j]);
    }
    omega[i] = num / den;
  }
}

// Returns (omega, omega_hat). Rejects repeated or zero roots.
std::pair<std::vector<double>, std::vector<double>> residues_from_roots(
    const std::vector<double>& theta, const std::vector<double>& theta_hat);

ToeplitzSeq blt_coeffs(const RationalBlt& r, std::size_t n);

// Coefficients of 1/r by forward substitution against the d pole buffers, O(n d).
ToeplitzSeq blt_inverse_coeffs(const RationalBlt& r, std::size_t n);

// u = 1, W = diag(theta), v = omega / theta, t = 1 - sum omega/theta.
MatrixPowerForm diagonal_form(const RationalBlt& r);

// Companion (observer) form of p/q; a numerator of the same degree as q is
// split off as an additive constant first.
MatrixPowerForm companion_form(const std::vector<double>& p, const std::vector<double>& q);

// Generator of 1/r (beta = 0) or 1/(r (1-x)) (beta = 1), dimension grows by one.
MatrixPowerForm reciprocal_matrix_form(const MatrixPowerForm& f, int beta);

struct Degree1Params {
  double lambda = 0.0;
  double a2 = 0.0;
  RationalBlt c;      // c(x) = 1 + a2 x / (1 - lambda x)
  RationalBlt c_inv;  // 1 - a2 x / (1 - (lambda - a2) x)
  double sens2_bound = 0.0;  // 1 + a2^2 / (1 - lambda^2)
};
Degree1Params degree1_closed_form(std::uint64_t n);

BltFactorization make_factorization(const std::vector<double>& theta,
                                    const std::vector<double>& theta_hat, std::uint64_t n,
                                    const std::string& method);
BltFactorization degree1_factorization(std::uint64_t n);
// C = I, B = A.
BltFactorization identity_factorization(std::uint64_t n);

// Coefficients of the C generator 1/r and of the B generator r/(1-x).
ToeplitzSeq c_coeffs(const BltFactorization& f, std::size_t n);
ToeplitzSeq b_coeffs(const BltFactorization& f, std::size_t n);

// Perturbs later entries that sit within eps of an earlier one.
void separate_roots(std::vector<double>& v, double eps);

}  // namespace blt
