#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "blt/params.hpp"

namespace blt {

inline constexpr int kMaxOptDegree = 16;

struct OptConfig {
  int degree = 4;
  std::uint64_t n = 10000;
  int max_iters = 500;
  double grad_tol = 1e-9;
  double barrier_weight = 1e-7;
  // Empty means the geometric ladder.
  std::vector<double> init_theta;
  std::vector<double> init_theta_hat;
  double collision_eps = 1e-9;
  // Jitters the starting point in logit space when set.
  std::optional<std::uint64_t> seed;
};

struct OptResult {
  BltFactorization factorization;
  double initial_loss = 0.0;
  double final_loss = 0.0;
  double final_max_err = 0.0;
  int iterations = 0;
  bool converged = false;
};

// theta_i = 1 - c rho^i, theta_hat_i = 1 - c rho^(i + 1/2), c = 1/sqrt(n), rho = 1/4.
std::pair<std::vector<double>, std::vector<double>> geometric_ladder(int d, std::uint64_t n);

// MaxErr + w * sum(-log theta_i - log omega_hat_i). +inf outside the valid region.
double loss(const std::vector<double>& theta, const std::vector<double>& theta_hat,
            std::uint64_t n, double barrier_weight);

// d loss / d(theta, theta_hat), 2d entries. Throws std::domain_error outside the valid region.
std::vector<double> gradient(const std::vector<double>& theta,
                             const std::vector<double>& theta_hat, std::uint64_t n,
                             double barrier_weight);

OptResult optimize_blt(const OptConfig& cfg);

}  // namespace blt
