#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>

#include "blt/params.hpp"

namespace blt {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// d x m buffer plus step counter for streaming multiplication by LTT(r).
class StreamState {
 public:
  StreamState(MatrixPowerForm form, std::size_t m);

  // S <- v z + W S, then out = t z + u^T S.
  void step(const double* z, double* out);
  Vector step(const Vector& z);

  std::uint64_t k() const { return k_; }
  std::size_t m() const { return m_; }
  std::size_t dim() const { return form_.dim(); }
  const RowMatrix& buffer() const { return S_; }
  std::size_t state_bytes() const { return std::size_t(S_.size()) * sizeof(double); }

 private:
  MatrixPowerForm form_;
  std::size_t m_;
  bool diag_;
  RowMatrix S_;
  RowMatrix scratch_;
  std::uint64_t k_ = 0;
};

StreamState stream_init(const MatrixPowerForm& form, std::size_t m);
Vector stream_step(StreamState& st, const Vector& z_row);

// Runs every row of Z through a fresh stream. Convenience for tests and verify.
Matrix stream_apply(const MatrixPowerForm& form, const Matrix& Z);

enum class NoiseMode { PerStep, Prefix };

struct NoiseStreamConfig {
  BltFactorization factorization;
  std::uint64_t n = 1;
  std::size_t m = 1;
  std::uint64_t seed = 0;
  double zeta = 1.0;
  NoiseMode mode = NoiseMode::PerStep;
};

inline const std::string kRngName = "mt19937_64/normal_distribution(libstdc++)";

// Seeded i.i.d. N(0, sigma^2) rows, drawn row-major.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : eng_(seed) {}
  void fill(double* out, std::size_t m, double sigma);

 private:
  std::mt19937_64 eng_;
  std::normal_distribution<double> dist_{0.0, 1.0};
};

// sigma = zeta * ||C||_{1->2} at n steps.
double noise_sigma(const BltFactorization& f, std::uint64_t n, double zeta);

// Per-step rows are LTT(r) z = C^{-1} z; prefix rows are their running sums = B z.
class NoiseStream {
 public:
  explicit NoiseStream(const NoiseStreamConfig& cfg);

  bool next(double* out);
  double sigma() const { return sigma_; }
  std::uint64_t emitted() const { return emitted_; }
  // Live buffer memory: d*m for per-step, (d+1)*m for prefix.
  std::size_t state_bytes() const;

 private:
  NoiseStreamConfig cfg_;
  double sigma_;
  GaussianSource src_;
  StreamState st_;
  std::vector<double> z_;
  std::vector<double> running_;
  std::uint64_t emitted_ = 0;
};

using RowSink = std::function<void(std::uint64_t k, const double* row)>;

// Streams all n rows into sink. With threads > 1 the columns are split into
// shards, each with its own buffer; output is identical to the serial stream.
void generate_noise(const NoiseStreamConfig& cfg, const RowSink& sink, unsigned threads = 1);

}  // namespace blt
