#include "blt/streaming.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

#include "blt/error_eval.hpp"

namespace blt {

StreamState::StreamState(MatrixPowerForm form, std::size_t m)
    : form_(std::move(form)), m_(m), diag_(form_.is_diagonal()) {
  if (m_ == 0) throw std::invalid_argument("stream_init: m must be >= 1");
  const Eigen::Index d = Eigen::Index(form_.dim());
  if (form_.W.rows() != d || form_.W.cols() != d || form_.v.size() != d)
    throw std::invalid_argument("stream_init: inconsistent matrix-power form");
  S_ = RowMatrix::Zero(d, Eigen::Index(m_));
  if (!diag_) scratch_ = RowMatrix::Zero(d, Eigen::Index(m_));
}

void StreamState::step(const double* z, double* out) {
  const std::size_t d = form_.dim();
  const std::size_t m = m_;
  const double t = form_.t;
  for (std::size_t c = 0; c < m; ++c) out[c] = t * z[c];
  if (diag_) {
    for (std::size_t i = 0; i < d; ++i) {
      double* s = S_.data() + i * m;
      const double w = form_.W(Eigen::Index(i), Eigen::Index(i));
      const double v = form_.v(Eigen::Index(i));
      const double u = form_.u(Eigen::Index(i));
      for (std::size_t c = 0; c < m; ++c) {
        s[c] = v * z[c] + w * s[c];
        out[c] += u * s[c];
      }
    }
  } else if (d > 0) {
    Eigen::Map<const Eigen::RowVectorXd> zr(z, Eigen::Index(m));
    scratch_.noalias() = form_.W * S_;
    scratch_.noalias() += form_.v * zr;
    S_.swap(scratch_);
    Eigen::Map<Eigen::RowVectorXd> o(out, Eigen::Index(m));
    o.noalias() += form_.u.transpose() * S_;
  }
  ++k_;
}

Vector StreamState::step(const Vector& z) {
  if (std::size_t(z.size()) != m_) throw std::invalid_argument("stream_step: row width mismatch");
  Vector out(z.size());
  step(z.data(), out.data());
  return out;
}

StreamState stream_init(const MatrixPowerForm& form, std::size_t m) { return StreamState(form, m); }

Vector stream_step(StreamState& st, const Vector& z_row) { return st.step(z_row); }

Matrix stream_apply(const MatrixPowerForm& form, const Matrix& Z) {
  StreamState st(form, std::size_t(Z.cols()));
  Matrix out(Z.rows(), Z.cols());
  Vector z(Z.cols());
  for (Eigen::Index k = 0; k < Z.rows(); ++k) {
    z = Z.row(k).transpose();
    out.row(k) = st.step(z).transpose();
  }
  return out;
}

void GaussianSource::fill(double* out, std::size_t m, double sigma) {
  for (std::size_t c = 0; c < m; ++c) out[c] = sigma * dist_(eng_);
}

double noise_sigma(const BltFactorization& f, std::uint64_t n, double zeta) {
  if (zeta < 0.0) throw std::invalid_argument("noise: zeta must be >= 0");
  if (zeta == 0.0) return 0.0;
  return zeta * max_err(f, n).sensitivity;
}

static void check_cfg(const NoiseStreamConfig& cfg) {
  if (cfg.n == 0) throw std::invalid_argument("noise: n must be >= 1");
  if (cfg.m == 0) throw std::invalid_argument("noise: m must be >= 1");
  if (!(cfg.zeta >= 0.0)) throw std::invalid_argument("noise: zeta must be >= 0");
}

NoiseStream::NoiseStream(const NoiseStreamConfig& cfg)
    : cfg_((check_cfg(cfg), cfg)),
      sigma_(noise_sigma(cfg.factorization, cfg.n, cfg.zeta)),
      src_(cfg.seed),
      st_(diagonal_form(cfg.factorization.r()), cfg.m),
      z_(cfg.m, 0.0) {
  if (cfg_.mode == NoiseMode::Prefix) running_.assign(cfg_.m, 0.0);
}

bool NoiseStream::next(double* out) {
  if (emitted_ >= cfg_.n) return false;
  if (sigma_ > 0.0) src_.fill(z_.data(), cfg_.m, sigma_);
  st_.step(z_.data(), out);
  if (cfg_.mode == NoiseMode::Prefix) {
    for (std::size_t c = 0; c < cfg_.m; ++c) out[c] = (running_[c] += out[c]);
  }
  ++emitted_;
  return true;
}

std::size_t NoiseStream::state_bytes() const {
  return st_.state_bytes() + running_.size() * sizeof(double);
}

void generate_noise(const NoiseStreamConfig& cfg, const RowSink& sink, unsigned threads) {
  check_cfg(cfg);
  const std::size_t m = cfg.m;
  threads = std::max(1u, std::min<unsigned>(threads, unsigned(m)));
  if (threads == 1) {
    NoiseStream ns(cfg);
    std::vector<double> row(m);
    for (std::uint64_t k = 0; ns.next(row.data()); ++k) sink(k, row.data());
    return;
  }

  const double sigma = noise_sigma(cfg.factorization, cfg.n, cfg.zeta);
  const MatrixPowerForm form = diagonal_form(cfg.factorization.r());
  const bool prefix = cfg.mode == NoiseMode::Prefix;
  struct Shard {
    std::size_t c0, width;
    StreamState st;
    std::vector<double> running;
  };
  std::vector<Shard> shards;
  for (unsigned p = 0; p < threads; ++p) {
    const std::size_t c0 = m * p / threads, c1 = m * (p + 1) / threads;
    shards.push_back({c0, c1 - c0, StreamState(form, c1 - c0),
                      std::vector<double>(prefix ? c1 - c0 : 0, 0.0)});
  }

  GaussianSource src(cfg.seed);
  constexpr std::uint64_t kBlock = 512;
  std::vector<double> zb(kBlock * m, 0.0), ob(kBlock * m, 0.0);
  for (std::uint64_t k0 = 0; k0 < cfg.n; k0 += kBlock) {
    const std::uint64_t rows = std::min<std::uint64_t>(kBlock, cfg.n - k0);
    if (sigma > 0.0)
      for (std::uint64_t i = 0; i < rows; ++i) src.fill(zb.data() + i * m, m, sigma);
    auto work = [&](Shard& sh) {
      std::vector<double> z(sh.width), o(sh.width);
      for (std::uint64_t i = 0; i < rows; ++i) {
        std::copy_n(zb.data() + i * m + sh.c0, sh.width, z.data());
        sh.st.step(z.data(), o.data());
        if (prefix)
          for (std::size_t c = 0; c < sh.width; ++c) o[c] = (sh.running[c] += o[c]);
        std::copy_n(o.data(), sh.width, ob.data() + i * m + sh.c0);
      }
    };
    std::vector<std::thread> pool;
    for (std::size_t p = 1; p < shards.size(); ++p) pool.emplace_back(work, std::ref(shards[p]));
    work(shards[0]);
    for (auto& th : pool) th.join();
    for (std::uint64_t i = 0; i < rows; ++i) sink(k0 + i, ob.data() + i * m);
  }
}

}  // namespace blt
