#include "blt/recursive.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "blt/streaming.hpp"

namespace blt {

Matrix comb_dense(const Matrix& B1, const Matrix& B2) {
  const Eigen::Index n1 = B1.rows(), n1p = B1.cols(), n2 = B2.rows(), n2p = B2.cols();
  if (std::size_t(n1 * n2) > kRecursiveDenseCap)
    throw std::length_error("comb_dense: result exceeds the dense test cap");
  Matrix B = Matrix::Zero(n1 * n2, n1 * n2p + n1p);
  for (Eigen::Index i = 0; i < n1; ++i) {
    B.block(i * n2, i * n2p, n2, n2p) = B2;
    if (i > 0) B.block(i * n2, n1 * n2p, n2, n1p).rowwise() = B1.row(i - 1);
  }
  return B;
}

Matrix comc_dense(const Matrix& C1, const Matrix& C2) {
  const Eigen::Index n1p = C1.rows(), n1 = C1.cols(), n2p = C2.rows(), n2 = C2.cols();
  if (std::size_t(n1 * n2) > kRecursiveDenseCap)
    throw std::length_error("comc_dense: result exceeds the dense test cap");
  Matrix C = Matrix::Zero(n1 * n2p + n1p, n1 * n2);
  for (Eigen::Index i = 0; i < n1; ++i) {
    C.block(i * n2p, i * n2, n2p, n2) = C2;
    C.block(n1 * n2p, i * n2, n1p, n2).colwise() = C1.col(i);
  }
  return C;
}

std::pair<Matrix, Matrix> recursive_dense(const Matrix& B1, const Matrix& C1, int levels) {
  if (levels < 1) throw std::invalid_argument("recursive_dense: levels must be >= 1");
  Matrix B = B1, C = C1;
  for (int l = 2; l <= levels; ++l) {
    B = comb_dense(B1, B);
    C = comc_dense(C1, C);
  }
  return {B, C};
}

std::pair<double, double> recursive_norms(double base_sens, double base_rownorm, int levels) {
  if (levels < 1) throw std::invalid_argument("recursive_norms: levels must be >= 1");
  const double s = std::sqrt(double(levels));
  return {s * base_sens, s * base_rownorm};
}

std::uint64_t recursive_rows(std::uint64_t n1, int levels) {
  std::uint64_t r = 1;
  for (int l = 0; l < levels; ++l) r *= n1;
  return r;
}

std::uint64_t recursive_cols(std::uint64_t n1, int levels) {
  // n'_l = n1 n'_{l-1} + n1
  std::uint64_t c = 0;
  for (int l = 0; l < levels; ++l) c = n1 * c + n1;
  return c;
}

std::vector<double> recursive_b_row(const Matrix& B1, int levels, std::uint64_t row) {
  if (levels < 1) throw std::invalid_argument("recursive_b_row: levels must be >= 1");
  const std::uint64_t n1 = std::uint64_t(B1.rows());
  if (B1.cols() != B1.rows()) throw std::invalid_argument("recursive_b_row: base must be square");
  if (row >= recursive_rows(n1, levels)) throw std::out_of_range("recursive_b_row: row");
  std::vector<double> out(recursive_cols(n1, levels), 0.0);
  std::uint64_t off = 0;
  for (int l = levels; l >= 2; --l) {
    const std::uint64_t nr = recursive_rows(n1, l - 1), nc = recursive_cols(n1, l - 1);
    const std::uint64_t i = row / nr;
    row %= nr;
    if (i > 0)
      for (std::uint64_t c = 0; c < n1; ++c)
        out[off + n1 * nc + c] = B1(Eigen::Index(i - 1), Eigen::Index(c));
    off += i * nc;
  }
  for (std::uint64_t c = 0; c < n1; ++c) out[off + c] = B1(Eigen::Index(row), Eigen::Index(c));
  return out;
}

namespace {

class BltBase final : public BaseStreamer {
 public:
  BltBase(const MatrixPowerForm& form, std::size_t m) : st_(form, m), running_(m, 0.0) {}
  void next(const double* z, double* out) override {
    st_.step(z, out);
    for (std::size_t c = 0; c < running_.size(); ++c) out[c] = (running_[c] += out[c]);
  }
  std::size_t state_bytes() const override {
    return st_.state_bytes() + running_.size() * sizeof(double);
  }

 private:
  StreamState st_;
  std::vector<double> running_;
};

class DenseBase final : public BaseStreamer {
 public:
  DenseBase(const Matrix& B, std::size_t m) : B_(B), m_(m) {}
  void next(const double* z, double* out) override {
    const Eigen::Index k = Eigen::Index(hist_.size() / m_);
    if (k >= B_.rows()) throw std::out_of_range("dense base: stream exhausted");
    hist_.insert(hist_.end(), z, z + m_);
    for (std::size_t c = 0; c < m_; ++c) {
      double s = 0.0;
      for (Eigen::Index i = 0; i <= k; ++i) s += B_(k, i) * hist_[std::size_t(i) * m_ + c];
      out[c] = s;
    }
  }
  std::size_t state_bytes() const override { return hist_.size() * sizeof(double); }

 private:
  Matrix B_;
  std::size_t m_;
  std::vector<double> hist_;
};

}  // namespace

BaseSpec blt_base(const BltFactorization& f, std::size_t n1) {
  if (n1 < 2) throw std::invalid_argument("blt_base: n1 must be >= 2");
  const MatrixPowerForm form = diagonal_form(f.r());
  return {n1, [form](std::size_t m) { return std::make_unique<BltBase>(form, m); }};
}

BaseSpec dense_base(const Matrix& B1) {
  if (B1.rows() != B1.cols() || B1.rows() < 2)
    throw std::invalid_argument("dense_base: base must be square with n1 >= 2");
  for (Eigen::Index i = 0; i < B1.rows(); ++i)
    for (Eigen::Index j = i + 1; j < B1.cols(); ++j)
      if (B1(i, j) != 0.0) throw std::invalid_argument("dense_base: base must be lower triangular");
  return {std::size_t(B1.rows()),
          [B1](std::size_t m) { return std::make_unique<DenseBase>(B1, m); }};
}

struct RecursiveStreamer::Node {
  int level = 1;
  std::uint64_t offset = 0;
  std::unique_ptr<BaseStreamer> base;  // level 1: the streamer; otherwise copy I
  std::unique_ptr<Node> child;         // current copy II instance
  std::uint64_t block = 0;
  std::uint64_t j = 0;
  std::vector<double> zprime;
  std::vector<double> zbuf;
};

RecursiveStreamer::RecursiveStreamer(BaseSpec base, int levels, std::size_t m, NoiseSource noise)
    : base_(std::move(base)), levels_(levels), m_(m), noise_(std::move(noise)) {
  if (levels_ < 1) throw std::invalid_argument("recursive_stream: levels must be >= 1");
  if (m_ == 0) throw std::invalid_argument("recursive_stream: m must be >= 1");
  if (base_.n1 < 2 || !base_.make) throw std::invalid_argument("recursive_stream: bad base");
  if (!noise_) throw std::invalid_argument("recursive_stream: missing noise source");
  n_ = recursive_rows(base_.n1, levels_);
  root_ = make_node(levels_, 0);
}

RecursiveStreamer::~RecursiveStreamer() = default;

std::unique_ptr<RecursiveStreamer::Node> RecursiveStreamer::make_node(int level,
                                                                      std::uint64_t offset) const {
  auto nd = std::make_unique<Node>();
  nd->level = level;
  nd->offset = offset;
  nd->base = base_.make(m_);
  nd->zbuf.assign(m_, 0.0);
  if (level > 1) nd->zprime.assign(m_, 0.0);
  return nd;
}

void RecursiveStreamer::node_next(Node& nd, double* out) {
  if (nd.level == 1) {
    noise_(nd.offset + nd.j, nd.zbuf.data());
    nd.base->next(nd.zbuf.data(), out);
    ++nd.j;
    return;
  }
  const std::uint64_t nr = recursive_rows(base_.n1, nd.level - 1);
  const std::uint64_t nc = recursive_cols(base_.n1, nd.level - 1);
  if (!nd.child) nd.child = make_node(nd.level - 1, nd.offset + nd.block * nc);
  node_next(*nd.child, out);
  for (std::size_t c = 0; c < m_; ++c) out[c] += nd.zprime[c];
  if (++nd.j == nr) {
    nd.child.reset();
    noise_(nd.offset + base_.n1 * nc + nd.block, nd.zbuf.data());
    nd.base->next(nd.zbuf.data(), nd.zprime.data());
    ++nd.block;
    nd.j = 0;
  }
}

bool RecursiveStreamer::next(double* out) {
  if (emitted_ >= n_) return false;
  node_next(*root_, out);
  ++emitted_;
  return true;
}

std::size_t RecursiveStreamer::node_bytes(const Node& nd) const {
  std::size_t b = nd.base->state_bytes() + nd.zprime.size() * sizeof(double);
  if (nd.child) b += node_bytes(*nd.child);
  return b;
}

std::size_t RecursiveStreamer::state_bytes() const { return node_bytes(*root_); }

PolylogParams polylog_params(std::uint64_t n) {
  if (n < 25) throw std::invalid_argument("polylog_params: n must be >= 25");
  PolylogParams p;
  p.n1 = std::max<std::uint64_t>(5, std::uint64_t(std::ceil(std::log(double(n)))));
  std::uint64_t pw = 1;
  while (pw < n) {
    pw *= p.n1;
    ++p.levels;
  }
  const double a = (2.0 * std::log(16.0) + 3.0 * std::log(double(p.n1))) / std::numbers::pi;
  p.degree = int(std::ceil(2.0 + a * a));
  return p;
}

std::pair<Matrix, Matrix> bintree_dense(int levels) {
  if (levels < 0 || levels > 10) throw std::invalid_argument("bintree_dense: levels in [0, 10]");
  Matrix B = Matrix::Ones(1, 1), C = Matrix::Ones(1, 1);
  for (int l = 0; l < levels; ++l) {
    const Eigen::Index n = B.rows(), np = B.cols();
    Matrix B2 = Matrix::Zero(2 * n, 2 * np + 1);
    B2.block(0, 0, n, np) = B;
    B2.block(n, np, n, np) = B;
    B2.block(n, 2 * np, n, 1).setOnes();
    Matrix C2 = Matrix::Zero(2 * np + 1, 2 * n);
    C2.block(0, 0, np, n) = C;
    C2.block(np, n, np, n) = C;
    C2.block(2 * np, 0, 1, n).setOnes();
    B = std::move(B2);
    C = std::move(C2);
  }
  return {B, C};
}

}  // namespace blt
