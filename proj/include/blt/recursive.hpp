#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "blt/params.hpp"

namespace blt {

inline constexpr std::size_t kRecursiveDenseCap = std::size_t{1} << 12;

// [I (x) B2 | (S B1) (x) 1], S the down-shift.
Matrix comb_dense(const Matrix& B1, const Matrix& B2);
// [I (x) C2 ; C1 (x) 1^T]
Matrix comc_dense(const Matrix& C1, const Matrix& C2);

// B_l = comb(B1, B_{l-1}), C_l = comc(C1, C_{l-1}).
std::pair<Matrix, Matrix> recursive_dense(const Matrix& B1, const Matrix& C1, int levels);

// (sqrt(l) base_sens, sqrt(l) base_rownorm); the second is an upper bound.
std::pair<double, double> recursive_norms(double base_sens, double base_rownorm, int levels);

// n_l = n1^l and n'_l = n1 (n1^l - 1)/(n1 - 1) for a square base.
std::uint64_t recursive_rows(std::uint64_t n1, int levels);
std::uint64_t recursive_cols(std::uint64_t n1, int levels);

// Row `row` of B_l built from a square lower-triangular base B1, without
// materializing B_l. Length n'_l.
std::vector<double> recursive_b_row(const Matrix& B1, int levels, std::uint64_t row);

// One consumer of noise rows producing B1 Z one row at a time.
class BaseStreamer {
 public:
  virtual ~BaseStreamer() = default;
  virtual void next(const double* z, double* out) = 0;
  virtual std::size_t state_bytes() const = 0;
};

struct BaseSpec {
  std::size_t n1 = 0;
  std::function<std::unique_ptr<BaseStreamer>(std::size_t m)> make;
};

// Prefix-sum streamer for B = LTT(r/(1-x)) of a BLT, n1 steps.
BaseSpec blt_base(const BltFactorization& f, std::size_t n1);
// Causal dense lower-triangular base, for tests. Keeps the whole history.
BaseSpec dense_base(const Matrix& B1);

// Fills out[0..m) with row `index` of the global noise matrix Z.
using NoiseSource = std::function<void(std::uint64_t index, double* out)>;

// Streaming B_l Z. Copy I (the base streamer) reads rows o + n1 n'_{l-1} + i
// when z'_{i+1} is needed, after block i; copy II instance i reads its rows
// starting at o + i n'_{l-1} as it streams.
class RecursiveStreamer {
 public:
  RecursiveStreamer(BaseSpec base, int levels, std::size_t m, NoiseSource noise);
  ~RecursiveStreamer();

  bool next(double* out);
  std::uint64_t n() const { return n_; }
  std::uint64_t emitted() const { return emitted_; }
  // Live base-streamer state plus carry vectors across all active levels.
  std::size_t state_bytes() const;

 private:
  struct Node;
  std::unique_ptr<Node> make_node(int level, std::uint64_t offset) const;
  void node_next(Node& nd, double* out);
  std::size_t node_bytes(const Node& nd) const;

  BaseSpec base_;
  int levels_;
  std::size_t m_;
  NoiseSource noise_;
  std::uint64_t n_;
  std::uint64_t emitted_ = 0;
  std::unique_ptr<Node> root_;
};

// Parameters for polylog(n) state: base length n1 = max(5, ceil ln n), levels with
// n1^levels >= n, and the base degree that keeps the excess error O(1).
struct PolylogParams {
  std::uint64_t n1 = 0;
  int degree = 0;
  int levels = 0;
};
PolylogParams polylog_params(std::uint64_t n);

// Binary tree factorization for n = 2^levels (dense, test scale).
std::pair<Matrix, Matrix> bintree_dense(int levels);

}  // namespace blt
