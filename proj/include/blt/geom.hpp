#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace blt {

// Running geometric sums for a pair of ratios (a, b) over a block of `len`
// consecutive indices k = 0..len-1:
//   A = a^len, B = b^len
//   ga = sum a^k, gb = sum b^k, gab = sum (ab)^k
//   sx = sum gamma_k(a), sy = sum gamma_k(b), sxy = sum gamma_k(a) gamma_k(b)
//   sxb = sum gamma_k(a) b^k
// where gamma_k(a) = 1 + a + ... + a^(k-1). Blocks concatenate associatively and
// every update only adds products of nonnegative terms when a, b are in [0, 1],
// so there is no cancellation near a = 1. Doubling gives O(log n).
template <class T>
struct GeoPair {
  double len = 0.0;
  T A, B, ga, gb, gab, sx, sy, sxy, sxb;
};

template <class T>
GeoPair<T> geo_identity() {
  GeoPair<T> g;
  g.len = 0.0;
  g.A = T(1.0);
  g.B = T(1.0);
  g.ga = g.gb = g.gab = g.sx = g.sy = g.sxy = g.sxb = T(0.0);
  return g;
}

template <class T>
GeoPair<T> geo_unit(const T& a, const T& b) {
  GeoPair<T> g;
  g.len = 1.0;
  g.A = a;
  g.B = b;
  g.ga = g.gb = g.gab = T(1.0);
  g.sx = g.sy = g.sxy = g.sxb = T(0.0);
  return g;
}

// x followed by y.
template <class T>
GeoPair<T> geo_concat(const GeoPair<T>& x, const GeoPair<T>& y) {
  GeoPair<T> z;
  const double L2 = y.len;
  z.len = x.len + y.len;
  z.A = x.A * y.A;
  z.B = x.B * y.B;
  z.ga = x.ga + x.A * y.ga;
  z.gb = x.gb + x.B * y.gb;
  z.gab = x.gab + (x.A * x.B) * y.gab;
  z.sx = x.sx + L2 * x.ga + x.A * y.sx;
  z.sy = x.sy + L2 * x.gb + x.B * y.sy;
  z.sxy = x.sxy + L2 * (x.ga * x.gb) + (x.ga * x.B) * y.sy + (x.A * x.gb) * y.sx +
          (x.A * x.B) * y.sxy;
  z.sxb = x.sxb + (x.ga * x.B) * y.gb + (x.A * x.B) * y.sxb;
  return z;
}

template <class T>
GeoPair<T> geo_run(const T& a, const T& b, std::uint64_t n) {
  using std::pow;
  GeoPair<T> acc = geo_identity<T>();
  GeoPair<T> p = geo_unit(a, b);
  while (n) {
    if (n & 1u) acc = geo_concat(acc, p);
    n >>= 1;
    if (n) {
      p = geo_concat(p, p);
      // direct powers keep a^len accurate to a few ulps instead of len ulps
      p.A = pow(a, p.len);
      p.B = pow(b, p.len);
    }
  }
  return acc;
}

// sens^2 = 1 + sum_{j,k} wh_j wh_k gamma_{n-1}(thh_j thh_k)
template <class T>
T sensitivity2_generic(const T* omega_hat, const T* theta_hat, int d, std::uint64_t n) {
  T s = T(1.0);
  if (n <= 1) return s;
  for (int j = 0; j < d; ++j)
    for (int k = j; k < d; ++k) {
      const GeoPair<T> g = geo_run(theta_hat[j], theta_hat[k], n - 1);
      const T term = omega_hat[j] * omega_hat[k] * g.gab;
      s = s + (j == k ? term : T(2.0) * term);
    }
  return s;
}

inline double scalar_value(double x) { return x; }
template <class T>
double scalar_value(const T& x) {
  return x.a;
}

// rownorm^2 = sum_{i<n} t_i^2 with t_i = 1 + sum_j w_j gamma_i(th_j).
// Poles with (1 - th_j) n >= 1 ("fast") are rewritten through
// gamma_i(th) = (1 - th^i)/(1 - th), so t_i = alpha + sum_S w_j gamma_i(th_j) + sum_F beta_j th_j^i
// with alpha = 1 + sum_F w_j/(1-th_j), beta_j = -w_j/(1-th_j). Expanding the
// square in this basis keeps every term near the size of the result; the plain
// gamma expansion loses about (delta n)^2 relative digits on fast poles.
template <class T>
T rownorm2_generic(const T* omega, const T* theta, int d, std::uint64_t n) {
  const double nd = double(n);
  std::vector<char> fast(d);
  std::vector<T> beta(d);
  T alpha = T(1.0);
  for (int j = 0; j < d; ++j) {
    fast[j] = (1.0 - scalar_value(theta[j])) * nd >= 1.0;
    if (fast[j]) {
      const T delta = T(1.0) - theta[j];
      beta[j] = -omega[j] / delta;
      alpha = alpha + omega[j] / delta;
    }
  }
  T s = alpha * alpha * nd;
  for (int j = 0; j < d; ++j)
    for (int k = j; k < d; ++k) {
      // slow pole first so sxb pairs gamma(slow) with powers of the fast one
      const bool swap = fast[j] && !fast[k];
      const int a = swap ? k : j, b = swap ? j : k;
      const GeoPair<T> g = geo_run(theta[a], theta[b], n);
      if (j == k) {
        if (fast[j])
          s = s + T(2.0) * alpha * beta[j] * g.ga + beta[j] * beta[j] * g.gab;
        else
          s = s + T(2.0) * alpha * omega[j] * g.sx + omega[j] * omega[j] * g.sxy;
      } else if (!fast[a] && !fast[b]) {
        s = s + T(2.0) * omega[a] * omega[b] * g.sxy;
      } else if (!fast[a]) {
        s = s + T(2.0) * omega[a] * beta[b] * g.sxb;
      } else {
        s = s + T(2.0) * beta[a] * beta[b] * g.gab;
      }
    }
  return s;
}

}  // namespace blt
