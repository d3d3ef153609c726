#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "threadsplit/error.hpp"
#include "threadsplit/jet.hpp"

namespace threadsplit {

template <std::size_t N>
using JetVec = std::array<Jet, N>;
template <std::size_t N>
using JetMat = std::array<std::array<Jet, N>, N>;

template <std::size_t N>
using RealMat = std::array<std::array<double, N>, N>;

template <std::size_t N>
RealMat<N> values(const JetMat<N>& m) {
  RealMat<N> v{};
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) v[i][j] = m[i][j].value();
  return v;
}

// Gauss-Jordan with partial pivoting. Returns false when a pivot falls below
// `tiny` relative to the matrix scale.
template <std::size_t N>
bool invert_values(RealMat<N> a, RealMat<N>& inv, double tiny = 1e-14) {
  double scale = 0.0;
  for (const auto& row : a)
    for (double x : row) scale = std::fmax(scale, std::fabs(x));
  if (scale == 0.0) return false;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) inv[i][j] = i == j ? 1.0 : 0.0;
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < N; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    }
    if (std::fabs(a[pivot][col]) <= tiny * scale) return false;
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);
    const double p = a[col][col];
    for (std::size_t j = 0; j < N; ++j) {
      a[col][j] /= p;
      inv[col][j] /= p;
    }
    for (std::size_t r = 0; r < N; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < N; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return true;
}

template <std::size_t N>
JetMat<N> multiply(const JetMat<N>& a, const JetMat<N>& b) {
  JetMat<N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      Jet acc = a[i][0] * b[0][j];
      for (std::size_t k = 1; k < N; ++k) acc += a[i][k] * b[k][j];
      r[i][j] = acc;
    }
  return r;
}

// Jet-valued inverse: exact inverse of the base-point values, then Newton
// steps X <- X (2I - M X). Each step doubles the number of correct orders,
// which realizes d(M^-1) = -M^-1 (dM) M^-1 to every order up to 3.
template <std::size_t N>
JetMat<N> invert(const JetMat<N>& m, ErrorKind on_singular) {
  RealMat<N> inv0{};
  if (!invert_values<N>(values(m), inv0)) {
    throw Error(on_singular, "matrix is singular at the point");
  }
  int order = kMaxOrder;
  for (const auto& row : m)
    for (const auto& x : row) order = std::min(order, x.order());
  JetMat<N> x;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) x[i][j] = Jet::constant(inv0[i][j], order);
  for (int correct = 0; correct < order; correct = 2 * correct + 1) {
    JetMat<N> mx = multiply(m, x);
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) mx[i][j] = (i == j ? 2.0 : 0.0) - mx[i][j];
    x = multiply(x, mx);
  }
  return x;
}

}  // namespace threadsplit
