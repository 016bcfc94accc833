#pragma once

#include <array>
#include <algorithm>
#include <cstddef>

namespace asym {

// Largest supported manifold dimension. Tensors are stored in fixed-capacity
// arrays; entries with an index >= n are zero and never read.
inline constexpr int kMaxDim = 6;

using Vec = std::array<double, kMaxDim>;
using Mat = std::array<Vec, kMaxDim>;
using Tensor3 = std::array<Mat, kMaxDim>;
using Tensor4 = std::array<Tensor3, kMaxDim>;

inline Mat identity(int n) {
  Mat m{};
  for (int i = 0; i < n; ++i) m[i][i] = 1.0;
  return m;
}

inline double trace(const Mat& inv, const Mat& t, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += inv[i][j] * t[i][j];
  return s;
}

inline double contract(const Mat& t, const Vec& u, const Vec& v, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += t[i][j] * u[i] * v[j];
  return s;
}

inline Vec lower(const Mat& g, const Vec& v, int n) {
  Vec out{};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i] += g[i][j] * v[j];
  return out;
}

inline double max_abs(const Mat& m, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s = std::max(s, m[i][j] < 0 ? -m[i][j] : m[i][j]);
  return s;
}

}  // namespace asym
