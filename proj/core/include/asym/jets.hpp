#pragma once

#include <string_view>

#include "asym/tensor.hpp"

namespace asym {

// cartesian: x^1..x^n. Polar charts: coords[0] is the radial coordinate
// (geodesic distance r, or area radius rho), coords[1..n-1] the hyperspherical
// angles psi_1..psi_{n-1} of S^{n-1}.
enum class ChartKind { cartesian, polar_geodesic, polar_area };

std::string_view to_string(ChartKind kind);
ChartKind chart_kind_from_string(std::string_view name);

inline bool is_polar(ChartKind k) { return k != ChartKind::cartesian; }

struct ChartPoint {
  ChartKind chart = ChartKind::cartesian;
  int n = 3;
  Vec coords{};

  friend bool operator==(const ChartPoint&, const ChartPoint&) = default;
};

// Metric components with exact first and second coordinate derivatives.
// Also used for the deviation h = g - b, which need not be positive.
struct MetricJet {
  ChartPoint at;
  Mat g{};        // g_ij
  Tensor3 dg{};   // dg[k][i][j] = d_k g_ij
  Tensor4 ddg{};  // ddg[k][l][i][j] = d_k d_l g_ij

  int dim() const { return at.n; }
};

struct ScalarJet {
  ChartPoint at;
  double value = 0.0;
  Vec grad{};
  Mat hess{};  // coordinate second derivatives
};

struct VectorJet {
  ChartPoint at;
  Vec x{};   // X^i
  Mat dx{};  // dx[j][i] = d_j X^i
};

}  // namespace asym
