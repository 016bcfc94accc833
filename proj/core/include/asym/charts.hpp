#pragma once

// Coordinate charts: hyperspherical angles on S^{n-1}, the radial function of
// each chart, and the map between the two polar presentations of hyperbolic
// space (geodesic distance r and area radius rho = sinh r).

#include <span>

#include "asym/hyperdual.hpp"
#include "asym/jets.hpp"

namespace asym {

// Unit-sphere embedding in hyperspherical angles psi_1..psi_{n-1}:
//   u^1 = cos psi_1,
//   u^a = sin psi_1 ... sin psi_{a-1} cos psi_a   (1 < a < n),
//   u^n = sin psi_1 ... sin psi_{n-1}.
// `alpha` is zero-based.
template <typename S>
S sphere_embedding(std::span<const S> angles, int alpha, int n) {
  S out(1.0);
  for (int j = 0; j < alpha && j < n - 1; ++j) out = out * math::sin(angles[j]);
  if (alpha < n - 1) out = out * math::cos(angles[alpha]);
  return out;
}

// d u^alpha / d psi_k (both zero-based indices into their lists).
template <typename S>
S sphere_embedding_derivative(std::span<const S> angles, int alpha, int k, int n) {
  const bool last = alpha == n - 1;
  if (k > alpha || (k == alpha && last)) return S(0.0);
  S out(1.0);
  for (int j = 0; j < alpha && j < n - 1; ++j)
    out = out * (j == k ? math::cos(angles[j]) : math::sin(angles[j]));
  if (!last) out = out * (k == alpha ? -math::sin(angles[alpha]) : math::cos(angles[alpha]));
  return out;
}

// Diagonal of the round metric in hyperspherical angles:
//   s_1 = 1, s_k = sin^2 psi_1 ... sin^2 psi_{k-1}. `k` is zero-based.
template <typename S>
S sphere_metric_factor(std::span<const S> angles, int k) {
  S out(1.0);
  for (int j = 0; j < k; ++j) {
    const S s = math::sin(angles[j]);
    out = out * s * s;
  }
  return out;
}

// Volume of the unit round sphere S^{n-1}.
double sphere_volume(int n);

// Radius in the chart's own sense: |x| in cartesian charts, coords[0] in
// polar charts.
double chart_radius(const ChartPoint& p);

// Point of the coordinate sphere of radius `radius` in direction `unit`
// (with the matching hyperspherical angles `angles`).
ChartPoint sphere_point(ChartKind chart, int n, double radius, std::span<const double> unit,
                        std::span<const double> angles);

// Covector dF of the chart's radial function F at p (dF_i = x_i / |x| in
// cartesian charts, (1, 0, ..., 0) in polar charts).
Vec radial_covector(const ChartPoint& p);

// Change of radial variable between the two hyperbolic polar charts
// (rho = sinh r). `source_radius` and its derivatives are those of the
// source chart's radial coordinate as a function of the target's.
struct ChartTransfer {
  ChartPoint point;  // image point in the target chart
  double source_radius = 0.0;
  double d1 = 1.0;  // d(source radius)/d(target radius)
  double d2 = 0.0;
};

// Throws ChartMismatch for incompatible charts (cartesian <-> polar).
ChartTransfer chart_transfer(const ChartPoint& p, ChartKind to);

// Expresses a metric jet given at `jet.at` in chart `to`, including exact
// second derivatives of the transformed components.
MetricJet transfer_jet(const MetricJet& jet, ChartKind to);

}  // namespace asym
