#pragma once

// Kernel functions of the adjoint linearized scalar curvature of the model
// metrics, and the conformal Killing fields paired with them.
//
// Flat (cartesian chart):
//   V = 1, V = x^a;  X = x^i d_i (dilation),
//   X^(a) = r^2 d_a - 2 x^a x^i d_i (inverted translation).
// Hyperbolic (either polar chart, u the unit-sphere embedding):
//   V^(0) = cosh r, V^(a) = u^a sinh r (geodesic radius r),
//   X^(i) = grad^b V^(i), so that delta^b X^(i) = -n V^(i).
//
// Indices `alpha` are zero-based (alpha = 0 is x^1, V^(1), X^(1)).

#include <string>
#include <vector>

#include "asym/jets.hpp"
#include "asym/metric.hpp"

namespace asym {

enum class KernelId { const_one, coordinate, ah_v0, ah_valpha };
enum class FieldId { dilation, inverted_translation, ah_x0, ah_xalpha };

struct KernelFunction {
  KernelId id = KernelId::const_one;
  int alpha = 0;

  std::string name() const;
  bool hyperbolic() const { return id == KernelId::ah_v0 || id == KernelId::ah_valpha; }
  // Throws ChartMismatch if the field does not live in p's chart.
  ScalarJet jet(const ChartPoint& p) const;
  double value(const ChartPoint& p) const;
};

struct ConformalKilling {
  FieldId id = FieldId::dilation;
  int alpha = 0;

  std::string name() const;
  bool hyperbolic() const { return id == FieldId::ah_x0 || id == FieldId::ah_xalpha; }
  VectorJet jet(const ChartPoint& p) const;
  // The kernel function V with delta^b X = c V, and the constant c.
  KernelFunction paired_kernel() const;
  double pairing_constant(int n) const;
};

// Kernel basis of the background of `spec`: {1, x^1..x^n} or {V^(0)..V^(n)}.
std::vector<KernelFunction> kernel_basis(const MetricSpec& spec);
// Conformal fields of the background: {dilation, X^(1)..X^(n)} or
// {X^(0)..X^(n)}.
std::vector<ConformalKilling> conformal_basis(const MetricSpec& spec);

// Parses names such as "1", "x2", "V0", "V3" / "dilation", "X2", "X0".
// Hyperbolic names resolve for hyperbolic metrics, flat names otherwise.
KernelFunction kernel_from_name(const std::string& name, const MetricSpec& spec);
ConformalKilling field_from_name(const std::string& name, const MetricSpec& spec);

// Value, gradient and Hessian of delta^b X for the background b of `spec`
// (euclidean or hyperbolic), computed from third derivatives obtained by
// nested forward differentiation.
ScalarJet divergence_jet(const MetricSpec& background, const ConformalKilling& x,
                         const ChartPoint& p);

}  // namespace asym
