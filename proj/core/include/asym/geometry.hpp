#pragma once

// Pointwise tensor calculus on metric 2-jets.
//
// Conventions used throughout the library:
//  * all tensors are stored fully covariant; indices are raised on demand
//    with an inverse computed by a direct solve;
//  * delta, the divergence on vectors and symmetric 2-tensors, is MINUS the
//    covariant divergence (the formal adjoint of d), so delta X = -n for the
//    euclidean dilation field;
//  * the Laplacian is delta d = -tr_g Hess, the nonnegative operator.

#include <optional>

#include "asym/errors.hpp"
#include "asym/jets.hpp"
#include "asym/tensor.hpp"

namespace asym {

// Inverse of a symmetric positive definite matrix. Throws DegenerateMetric
// when the Cholesky factorization fails.
Mat inverse_metric(const Mat& g, int n);
double determinant(const Mat& g, int n);

// Levi-Civita connection together with its first derivatives.
struct Connection {
  int n = 0;
  Mat inv{};           // g^ij
  Tensor3 gamma{};     // gamma[k][i][j] = Gamma^k_ij
  Tensor4 dgamma{};    // dgamma[m][k][i][j] = d_m Gamma^k_ij
};

Tensor3 christoffel(const MetricJet& jet);
Connection connection(const MetricJet& jet);

struct CurvatureBundle {
  int n = 0;
  Tensor3 christoffel{};
  Mat ricci{};
  double scal = 0.0;
  Mat einstein{};  // Ric - 1/2 Scal g
  // Ric - 1/2 Scal g - (n-1)(n-2)/2 g; present for hyperbolic (polar) charts.
  std::optional<Mat> modified_einstein;
};

CurvatureBundle curvature(const MetricJet& jet);

// Curvature of g = b + h computed from the deviation h and the background b,
// where b is Einstein with Ric^b = lambda (n-1) b exactly. The differences
// Ric^g - Ric^b and the modified Einstein tensor are formed without
// subtracting large background quantities, which keeps them accurate far
// out in hyperbolic charts where g and b agree to many digits.
struct RelativeCurvature {
  int n = 0;
  double lambda = 0.0;
  Mat delta_ricci{};        // Ric^g - Ric^b
  double scal_shift = 0.0;  // Scal^g - lambda n (n-1)
  Mat ricci{};
  double scal = 0.0;
  Mat einstein{};
  // Ric^g - 1/2 Scal^g g + lambda (n-1)(n-2)/2 g; equals the Einstein
  // tensor for lambda = 0 and the modified Einstein tensor for lambda = -1.
  Mat modified_einstein{};
};

RelativeCurvature curvature_relative(const MetricJet& g, const MetricJet& b,
                                     const MetricJet& h, double lambda);

// delta^g X = -(d_i X^i + Gamma^i_ik X^k).
double divergence_vector(const MetricJet& jet, const VectorJet& x);

// (delta^g T)_j = -g^ik nabla_i T_kj. Only the value and first derivatives
// of `t` are used.
Vec divergence_symmetric2(const MetricJet& jet, const MetricJet& t);

struct KillingParts {
  Mat full{};        // (delta^g)^* X = sym(nabla X)
  Mat trace_free{};  // (delta^g)^* X + (1/n)(delta^g X) g
};

KillingParts killing_operator(const MetricJet& jet, const VectorJet& x);

Mat hessian(const MetricJet& jet, const ScalarJet& v);
double laplacian(const MetricJet& jet, const ScalarJet& v);

// Adjoint of the linearized scalar curvature: Hess V + (Delta V) g - V Ric.
Mat dscal_adjoint(const MetricJet& jet, const ScalarJet& v,
                  const CurvatureBundle& curv);

// Throws ChartMismatch unless both points are the same point of the same
// chart.
void require_same_point(const ChartPoint& a, const ChartPoint& b);

}  // namespace asym
