#pragma once

// Executable checks of the integral and pointwise identities behind the
// charges: the integrated Bianchi (Pohozaev) identity on annuli, the Hessian
// identity for divergences of conformal Killing fields on Einstein metrics,
// kernel membership and divergence pairing, and the classical-vs-Ricci
// equivalence of the charges.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "asym/charges.hpp"
#include "asym/kernels.hpp"
#include "asym/limits.hpp"
#include "asym/metric.hpp"

namespace asym {

struct Tolerances {
  double abs_tol = 1e-8;
  double rel_tol = 1e-6;
};

struct IdentityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double scale = 0.0;  // magnitude of the integrands, for relative residuals
  double relative_residual = 0.0;
  double lhs_error = 0.0;  // quadrature error estimates
  double rhs_error = 0.0;
  double killing_defect = 0.0;  // sup of the trace-free Killing operator of g
  bool pass = false;
  std::vector<std::string> warnings;
};

// Outer-sphere minus inner-sphere flux of G(X, nu) against the metric
// measure (lhs) versus (n-2)/(2n) times the bulk integral of Scal delta X
// (rhs) over the annulus between asymptotic radii r0 and r1. Swapping r0
// and r1 negates both sides.
IdentityReport pohozaev_check(const MetricSpec& spec, const ConformalKilling& x, double r0,
                              double r1, int degree = 30, const Tolerances& tol = {},
                              const QuadOptions& quad = {});

// Points of the metric's chart, deterministic in `seed`. Radii (asymptotic)
// are drawn uniformly from [rmin, rmax].
std::vector<ChartPoint> sample_points(const MetricSpec& spec, int count, std::uint64_t seed,
                                      double rmin, double rmax);

struct KernelReport {
  std::string name;
  double lambda = 0.0;
  double einstein_defect = 0.0;
  double max_residual = 0.0;        // sup |Hess(delta X) + lambda (delta X) g|
  double max_trace_residual = 0.0;  // sup |Delta(delta X) - n lambda delta X|
  int samples = 0;
  bool pass = false;
};

// Throws PreconditionError for non-Einstein metrics, quoting the measured
// defect sup |Ric - lambda (n-1) g|.
KernelReport kernel_identity_check(const MetricSpec& spec, const ConformalKilling& x,
                                  const std::vector<ChartPoint>& points,
                                  const Tolerances& tol = {});

struct PairingReport {
  std::string name;
  double max_dscal_adjoint = 0.0;  // sup |(D Scal)^*_b V|
  double max_pairing = 0.0;        // sup |delta^b X - c V|
  double max_killing = 0.0;        // sup |trace-free Killing operator of X|
  int samples = 0;
  bool pass = false;
};

// For each basis index i of the background: kernel membership of V^(i) and
// the pairing delta^b X^(i) = c V^(i).
std::vector<PairingReport> kernel_pairing_check(const MetricSpec& spec,
                                                const std::vector<ChartPoint>& points,
                                                const Tolerances& tol = {});

struct EquivalenceRow {
  std::string name;
  RadialSeries classical;
  RadialSeries ricci;
  double difference = 0.0;
  double combined_error = 0.0;
  bool pass = false;
  std::vector<std::string> warnings;
};

struct EquivalenceReport {
  std::vector<EquivalenceRow> rows;
  DecayReport decay;
  std::optional<RtReport> rt;
  std::vector<double> scal_proxy;  // sup |Scal - Scal_b| times area growth, per radius
  bool scal_integrable = true;
  std::vector<std::string> warnings;
  bool pass = false;
};

// Absolute floor below which classical and Ricci values count as equal.
inline constexpr double kEquivalenceFloor = 1e-9;

// Row comparing the limits of a classical and a Ricci series.
EquivalenceRow compare_charges(std::string name, RadialSeries classical, RadialSeries ricci);

EquivalenceReport equivalence_report(const MetricSpec& spec, std::span<const double> radii,
                                     const ChargeOptions& opts = {});

}  // namespace asym
