#pragma once

// Boundary integrands and normalized asymptotic charges.
//
// Michel's charge integrand, for a kernel function V and h = g - b:
//
//   U(V, g, b)(nu) = V (-delta^b h - d tr_b h)(nu) + tr_b h dV(nu)
//                    - h(grad^b V, nu)
//
// Normalizations (omega = |S^{n-1}|):
//   mass_classical   m      =  1 / (2(n-1) omega)       lim int U(1, g, e)
//   com_classical    m c^a  =  1 / (2(n-1) omega)       lim int U(x^a, g, e)
//   mass_ricci       m_R    = -1 / ((n-1)(n-2) omega)   lim int G(X, nu)
//   com_ricci        m c^a_R = 1 / (2(n-1)(n-2) omega)  lim int G(X^(a), nu)
//   ah_mass          M[V]   =  1 / (2(n-1) omega)       lim int U(V, g, b)
//   ah_ricci         M[V^(i)] = -1 / ((n-1)(n-2) omega) lim int G~(X^(i), nu)
// where G is the Einstein tensor and G~ = G - (n-1)(n-2)/2 g.
//
// The center-of-mass charges above are the unnormalized products m c^a; the
// `classical_center` and `ricci_center` helpers divide by a given mass.

#include <optional>
#include <string>
#include <vector>

#include "asym/kernels.hpp"
#include "asym/limits.hpp"
#include "asym/metric.hpp"
#include "asym/quadrature.hpp"

namespace asym {

// --- pointwise integrands -------------------------------------------------

// U(V, g, b)(nu) with h = g - b formed by subtraction. nu is a vector.
double michel_integrand(const ScalarJet& v, const MetricJet& g, const MetricJet& b,
                        const Vec& nu);
// Same, with the deviation h supplied as its own jet.
double michel_integrand_deviation(const ScalarJet& v, const MetricJet& b, const MetricJet& h,
                                  const Vec& nu);

// (-delta^e g - d tr_e g)(nu) = (d_i g_ij - d_j g_ii) nu^j in a cartesian chart.
double adm_integrand(const MetricJet& g, const Vec& nu);
// x^a (d_i g_ij - d_j g_ii) nu^j - (g - e)(d_a, nu) + tr_e(g - e) nu^a.
double com_integrand(const MetricJet& g, int alpha, const Vec& nu);

// Outward unit normal of the coordinate sphere through p for metric g.
Vec unit_normal(const Mat& g, const ChartPoint& p);

// Unit normal together with the area density sqrt(det g) |dF|_g, which
// times the chart factor of the quadrature gives the area element.
struct SphereBoundary {
  Vec nu{};
  double density = 0.0;
};
SphereBoundary sphere_boundary(const Mat& g, const ChartPoint& p);

// --- charges ----------------------------------------------------------------

enum class ChargeKind { mass_classical, com_classical, mass_ricci, com_ricci, ah_mass, ah_ricci };

std::string_view to_string(ChargeKind kind);
ChargeKind charge_kind_from_string(std::string_view name);

// Which metric supplies the normal and the area element.
enum class NormalMeasure { background, metric };

std::string_view to_string(NormalMeasure m);

struct ChargeSpec {
  ChargeKind kind = ChargeKind::mass_classical;
  // com_*: zero-based coordinate index a; ah_*: kernel index i in 0..n.
  int index = 0;
  // Defaults: background for Michel-type charges, metric for Einstein-flux
  // charges.
  std::optional<NormalMeasure> measure;

  std::string name() const;
  bool ricci() const;
  NormalMeasure effective_measure() const;
};

// Normalization constant of the charge in dimension n.
double normalization(const ChargeSpec& charge, int n);

// Throws PreconditionError when the charge does not apply to the metric
// (flat charges on hyperbolic metrics and vice versa, index out of range).
void check_applicable(const MetricSpec& spec, const ChargeSpec& charge);

struct ChargeOptions {
  int degree = 20;
  QuadOptions quad;
  FitOptions fit{.sigma = std::nullopt, .two_term = true};
  // Use the metric's declared decay rate as the fit exponent when the fit
  // options do not fix one.
  bool hint_decay = true;
};

// Raw and normalized flux over the coordinate sphere at asymptotic radius r.
FluxSample flux_sample(const MetricSpec& spec, const ChargeSpec& charge, double r,
                       const ChargeOptions& opts = {});

// Flux samples over `radii` with the extrapolated limit attached. `scale`
// multiplies the normalization (e.g. 1/m for centers of mass).
RadialSeries charge_series(const MetricSpec& spec, const ChargeSpec& charge,
                           std::span<const double> radii, const ChargeOptions& opts = {},
                           double scale = 1.0);

RadialSeries classical_mass(const MetricSpec& spec, std::span<const double> radii,
                            const ChargeOptions& opts = {});
// c^a normalized by `mass`; throws PreconditionError for zero mass.
RadialSeries classical_center(const MetricSpec& spec, int alpha, std::span<const double> radii,
                              double mass, const ChargeOptions& opts = {});
RadialSeries ricci_mass(const MetricSpec& spec, std::span<const double> radii,
                        const ChargeOptions& opts = {});
RadialSeries ricci_center(const MetricSpec& spec, int alpha, std::span<const double> radii,
                          double mass, const ChargeOptions& opts = {});
RadialSeries ah_mass(const MetricSpec& spec, const KernelFunction& v,
                     std::span<const double> radii, const ChargeOptions& opts = {});
RadialSeries ah_ricci_charge(const MetricSpec& spec, int i, std::span<const double> radii,
                             const ChargeOptions& opts = {});

// Raw flux of G(X, nu) over S_r (r asymptotic); `normalized` equals `raw_flux`.
FluxSample einstein_flux(const MetricSpec& spec, const ConformalKilling& x, double r,
                         NormalMeasure measure, const ChargeOptions& opts = {});

// Parity check of the deviation: sup over S_r of the odd part
// 1/2 |h(x) - h(-x)|, its fitted decay exponent, and a verdict against
// tau + 1.
struct RtReport {
  std::vector<double> radii;
  std::vector<double> odd_sup;
  bool vanishing = false;
  double exponent = 0.0;  // +infinity when the odd part vanishes
  double required = 0.0;  // tau + 1
  double tau = 0.0;
  bool pass = false;
};

RtReport rt_diagnostics(const MetricSpec& spec, std::span<const double> radii, int degree = 8);

}  // namespace asym
