#include "asym/charges.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "asym/charts.hpp"
#include "asym/errors.hpp"
#include "asym/geometry.hpp"

namespace asym {
namespace {

// Minimum RT exponent shortfall still accepted as "approximately tau + 1".
constexpr double kRtSlack = 0.3;

double log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k] / n;
    my += y[k] / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
  }
  return sxy / sxx;
}

}  // namespace

double michel_integrand_deviation(const ScalarJet& v, const MetricJet& b, const MetricJet& h,
                                  const Vec& nu) {
  require_same_point(b.at, h.at);
  require_same_point(b.at, v.at);
  const int n = b.dim();
  const Mat bi = inverse_metric(b.g, n);
  const Tensor3 gamma = christoffel(b);
  // nabla^b_i h_jl
  Tensor3 dh{};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        double s = h.dg[i][j][l];
        for (int m = 0; m < n; ++m) s -= gamma[m][i][j] * h.g[m][l] + gamma[m][i][l] * h.g[j][m];
        dh[i][j][l] = s;
      }
  double trh = 0.0;
  Vec grad{};
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      trh += bi[i][k] * h.g[i][k];
      grad[i] += bi[i][k] * v.grad[k];
    }
  double out = 0.0;
  for (int j = 0; j < n; ++j) {
    if (nu[j] == 0.0) continue;
    double div = 0.0, dtr = 0.0, hv = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) {
        div += bi[i][k] * dh[i][k][j];
        dtr += bi[i][k] * dh[j][i][k];
      }
      hv += h.g[i][j] * grad[i];
    }
    out += nu[j] * (v.value * (div - dtr) + trh * v.grad[j] - hv);
  }
  return out;
}

double michel_integrand(const ScalarJet& v, const MetricJet& g, const MetricJet& b,
                        const Vec& nu) {
  require_same_point(g.at, b.at);
  MetricJet h = g;
  const int n = g.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      h.g[i][j] -= b.g[i][j];
      for (int k = 0; k < n; ++k) {
        h.dg[k][i][j] -= b.dg[k][i][j];
        for (int l = 0; l < n; ++l) h.ddg[k][l][i][j] -= b.ddg[k][l][i][j];
      }
    }
  return michel_integrand_deviation(v, b, h, nu);
}

double adm_integrand(const MetricJet& g, const Vec& nu) {
  const int n = g.dim();
  double out = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) out += (g.dg[i][i][j] - g.dg[j][i][i]) * nu[j];
  return out;
}

double com_integrand(const MetricJet& g, int alpha, const Vec& nu) {
  const int n = g.dim();
  double tr = 0.0, hnu = 0.0;
  for (int i = 0; i < n; ++i) {
    tr += g.g[i][i] - 1.0;
    hnu += (g.g[alpha][i] - (alpha == i ? 1.0 : 0.0)) * nu[i];
  }
  return g.at.coords[alpha] * adm_integrand(g, nu) - hnu + tr * nu[alpha];
}

SphereBoundary sphere_boundary(const Mat& m, const ChartPoint& p) {
  const int n = p.n;
  const Mat inv = inverse_metric(m, n);
  const Vec df = radial_covector(p);
  const double norm = std::sqrt(contract(inv, df, df, n));
  SphereBoundary out;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += inv[i][j] * df[j];
    out.nu[i] = s / norm;
  }
  out.density = std::sqrt(determinant(m, n)) * norm;
  return out;
}

Vec unit_normal(const Mat& g, const ChartPoint& p) { return sphere_boundary(g, p).nu; }

std::string_view to_string(ChargeKind kind) {
  switch (kind) {
    case ChargeKind::mass_classical:
      return "mass_classical";
    case ChargeKind::com_classical:
      return "com_classical";
    case ChargeKind::mass_ricci:
      return "mass_ricci";
    case ChargeKind::com_ricci:
      return "com_ricci";
    case ChargeKind::ah_mass:
      return "ah_mass";
    case ChargeKind::ah_ricci:
      return "ah_ricci";
  }
  return "?";
}

ChargeKind charge_kind_from_string(std::string_view name) {
  for (ChargeKind k : {ChargeKind::mass_classical, ChargeKind::com_classical,
                       ChargeKind::mass_ricci, ChargeKind::com_ricci, ChargeKind::ah_mass,
                       ChargeKind::ah_ricci})
    if (name == to_string(k)) return k;
  throw PreconditionError("unknown charge kind '" + std::string(name) + "'");
}

std::string_view to_string(NormalMeasure m) {
  return m == NormalMeasure::background ? "background" : "metric";
}

std::string ChargeSpec::name() const {
  std::string out(to_string(kind));
  switch (kind) {
    case ChargeKind::com_classical:
    case ChargeKind::com_ricci:
      return out + ".x" + std::to_string(index + 1);
    case ChargeKind::ah_mass:
    case ChargeKind::ah_ricci:
      return out + ".V" + std::to_string(index);
    default:
      return out;
  }
}

bool ChargeSpec::ricci() const {
  return kind == ChargeKind::mass_ricci || kind == ChargeKind::com_ricci ||
         kind == ChargeKind::ah_ricci;
}

NormalMeasure ChargeSpec::effective_measure() const {
  if (measure) return *measure;
  return ricci() ? NormalMeasure::metric : NormalMeasure::background;
}

double normalization(const ChargeSpec& charge, int n) {
  const double w = sphere_volume(n);
  switch (charge.kind) {
    case ChargeKind::mass_classical:
    case ChargeKind::com_classical:
    case ChargeKind::ah_mass:
      return 1.0 / (2.0 * (n - 1) * w);
    case ChargeKind::mass_ricci:
    case ChargeKind::ah_ricci:
      return -1.0 / ((n - 1.0) * (n - 2.0) * w);
    case ChargeKind::com_ricci:
      return 1.0 / (2.0 * (n - 1.0) * (n - 2.0) * w);
  }
  return 0.0;
}

void check_applicable(const MetricSpec& spec, const ChargeSpec& charge) {
  const bool hyp_charge = charge.kind == ChargeKind::ah_mass || charge.kind == ChargeKind::ah_ricci;
  if (hyp_charge != is_hyperbolic(spec))
    throw PreconditionError("charge " + charge.name() + " does not apply to the " +
                            (is_hyperbolic(spec) ? "hyperbolic" : "flat") + " metric '" +
                            std::string(to_string(spec.kind)) + "'");
  const bool com = charge.kind == ChargeKind::com_classical || charge.kind == ChargeKind::com_ricci;
  if (com && (charge.index < 0 || charge.index >= spec.n))
    throw PreconditionError("coordinate index out of range for " + charge.name());
  if (hyp_charge && (charge.index < 0 || charge.index > spec.n))
    throw PreconditionError("kernel index out of range for " + charge.name());
}

namespace {

double sphere_flux(const MetricSpec& spec, const ChargeSpec& charge, const ConformalKilling* field,
                   bool modified, double r, const ChargeOptions& opts, double* error) {
  validate(spec);
  if (!(r > 0.0)) throw PreconditionError("radius must be positive");
  const int n = spec.n;
  const SphereRule rule = sphere_rule(n, opts.degree);
  const double rc = chart_radius_at(spec, r);
  const bool use_metric = charge.effective_measure() == NormalMeasure::metric;
  const double lambda = background_lambda(spec);

  KernelFunction kernel;
  switch (charge.kind) {
    case ChargeKind::com_classical:
      kernel = {KernelId::coordinate, charge.index};
      break;
    case ChargeKind::ah_mass:
      kernel = kernel_basis(spec)[charge.index];
      break;
    default:
      break;
  }

  const PointIntegrand f = [&](const SphereNode& node) {
    const MetricJets j = metric_jets(spec, node.point);
    const SphereBoundary bd = sphere_boundary(use_metric ? j.g.g : j.b.g, node.point);
    double val;
    if (field) {
      const RelativeCurvature c = curvature_relative(j.g, j.b, j.h, lambda);
      const Vec x = field->jet(node.point).x;
      val = contract(modified ? c.modified_einstein : c.einstein, x, bd.nu, n);
    } else {
      val = michel_integrand_deviation(kernel.jet(node.point), j.b, j.h, bd.nu);
    }
    return val * bd.density;
  };
  const QuadratureResult q =
      integrate_sphere(f, rc, rule, Measure::coordinate(chart_of(spec), n), opts.quad);
  *error = q.error_estimate;
  return q.value;
}

}  // namespace

FluxSample flux_sample(const MetricSpec& spec, const ChargeSpec& charge, double r,
                       const ChargeOptions& opts) {
  check_applicable(spec, charge);
  std::optional<ConformalKilling> field;
  bool modified = false;
  switch (charge.kind) {
    case ChargeKind::mass_ricci:
      field = ConformalKilling{FieldId::dilation, 0};
      break;
    case ChargeKind::com_ricci:
      field = ConformalKilling{FieldId::inverted_translation, charge.index};
      break;
    case ChargeKind::ah_ricci:
      field = conformal_basis(spec)[charge.index];
      modified = true;
      break;
    default:
      break;
  }
  FluxSample s;
  s.r = r;
  double err = 0.0;
  s.raw_flux = sphere_flux(spec, charge, field ? &*field : nullptr, modified, r, opts, &err);
  const double c = normalization(charge, spec.n);
  s.normalized = c * s.raw_flux + 0.0;  // no negative zero
  s.quad_error = std::fabs(c) * err;
  return s;
}

RadialSeries charge_series(const MetricSpec& spec, const ChargeSpec& charge,
                           std::span<const double> radii, const ChargeOptions& opts,
                           double scale) {
  for (std::size_t k = 1; k < radii.size(); ++k)
    if (!(radii[k] > radii[k - 1])) throw PreconditionError("radii must be strictly increasing");
  RadialSeries out;
  for (double r : radii) {
    FluxSample s = flux_sample(spec, charge, r, opts);
    s.normalized *= scale;
    s.quad_error *= std::fabs(scale);
    out.samples.push_back(s);
  }
  FitOptions fit = opts.fit;
  if (!fit.sigma && opts.hint_decay && spec.decay > 0.0) fit.sigma = spec.decay;
  if (fit.two_term && out.samples.size() < 4) fit.two_term = false;
  attach_limit(out, decay_model_of(spec), fit);
  return out;
}

RadialSeries classical_mass(const MetricSpec& spec, std::span<const double> radii,
                            const ChargeOptions& opts) {
  return charge_series(spec, {ChargeKind::mass_classical, 0, std::nullopt}, radii, opts);
}

RadialSeries classical_center(const MetricSpec& spec, int alpha, std::span<const double> radii,
                              double mass, const ChargeOptions& opts) {
  if (mass == 0.0 || !std::isfinite(mass))
    throw PreconditionError("center of mass needs a nonzero mass");
  return charge_series(spec, {ChargeKind::com_classical, alpha, std::nullopt}, radii, opts,
                       1.0 / mass);
}

RadialSeries ricci_mass(const MetricSpec& spec, std::span<const double> radii,
                        const ChargeOptions& opts) {
  return charge_series(spec, {ChargeKind::mass_ricci, 0, std::nullopt}, radii, opts);
}

RadialSeries ricci_center(const MetricSpec& spec, int alpha, std::span<const double> radii,
                          double mass, const ChargeOptions& opts) {
  if (mass == 0.0 || !std::isfinite(mass))
    throw PreconditionError("center of mass needs a nonzero mass");
  return charge_series(spec, {ChargeKind::com_ricci, alpha, std::nullopt}, radii, opts,
                       1.0 / mass);
}

RadialSeries ah_mass(const MetricSpec& spec, const KernelFunction& v,
                     std::span<const double> radii, const ChargeOptions& opts) {
  if (!v.hyperbolic()) throw PreconditionError("ah_mass needs a hyperbolic kernel function");
  const int index = v.id == KernelId::ah_v0 ? 0 : v.alpha + 1;
  return charge_series(spec, {ChargeKind::ah_mass, index, std::nullopt}, radii, opts);
}

RadialSeries ah_ricci_charge(const MetricSpec& spec, int i, std::span<const double> radii,
                             const ChargeOptions& opts) {
  return charge_series(spec, {ChargeKind::ah_ricci, i, std::nullopt}, radii, opts);
}

FluxSample einstein_flux(const MetricSpec& spec, const ConformalKilling& x, double r,
                         NormalMeasure measure, const ChargeOptions& opts) {
  if (x.hyperbolic() != is_hyperbolic(spec))
    throw PreconditionError("field " + x.name() + " does not live in the chart of the metric");
  ChargeSpec charge{ChargeKind::mass_ricci, 0, measure};
  FluxSample s;
  s.r = r;
  double err = 0.0;
  s.raw_flux = sphere_flux(spec, charge, &x, false, r, opts, &err);
  s.normalized = s.raw_flux;
  s.quad_error = err;
  return s;
}

RtReport rt_diagnostics(const MetricSpec& spec, std::span<const double> radii, int degree) {
  if (is_hyperbolic(spec))
    throw PreconditionError("parity conditions apply to asymptotically flat metrics");
  validate(spec);
  const int n = spec.n;
  const SphereRule rule = sphere_rule(n, degree);
  RtReport out;
  out.tau = spec.decay > 0.0 ? spec.decay : decay_rate(spec, radii).tau;
  out.required = out.tau + 1.0;
  for (double r : radii) {
    double sup = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      ChartPoint p{ChartKind::cartesian, n, {}};
      ChartPoint q = p;
      for (int a = 0; a < n; ++a) {
        p.coords[a] = r * rule.units[i][a];
        q.coords[a] = -p.coords[a];
      }
      const MetricJet hp = deviation_jet(spec, p);
      const MetricJet hq = deviation_jet(spec, q);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) sup = std::max(sup, 0.5 * std::fabs(hp.g[a][b] - hq.g[a][b]));
    }
    out.radii.push_back(r);
    out.odd_sup.push_back(sup);
  }
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < out.radii.size(); ++k)
    if (out.odd_sup[k] > 0.0) {
      xs.push_back(std::log(out.radii[k]));
      ys.push_back(std::log(out.odd_sup[k]));
    }
  if (xs.size() < 2) {
    out.vanishing = xs.empty();
    out.exponent = std::numeric_limits<double>::infinity();
    out.pass = true;
    return out;
  }
  out.exponent = -log_slope(xs, ys);
  out.pass = out.exponent >= out.required - kRtSlack;
  return out;
}

}  // namespace asym
