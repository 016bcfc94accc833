#include "asym/metric.hpp"

#include <cmath>
#include <span>
#include <string>

#include "asym/charts.hpp"
#include "asym/errors.hpp"

namespace asym {
namespace {

using HMat = std::array<std::array<HyperDual, kMaxDim>, kMaxDim>;
using Coords = std::span<const HyperDual>;


ChartKind chart_of_kind(MetricKind k) {
  switch (k) {
    case MetricKind::hyperbolic_polar:
      return ChartKind::polar_geodesic;
    case MetricKind::hyperbolic_area:
    case MetricKind::kottler:
      return ChartKind::polar_area;
    default:
      return ChartKind::cartesian;
  }
}

MetricKind background_kind_of_chart(ChartKind c) {
  switch (c) {
    case ChartKind::polar_geodesic:
      return MetricKind::hyperbolic_polar;
    case ChartKind::polar_area:
      return MetricKind::hyperbolic_area;
    case ChartKind::cartesian:
      break;
  }
  return MetricKind::euclidean;
}

MetricKind background_kind(const MetricSpec& spec) {
  switch (spec.kind) {
    case MetricKind::perturbation:
      return background_kind_of_chart(chart_of_kind(spec.base));
    case MetricKind::expression:
      return background_kind_of_chart(spec.expr_chart);
    default:
      return background_kind_of_chart(chart_of_kind(spec.kind));
  }
}

void background_components(MetricKind kind, int n, Coords x, HMat& b) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b[i][j] = HyperDual(i == j ? 1.0 : 0.0);
  if (kind == MetricKind::euclidean) return;
  const HyperDual& r = x[0];
  const Coords angles = x.subspan(1);
  HyperDual radial;
  if (kind == MetricKind::hyperbolic_polar) {
    const HyperDual s = sinh(r);
    radial = s * s;
  } else {
    radial = r * r;
    b[0][0] = reciprocal(HyperDual(1.0) + r * r);
  }
  for (int k = 1; k < n; ++k) b[k][k] = radial * sphere_metric_factor<HyperDual>(angles, k - 1);
}

double excised_radius(MetricKind kind, int n, double m) {
  if (kind == MetricKind::schwarzschild_conformal)
    return std::pow(0.5 * std::fabs(m), 1.0 / (n - 2));
  if (kind == MetricKind::kottler && m > 0.0) {
    // Positive root of 1 + rho^2 - 2m / rho^{n-2}.
    auto f = [&](double rho) { return 1.0 + rho * rho - 2.0 * m / std::pow(rho, n - 2); };
    double lo = 0.0, hi = 1.0;
    while (f(hi) <= 0.0) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (f(mid) > 0.0 ? hi : lo) = mid;
    }
    return hi;
  }
  return 0.0;
}

// Deviation of a catalog metric from its background.
void catalog_deviation(MetricKind kind, int n, double m, const Vec& center, Coords x,
                       HMat& h) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) h[i][j] = HyperDual(0.0);
  if (kind == MetricKind::schwarzschild_conformal) {
    HyperDual rho2(0.0);
    for (int i = 0; i < n; ++i) {
      const HyperDual d = x[i] - HyperDual(center[i]);
      rho2 += d * d;
    }
    const double rho = std::sqrt(rho2.value());
    if (!(rho > excised_radius(kind, n, m)) || rho == 0.0)
      throw DomainError("point at distance " + std::to_string(rho) +
                        " from the center lies in the excised region");
    // (1 + a)^p - 1 with a = m / (2 rho^{n-2}), p = 4 / (n-2)
    const HyperDual a = HyperDual(0.5 * m) * pow(rho2, -0.5 * (n - 2));
    const HyperDual dev = expm1(HyperDual(4.0 / (n - 2)) * log1p(a));
    for (int i = 0; i < n; ++i) h[i][i] = dev;
    return;
  }
  if (kind == MetricKind::kottler) {
    const HyperDual& rho = x[0];
    const HyperDual q = HyperDual(2.0 * m) * pow(rho, -static_cast<double>(n - 2));
    const HyperDual fb = HyperDual(1.0) + rho * rho;
    const HyperDual f = fb - q;
    if (!(f.value() > 0.0))
      throw DomainError("Kottler metric function 1 + r^2 - 2m/r^{n-2} is not positive at r = " +
                        std::to_string(rho.value()));
    // 1/f - 1/fb, formed without cancellation.
    h[0][0] = q / (fb * f);
  }
}

void user_components(const MetricSpec& spec, Coords x, HMat& out) {
  const int n = spec.n;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const HyperDual v = spec.components[component_index(i, j, n)].evaluate<HyperDual>(
          x, std::span<const double>(spec.param_values));
      out[i][j] = v;
      out[j][i] = v;
    }
}

MetricJet to_jet(const HMat& a, const ChartPoint& p) {
  const int n = p.n;
  MetricJet jet;
  jet.at = p;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      jet.g[i][j] = a[i][j].value();
      for (int k = 0; k < n; ++k) {
        jet.dg[k][i][j] = a[i][j].d(k);
        for (int l = 0; l < n; ++l) jet.ddg[k][l][i][j] = a[i][j].dd(k, l);
      }
    }
  return jet;
}

void check_point(const MetricSpec& spec, const ChartPoint& p) {
  if (p.n != spec.n || p.chart != chart_of(spec))
    throw ChartMismatch("point is in chart " + std::string(to_string(p.chart)) + " (n=" +
                        std::to_string(p.n) + "), metric expects " +
                        std::string(to_string(chart_of(spec))) + " (n=" +
                        std::to_string(spec.n) + ")");
  for (int i = 0; i < p.n; ++i)
    if (!std::isfinite(p.coords[i])) throw DomainError("non-finite coordinate");
  if (is_polar(p.chart) && !(p.coords[0] > 0.0))
    throw DomainError("polar radius must be positive");
}

struct Components {
  HMat b, h;
};

Components components(const MetricSpec& spec, const ChartPoint& p) {
  check_point(spec, p);
  const int n = spec.n;
  std::array<HyperDual, kMaxDim> xs{};
  for (int i = 0; i < n; ++i) xs[i] = HyperDual::variable(p.coords[i], i, n);
  const Coords x(xs.data(), n);
  Components c;
  background_components(background_kind(spec), n, x, c.b);
  switch (spec.kind) {
    case MetricKind::perturbation: {
      HMat u;
      catalog_deviation(spec.base, n, spec.m, spec.center, x, c.h);
      user_components(spec, x, u);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c.h[i][j] += u[i][j];
      break;
    }
    case MetricKind::expression: {
      HMat g;
      user_components(spec, x, g);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c.h[i][j] = g[i][j] - c.b[i][j];
      break;
    }
    default:
      catalog_deviation(spec.kind, n, spec.m, spec.center, x, c.h);
  }
  return c;
}

}  // namespace

std::string_view to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::euclidean:
      return "euclidean";
    case MetricKind::hyperbolic_polar:
      return "hyperbolic_polar";
    case MetricKind::hyperbolic_area:
      return "hyperbolic_area";
    case MetricKind::schwarzschild_conformal:
      return "schwarzschild_conformal";
    case MetricKind::kottler:
      return "kottler";
    case MetricKind::perturbation:
      return "perturbation";
    case MetricKind::expression:
      return "expression";
  }
  return "?";
}

MetricKind metric_kind_from_string(std::string_view name) {
  if (name == "euclidean") return MetricKind::euclidean;
  if (name == "hyperbolic_polar" || name == "hyperbolic") return MetricKind::hyperbolic_polar;
  if (name == "hyperbolic_area") return MetricKind::hyperbolic_area;
  if (name == "schwarzschild_conformal" || name == "schwarzschild")
    return MetricKind::schwarzschild_conformal;
  if (name == "kottler") return MetricKind::kottler;
  if (name == "perturbation") return MetricKind::perturbation;
  if (name == "expression") return MetricKind::expression;
  throw PreconditionError("unknown metric kind '" + std::string(name) + "'");
}

MetricSpec MetricSpec::euclidean(int n) {
  MetricSpec s;
  s.kind = MetricKind::euclidean;
  s.n = n;
  return s;
}

MetricSpec MetricSpec::hyperbolic_polar(int n) {
  MetricSpec s;
  s.kind = MetricKind::hyperbolic_polar;
  s.n = n;
  return s;
}

MetricSpec MetricSpec::hyperbolic_area(int n) {
  MetricSpec s;
  s.kind = MetricKind::hyperbolic_area;
  s.n = n;
  return s;
}

MetricSpec MetricSpec::schwarzschild(int n, double m, const Vec& center) {
  MetricSpec s;
  s.kind = MetricKind::schwarzschild_conformal;
  s.n = n;
  s.m = m;
  s.center = center;
  s.decay = n - 2;
  return s;
}

MetricSpec MetricSpec::kottler(int n, double m) {
  MetricSpec s;
  s.kind = MetricKind::kottler;
  s.n = n;
  s.m = m;
  s.decay = n;
  return s;
}

int component_index(int i, int j, int n) {
  if (i > j) std::swap(i, j);
  return i * n - i * (i - 1) / 2 + (j - i);
}

ChartKind chart_of(const MetricSpec& spec) {
  switch (spec.kind) {
    case MetricKind::perturbation:
      return chart_of_kind(spec.base);
    case MetricKind::expression:
      return spec.expr_chart;
    default:
      return chart_of_kind(spec.kind);
  }
}

bool is_hyperbolic(const MetricSpec& spec) { return is_polar(chart_of(spec)); }

double background_lambda(const MetricSpec& spec) { return is_hyperbolic(spec) ? -1.0 : 0.0; }

MetricSpec background_of(const MetricSpec& spec) {
  MetricSpec b;
  b.kind = background_kind(spec);
  b.n = spec.n;
  return b;
}

void validate(const MetricSpec& spec) {
  const int n = spec.n;
  if (n < 3) throw PreconditionError("dimension must be at least 3");
  if (n > kMaxDim)
    throw UnsupportedError("dimension " + std::to_string(n) + " exceeds the supported maximum " +
                           std::to_string(kMaxDim));
  if (is_polar(chart_of(spec)) && n > 5)
    throw UnsupportedError("polar charts are supported for n in {3, 4, 5}");
  if (!std::isfinite(spec.m)) throw PreconditionError("mass parameter must be finite");
  if (spec.param_names.size() != spec.param_values.size())
    throw PreconditionError("parameter names and values differ in number");
  const bool user = spec.kind == MetricKind::perturbation || spec.kind == MetricKind::expression;
  if (spec.kind == MetricKind::perturbation &&
      (spec.base == MetricKind::perturbation || spec.base == MetricKind::expression))
    throw PreconditionError("perturbation base must be a catalog metric");
  if (!user) return;
  const std::size_t want = static_cast<std::size_t>(n * (n + 1) / 2);
  if (spec.components.size() != want)
    throw PreconditionError("expected " + std::to_string(want) +
                            " metric components (upper triangle), got " +
                            std::to_string(spec.components.size()));
  for (const ExprAst& c : spec.components) {
    if (c.dim() != n || c.chart() != chart_of(spec))
      throw PreconditionError("component '" + c.source() +
                              "' was parsed for a different chart or dimension");
    if (c.parameters().size() > spec.param_values.size())
      throw PreconditionError("component '" + c.source() + "' uses undeclared parameters");
  }
}

double excised_radius(const MetricSpec& spec) {
  const MetricKind k = spec.kind == MetricKind::perturbation ? spec.base : spec.kind;
  return excised_radius(k, spec.n, spec.m);
}

MetricJets metric_jets(const MetricSpec& spec, const ChartPoint& p) {
  const Components c = components(spec, p);
  HMat g;
  for (int i = 0; i < spec.n; ++i)
    for (int j = 0; j < spec.n; ++j) g[i][j] = c.b[i][j] + c.h[i][j];
  return {to_jet(g, p), to_jet(c.b, p), to_jet(c.h, p)};
}

MetricJet metric_jet(const MetricSpec& spec, const ChartPoint& p) {
  return metric_jets(spec, p).g;
}

MetricJet deviation_jet(const MetricSpec& spec, const ChartPoint& p) {
  return to_jet(components(spec, p).h, p);
}

RelativeCurvature relative_curvature(const MetricSpec& spec, const ChartPoint& p) {
  const MetricJets j = metric_jets(spec, p);
  return curvature_relative(j.g, j.b, j.h, background_lambda(spec));
}

}  // namespace asym
