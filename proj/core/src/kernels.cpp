#include "asym/kernels.hpp"

#include <array>
#include <cctype>
#include <span>

#include "asym/charts.hpp"
#include "asym/errors.hpp"
#include "asym/hyperdual.hpp"

namespace asym {
namespace {

template <typename S>
using SVec = std::array<S, kMaxDim>;

void require_chart(bool hyperbolic, ChartKind chart, const std::string& name) {
  if (hyperbolic != is_polar(chart))
    throw ChartMismatch("'" + name + "' is not defined in the " + std::string(to_string(chart)) +
                        " chart");
}

template <typename S>
S kernel_value(const KernelFunction& k, ChartKind chart, int n, std::span<const S> x) {
  require_chart(k.hyperbolic(), chart, k.name());
  const bool geodesic = chart == ChartKind::polar_geodesic;
  switch (k.id) {
    case KernelId::const_one:
      return S(1.0);
    case KernelId::coordinate:
      return x[k.alpha];
    case KernelId::ah_v0:
      return geodesic ? math::cosh(x[0]) : math::sqrt(S(1.0) + x[0] * x[0]);
    case KernelId::ah_valpha: {
      const S u = sphere_embedding<S>(x.subspan(1), k.alpha, n);
      return u * (geodesic ? math::sinh(x[0]) : x[0]);
    }
  }
  return S(0.0);
}

template <typename S>
SVec<S> field_value(const ConformalKilling& f, ChartKind chart, int n, std::span<const S> x) {
  require_chart(f.hyperbolic(), chart, f.name());
  SVec<S> out;
  for (int i = 0; i < n; ++i) out[i] = S(0.0);
  const bool geodesic = chart == ChartKind::polar_geodesic;
  switch (f.id) {
    case FieldId::dilation:
      for (int i = 0; i < n; ++i) out[i] = x[i];
      break;
    case FieldId::inverted_translation: {
      S r2(0.0);
      for (int i = 0; i < n; ++i) r2 = r2 + x[i] * x[i];
      for (int i = 0; i < n; ++i) out[i] = S(-2.0) * x[f.alpha] * x[i];
      out[f.alpha] = out[f.alpha] + r2;
      break;
    }
    case FieldId::ah_x0:
      out[0] = geodesic ? math::sinh(x[0]) : x[0] * math::sqrt(S(1.0) + x[0] * x[0]);
      break;
    case FieldId::ah_xalpha: {
      const std::span<const S> angles = x.subspan(1);
      const S u = sphere_embedding<S>(angles, f.alpha, n);
      // grad^b (u^a R) with R = sinh r or rho.
      const S radius = geodesic ? math::sinh(x[0]) : x[0];
      out[0] = u * (geodesic ? math::cosh(x[0]) : S(1.0) + x[0] * x[0]);
      for (int k = 1; k < n; ++k) {
        const S du = sphere_embedding_derivative<S>(angles, f.alpha, k - 1, n);
        out[k] = du / (radius * sphere_metric_factor<S>(angles, k - 1));
      }
      break;
    }
  }
  return out;
}

// sqrt(det b) of the background in its own chart.
template <typename S>
S volume_density(MetricKind kind, int n, std::span<const S> x) {
  if (kind == MetricKind::euclidean) return S(1.0);
  S out = kind == MetricKind::hyperbolic_polar
              ? math::pow(math::sinh(x[0]), n - 1.0)
              : math::pow(x[0], n - 1.0) / math::sqrt(S(1.0) + x[0] * x[0]);
  for (int k = 1; k < n - 1; ++k) out = out * math::pow(math::sin(x[k]), n - 1.0 - k);
  return out;
}

std::array<HyperDual, kMaxDim> variables(const ChartPoint& p) {
  std::array<HyperDual, kMaxDim> x{};
  for (int i = 0; i < p.n; ++i) x[i] = HyperDual::variable(p.coords[i], i, p.n);
  return x;
}

int parse_index(const std::string& s, std::size_t from) {
  if (from >= s.size()) return -1;
  int v = 0;
  for (std::size_t i = from; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return -1;
    v = v * 10 + (s[i] - '0');
    if (v > 100) return -1;
  }
  return v;
}

}  // namespace

std::string KernelFunction::name() const {
  switch (id) {
    case KernelId::const_one:
      return "1";
    case KernelId::coordinate:
      return "x" + std::to_string(alpha + 1);
    case KernelId::ah_v0:
      return "V0";
    case KernelId::ah_valpha:
      return "V" + std::to_string(alpha + 1);
  }
  return "?";
}

ScalarJet KernelFunction::jet(const ChartPoint& p) const {
  const auto x = variables(p);
  const HyperDual v = kernel_value<HyperDual>(*this, p.chart, p.n,
                                              std::span<const HyperDual>(x.data(), p.n));
  ScalarJet out;
  out.at = p;
  out.value = v.value();
  out.grad = v.gradient();
  out.hess = v.hessian();
  return out;
}

double KernelFunction::value(const ChartPoint& p) const {
  return kernel_value<double>(*this, p.chart, p.n, std::span<const double>(p.coords.data(), p.n));
}

std::string ConformalKilling::name() const {
  switch (id) {
    case FieldId::dilation:
      return "dilation";
    case FieldId::inverted_translation:
    case FieldId::ah_xalpha:
      return "X" + std::to_string(alpha + 1);
    case FieldId::ah_x0:
      return "X0";
  }
  return "?";
}

VectorJet ConformalKilling::jet(const ChartPoint& p) const {
  const auto x = variables(p);
  const auto v = field_value<HyperDual>(*this, p.chart, p.n,
                                        std::span<const HyperDual>(x.data(), p.n));
  VectorJet out;
  out.at = p;
  for (int i = 0; i < p.n; ++i) {
    out.x[i] = v[i].value();
    for (int j = 0; j < p.n; ++j) out.dx[j][i] = v[i].d(j);
  }
  return out;
}

KernelFunction ConformalKilling::paired_kernel() const {
  switch (id) {
    case FieldId::dilation:
      return {KernelId::const_one, 0};
    case FieldId::inverted_translation:
      return {KernelId::coordinate, alpha};
    case FieldId::ah_x0:
      return {KernelId::ah_v0, 0};
    case FieldId::ah_xalpha:
      return {KernelId::ah_valpha, alpha};
  }
  return {};
}

double ConformalKilling::pairing_constant(int n) const {
  return id == FieldId::inverted_translation ? 2.0 * n : -static_cast<double>(n);
}

std::vector<KernelFunction> kernel_basis(const MetricSpec& spec) {
  std::vector<KernelFunction> out;
  const bool hyp = is_hyperbolic(spec);
  out.push_back({hyp ? KernelId::ah_v0 : KernelId::const_one, 0});
  const KernelId id = hyp ? KernelId::ah_valpha : KernelId::coordinate;
  for (int a = 0; a < spec.n; ++a) out.push_back({id, a});
  return out;
}

std::vector<ConformalKilling> conformal_basis(const MetricSpec& spec) {
  std::vector<ConformalKilling> out;
  const bool hyp = is_hyperbolic(spec);
  out.push_back({hyp ? FieldId::ah_x0 : FieldId::dilation, 0});
  for (int a = 0; a < spec.n; ++a)
    out.push_back({hyp ? FieldId::ah_xalpha : FieldId::inverted_translation, a});
  return out;
}

KernelFunction kernel_from_name(const std::string& name, const MetricSpec& spec) {
  const bool hyp = is_hyperbolic(spec);
  int idx = -1;
  if (name == "1" || name == "const" || name == "one") {
    idx = 0;
  } else if (!name.empty() && (name[0] == 'V' || name[0] == 'v') && hyp) {
    idx = parse_index(name, 1);
  } else if (!name.empty() && name[0] == 'x' && !hyp) {
    idx = parse_index(name, 1);
    if (idx == 0) idx = -1;
  }
  if (idx < 0 || idx > spec.n)
    throw PreconditionError("unknown kernel function '" + name + "' for n = " +
                            std::to_string(spec.n));
  if (idx == 0) return {hyp ? KernelId::ah_v0 : KernelId::const_one, 0};
  return {hyp ? KernelId::ah_valpha : KernelId::coordinate, idx - 1};
}

ConformalKilling field_from_name(const std::string& name, const MetricSpec& spec) {
  const bool hyp = is_hyperbolic(spec);
  int idx = -1;
  if (name == "dilation" && !hyp) {
    idx = 0;
  } else if (!name.empty() && (name[0] == 'X' || name[0] == 'x')) {
    idx = parse_index(name, 1);
  }
  if (idx < 0 || idx > spec.n)
    throw PreconditionError("unknown conformal Killing field '" + name + "' for n = " +
                            std::to_string(spec.n));
  if (idx == 0) return {hyp ? FieldId::ah_x0 : FieldId::dilation, 0};
  return {hyp ? FieldId::ah_xalpha : FieldId::inverted_translation, idx - 1};
}

ScalarJet divergence_jet(const MetricSpec& background, const ConformalKilling& x,
                         const ChartPoint& p) {
  const MetricKind kind = background.kind;
  if (kind != MetricKind::euclidean && kind != MetricKind::hyperbolic_polar &&
      kind != MetricKind::hyperbolic_area)
    throw UnsupportedError("divergence jets are available for the model metrics only");
  if (p.chart != chart_of(background) || p.n != background.n)
    throw ChartMismatch("point is not in the chart of the background metric");
  const int n = p.n;
  using DH = Dual<HyperDual>;
  const auto hx = variables(p);
  const std::span<const HyperDual> hs(hx.data(), n);

  // delta X = -(1/mu) d_i (mu X^i), mu = sqrt(det b). The sum d_i(mu X^i)
  // is the tangent part of a nested evaluation along each axis.
  HyperDual flux(0.0);
  for (int dir = 0; dir < n; ++dir) {
    std::array<DH, kMaxDim> dx{};
    for (int i = 0; i < n; ++i) dx[i] = DH(hx[i], HyperDual(i == dir ? 1.0 : 0.0));
    const std::span<const DH> ds(dx.data(), n);
    const DH mu = volume_density<DH>(kind, n, ds);
    const auto field = field_value<DH>(x, p.chart, n, ds);
    flux += (mu * field[dir]).d;
  }
  const HyperDual mu = volume_density<HyperDual>(kind, n, hs);
  const HyperDual div = -(flux / mu);
  ScalarJet out;
  out.at = p;
  out.value = div.value();
  out.grad = div.gradient();
  out.hess = div.hessian();
  return out;
}

}  // namespace asym
