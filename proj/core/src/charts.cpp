#include "asym/charts.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "asym/errors.hpp"

namespace asym {

std::string_view to_string(ChartKind kind) {
  switch (kind) {
    case ChartKind::cartesian:
      return "cartesian";
    case ChartKind::polar_geodesic:
      return "polar_geodesic";
    case ChartKind::polar_area:
      return "polar_area";
  }
  return "?";
}

ChartKind chart_kind_from_string(std::string_view name) {
  if (name == "cartesian") return ChartKind::cartesian;
  if (name == "polar_geodesic") return ChartKind::polar_geodesic;
  if (name == "polar_area") return ChartKind::polar_area;
  throw Error("unknown chart kind '" + std::string(name) + "'");
}

double sphere_volume(int n) {
  // omega_{n-1} = 2 pi^{n/2} / Gamma(n/2)
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double chart_radius(const ChartPoint& p) {
  if (is_polar(p.chart)) return p.coords[0];
  double s = 0.0;
  for (int i = 0; i < p.n; ++i) s += p.coords[i] * p.coords[i];
  return std::sqrt(s);
}

ChartPoint sphere_point(ChartKind chart, int n, double radius, std::span<const double> unit,
                        std::span<const double> angles) {
  ChartPoint p;
  p.chart = chart;
  p.n = n;
  if (chart == ChartKind::cartesian) {
    for (int i = 0; i < n; ++i) p.coords[i] = radius * unit[i];
  } else {
    p.coords[0] = radius;
    for (int i = 0; i + 1 < n; ++i) p.coords[i + 1] = angles[i];
  }
  return p;
}

Vec radial_covector(const ChartPoint& p) {
  Vec out{};
  if (is_polar(p.chart)) {
    out[0] = 1.0;
    return out;
  }
  const double r = chart_radius(p);
  if (r == 0.0) throw DomainError("radial direction undefined at the origin");
  for (int i = 0; i < p.n; ++i) out[i] = p.coords[i] / r;
  return out;
}

namespace {

void require_polar_pair(ChartKind from, ChartKind to) {
  if (from == to) return;
  if (!is_polar(from) || !is_polar(to))
    throw ChartMismatch("no transfer between " + std::string(to_string(from)) + " and " +
                        std::string(to_string(to)) + " charts");
}

// Source radius as a function of the target radius, as a HyperDual in the
// target radial variable.
HyperDual source_radius(ChartKind from, ChartKind to, const HyperDual& t) {
  if (from == to) return t;
  if (from == ChartKind::polar_geodesic) return asinh(t);  // r = asinh(rho)
  return sinh(t);                                          // rho = sinh(r)
}

}  // namespace

ChartTransfer chart_transfer(const ChartPoint& p, ChartKind to) {
  require_polar_pair(p.chart, to);
  ChartTransfer out;
  out.point = p;
  out.point.chart = to;
  if (p.chart == to) {
    out.source_radius = chart_radius(p);
    return out;
  }
  if (p.coords[0] <= 0.0) throw DomainError("polar radius must be positive");
  // Target radius of the image point.
  out.point.coords[0] =
      p.chart == ChartKind::polar_geodesic ? std::sinh(p.coords[0]) : std::asinh(p.coords[0]);
  const HyperDual s =
      source_radius(p.chart, to, HyperDual::variable(out.point.coords[0], 0, 1));
  out.source_radius = s.value();
  out.d1 = s.d(0);
  out.d2 = s.dd(0, 0);
  return out;
}

MetricJet transfer_jet(const MetricJet& jet, ChartKind to) {
  require_polar_pair(jet.at.chart, to);
  if (jet.at.chart == to) return jet;
  const int n = jet.dim();
  const ChartTransfer tr = chart_transfer(jet.at, to);

  // Source coordinates as HyperDuals in the target coordinates.
  std::array<HyperDual, kMaxDim> dx{};
  const HyperDual t = HyperDual::variable(tr.point.coords[0], 0, n);
  dx[0] = source_radius(jet.at.chart, to, t) - HyperDual(jet.at.coords[0]);
  for (int i = 1; i < n; ++i) dx[i] = HyperDual::variable(0.0, i, n);
  // Jacobian factor d(source radius)/d(target radius) with its own 2-jet,
  // read off the tangent part of a nested evaluation.
  const Dual<HyperDual> tt(t, HyperDual(1.0));
  const HyperDual jac =
      (jet.at.chart == ChartKind::polar_geodesic ? asinh(tt) : sinh(tt)).d;

  MetricJet out;
  out.at = tr.point;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // Second-order Taylor composition g_ij(x(y)).
      HyperDual comp(jet.g[i][j]);
      for (int k = 0; k < n; ++k) {
        comp += HyperDual(jet.dg[k][i][j]) * dx[k];
        for (int l = 0; l < n; ++l) comp += HyperDual(0.5 * jet.ddg[k][l][i][j]) * dx[k] * dx[l];
      }
      if (i == 0) comp *= jac;
      if (j == 0) comp *= jac;
      out.g[i][j] = comp.value();
      for (int k = 0; k < n; ++k) {
        out.dg[k][i][j] = comp.d(k);
        for (int l = 0; l < n; ++l) out.ddg[k][l][i][j] = comp.dd(k, l);
      }
    }
  return out;
}

}  // namespace asym
