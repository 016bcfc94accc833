#include "asym/verify.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "asym/charts.hpp"
#include "asym/errors.hpp"
#include "asym/geometry.hpp"

namespace asym {
namespace {

// Degree of the cheap rules used only for magnitudes.
constexpr int kScaleDegree = 10;

bool is_model(const MetricSpec& spec) {
  return spec.kind == MetricKind::euclidean || spec.kind == MetricKind::hyperbolic_polar ||
         spec.kind == MetricKind::hyperbolic_area;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

IdentityReport pohozaev_check(const MetricSpec& spec, const ConformalKilling& x, double r0,
                              double r1, int degree, const Tolerances& tol,
                              const QuadOptions& quad) {
  validate(spec);
  if (x.hyperbolic() != is_hyperbolic(spec))
    throw PreconditionError("field " + x.name() + " does not live in the chart of the metric");
  if (r0 == r1) throw PreconditionError("annulus radii must differ");
  const int n = spec.n;
  const double lambda = background_lambda(spec);
  const double sign = r1 > r0 ? 1.0 : -1.0;
  const double lo = chart_radius_at(spec, std::min(r0, r1));
  const double hi = chart_radius_at(spec, std::max(r0, r1));
  const SphereRule rule = sphere_rule(n, degree);
  const SphereRule coarse = sphere_rule(n, std::min(degree, kScaleDegree));
  const Measure coord = Measure::coordinate(chart_of(spec), n);

  auto boundary_term = [&](const SphereNode& node) {
    const MetricJets j = metric_jets(spec, node.point);
    const RelativeCurvature c = curvature_relative(j.g, j.b, j.h, lambda);
    const SphereBoundary bd = sphere_boundary(j.g.g, node.point);
    return contract(c.einstein, x.jet(node.point).x, bd.nu, n) * bd.density;
  };
  auto bulk_term = [&](const SphereNode& node) {
    const MetricJets j = metric_jets(spec, node.point);
    const RelativeCurvature c = curvature_relative(j.g, j.b, j.h, lambda);
    const double div = divergence_vector(j.g, x.jet(node.point));
    return c.scal * div * std::sqrt(determinant(j.g.g, n));
  };
  auto abs_of = [](auto f) { return [f](const SphereNode& node) { return std::fabs(f(node)); }; };

  const QuadratureResult outer = integrate_sphere(boundary_term, hi, rule, coord, quad);
  const QuadratureResult inner = integrate_sphere(boundary_term, lo, rule, coord, quad);
  const QuadratureResult bulk = integrate_annulus(bulk_term, lo, hi, rule, degree, coord, quad);
  const double coef = (n - 2.0) / (2.0 * n);

  IdentityReport out;
  out.name = "pohozaev[" + x.name() + "]";
  out.lhs = sign * (outer.value - inner.value);
  out.rhs = sign * coef * bulk.value;
  out.lhs_error = outer.error_estimate + inner.error_estimate;
  out.rhs_error = coef * bulk.error_estimate;
  out.residual = std::fabs(out.lhs - out.rhs);

  const double abs_outer = integrate_sphere(abs_of(boundary_term), hi, coarse, coord, quad).value;
  const double abs_inner = integrate_sphere(abs_of(boundary_term), lo, coarse, coord, quad).value;
  const double abs_bulk =
      integrate_annulus(abs_of(bulk_term), lo, hi, coarse, kScaleDegree, coord, quad).value;
  out.scale = std::max({abs_outer, abs_inner, coef * abs_bulk});
  const double denom = std::max({std::fabs(out.lhs), std::fabs(out.rhs), out.scale});
  out.relative_residual = denom > 0.0 ? out.residual / denom : 0.0;
  out.pass = out.residual <= std::max(tol.abs_tol, tol.rel_tol * denom);

  // Conformal Killing defect of X for g, on the outer sphere.
  double full = 0.0;
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    const ChartPoint p = sphere_point(
        chart_of(spec), n, hi, std::span<const double>(coarse.units[i].data(), n),
        std::span<const double>(coarse.angles[i].data(), n - 1));
    const KillingParts k = killing_operator(metric_jet(spec, p), x.jet(p));
    out.killing_defect = std::max(out.killing_defect, max_abs(k.trace_free, n));
    full = std::max(full, max_abs(k.full, n));
  }
  if (out.killing_defect > tol.abs_tol * std::max(1.0, full))
    out.warnings.push_back(x.name() + " is not conformal Killing for this metric (defect " +
                           fmt(out.killing_defect) + "); the identity holds only up to the " +
                           "trace-free term");
  return out;
}

std::vector<ChartPoint> sample_points(const MetricSpec& spec, int count, std::uint64_t seed,
                                      double rmin, double rmax) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = spec.n;
  const ChartKind chart = chart_of(spec);
  std::vector<ChartPoint> out;
  for (int k = 0; k < count; ++k) {
    const double r = rmin + (rmax - rmin) * unit(rng);
    ChartPoint p;
    p.chart = chart;
    p.n = n;
    if (chart == ChartKind::cartesian) {
      Vec d{};
      double s = 0.0;
      do {
        s = 0.0;
        for (int i = 0; i < n; ++i) {
          d[i] = normal(rng);
          s += d[i] * d[i];
        }
      } while (s < 1e-12);
      for (int i = 0; i < n; ++i) p.coords[i] = r * d[i] / std::sqrt(s);
    } else {
      p.coords[0] = chart_radius_at(spec, r);
      // Polar angles kept away from the coordinate poles.
      for (int i = 1; i < n - 1; ++i) p.coords[i] = 0.1 + (std::numbers::pi - 0.2) * unit(rng);
      p.coords[n - 1] = 2.0 * std::numbers::pi * unit(rng);
    }
    out.push_back(p);
  }
  return out;
}

KernelReport kernel_identity_check(const MetricSpec& spec, const ConformalKilling& x,
                                  const std::vector<ChartPoint>& points, const Tolerances& tol) {
  validate(spec);
  const int n = spec.n;
  const double lambda = background_lambda(spec);
  KernelReport out;
  out.name = "kernel_identity[" + x.name() + "]";
  out.lambda = lambda;
  // Einstein check from the plain curvature of g.
  double scale = 1.0;
  for (const ChartPoint& p : points) {
    const MetricJet g = metric_jet(spec, p);
    const CurvatureBundle c = curvature(g);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double target = lambda * (n - 1) * g.g[i][j];
        scale = std::max(scale, std::fabs(target));
        out.einstein_defect = std::max(out.einstein_defect, std::fabs(c.ricci[i][j] - target));
      }
  }
  if (out.einstein_defect > tol.abs_tol * scale)
    throw PreconditionError("metric '" + std::string(to_string(spec.kind)) +
                            "' is not Einstein: defect sup |Ric - lambda (n-1) g| = " +
                            fmt(out.einstein_defect));
  if (!is_model(spec))
    throw UnsupportedError("the kernel identity check needs one of the model metrics");
  for (const ChartPoint& p : points) {
    const MetricJet g = metric_jet(spec, p);
    const ScalarJet u = divergence_jet(spec, x, p);
    const Mat hess = hessian(g, u);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out.max_residual =
            std::max(out.max_residual, std::fabs(hess[i][j] + lambda * u.value * g.g[i][j]));
    out.max_trace_residual = std::max(
        out.max_trace_residual, std::fabs(laplacian(g, u) - n * lambda * u.value));
    ++out.samples;
  }
  out.pass = out.max_residual < tol.abs_tol && out.max_trace_residual < tol.abs_tol;
  return out;
}

std::vector<PairingReport> kernel_pairing_check(const MetricSpec& spec,
                                                const std::vector<ChartPoint>& points,
                                                const Tolerances& tol) {
  validate(spec);
  const MetricSpec b = background_of(spec);
  const int n = spec.n;
  const auto kernels = kernel_basis(spec);
  const auto fields = conformal_basis(spec);
  std::vector<PairingReport> out;
  for (std::size_t i = 0; i < kernels.size(); ++i) {
    PairingReport r;
    r.name = kernels[i].name() + "/" + fields[i].name();
    const double c = fields[i].pairing_constant(n);
    for (const ChartPoint& p : points) {
      const MetricJet bj = metric_jet(b, p);
      const CurvatureBundle curv = curvature(bj);
      const ScalarJet v = kernels[i].jet(p);
      const VectorJet x = fields[i].jet(p);
      r.max_dscal_adjoint = std::max(r.max_dscal_adjoint, max_abs(dscal_adjoint(bj, v, curv), n));
      r.max_pairing = std::max(r.max_pairing, std::fabs(divergence_vector(bj, x) - c * v.value));
      r.max_killing = std::max(r.max_killing, max_abs(killing_operator(bj, x).trace_free, n));
      ++r.samples;
    }
    r.pass = r.max_dscal_adjoint < tol.abs_tol && r.max_pairing < tol.abs_tol &&
             r.max_killing < tol.abs_tol;
    out.push_back(r);
  }
  return out;
}

EquivalenceRow compare_charges(std::string name, RadialSeries classical, RadialSeries ricci) {
  EquivalenceRow row;
  row.name = std::move(name);
  row.classical = std::move(classical);
  row.ricci = std::move(ricci);
  row.difference = row.ricci.limit - row.classical.limit;
  row.combined_error = row.classical.limit_error + row.ricci.limit_error;
  const double floor = kEquivalenceFloor * std::max(1.0, std::fabs(row.classical.limit));
  row.pass = std::fabs(row.difference) <= std::max(row.combined_error, floor);
  return row;
}

EquivalenceReport equivalence_report(const MetricSpec& spec, std::span<const double> radii,
                                     const ChargeOptions& opts) {
  validate(spec);
  const int n = spec.n;
  const bool hyp = is_hyperbolic(spec);
  EquivalenceReport out;
  out.decay = decay_rate(spec, radii);
  std::vector<std::string> hyp_warn;
  if (!out.decay.vanishing && !out.decay.above_threshold)
    hyp_warn.push_back("measured decay rate " + fmt(out.decay.tau) + " does not exceed " +
                       fmt(out.decay.threshold));

  // Integrability proxy: |Scal - Scal_b| times the area growth of S_r.
  const SphereRule rule = sphere_rule(n, 8);
  for (double r : radii) {
    const double rc = chart_radius_at(spec, r);
    double sup = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const ChartPoint p =
          sphere_point(chart_of(spec), n, rc, std::span<const double>(rule.units[i].data(), n),
                       std::span<const double>(rule.angles[i].data(), n - 1));
      sup = std::max(sup, std::fabs(relative_curvature(spec, p).scal_shift));
    }
    const double growth = hyp ? std::pow(std::sinh(r), n - 1) : std::pow(r, n - 1);
    out.scal_proxy.push_back(sup * growth);
  }
  const double first = out.scal_proxy.front(), last = out.scal_proxy.back();
  out.scal_integrable = last <= first || last <= 1e-12;
  if (!out.scal_integrable)
    hyp_warn.push_back("scalar curvature deviation does not decay faster than the area growth");

  auto add_row = [&](EquivalenceRow row) {
    for (const auto& w : hyp_warn) row.warnings.push_back(w);
    out.rows.push_back(std::move(row));
  };

  if (hyp) {
    const auto kernels = kernel_basis(spec);
    for (int i = 0; i <= n; ++i)
      add_row(compare_charges("M[" + kernels[i].name() + "]",
                              ah_mass(spec, kernels[i], radii, opts),
                              ah_ricci_charge(spec, i, radii, opts)));
  } else {
    RadialSeries m = classical_mass(spec, radii, opts);
    RadialSeries mr = ricci_mass(spec, radii, opts);
    const double mass = m.limit;
    const double mass_err = m.limit_error;
    add_row(compare_charges("mass", std::move(m), std::move(mr)));
    if (std::fabs(mass) <= std::max(mass_err, kEquivalenceFloor)) {
      out.warnings.push_back("mass is zero within its error; centers of mass are not compared");
    } else {
      out.rt = rt_diagnostics(spec, radii);
      for (int a = 0; a < n; ++a) {
        EquivalenceRow row = compare_charges("center.x" + std::to_string(a + 1),
                                             classical_center(spec, a, radii, mass, opts),
                                             ricci_center(spec, a, radii, mass, opts));
        if (!out.rt->pass)
          row.warnings.push_back("parity (RT) decay exponent " + fmt(out.rt->exponent) +
                                 " is below " + fmt(out.rt->required));
        add_row(std::move(row));
      }
    }
  }
  for (const auto& w : hyp_warn) out.warnings.push_back(w);
  out.pass = std::all_of(out.rows.begin(), out.rows.end(),
                         [](const EquivalenceRow& r) { return r.pass; });
  return out;
}

}  // namespace asym
