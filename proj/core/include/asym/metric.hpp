#pragma once

// Catalog of reference geometries with analytic 2-jets.
//
//   euclidean                 e, cartesian chart
//   hyperbolic_polar          b = dr^2 + sinh^2 r g_S, geodesic polar chart
//   hyperbolic_area           b = (1+r^2)^-1 dr^2 + r^2 g_S, area-radius chart
//   schwarzschild_conformal   (1 + m / (2|x-c|^{n-2}))^{4/(n-2)} e
//   kottler                   (1 + r^2 - 2m/r^{n-2})^-1 dr^2 + r^2 g_S
//   perturbation              catalog base + user components h_ij
//   expression                user components g_ij in a chosen chart
//
// Every metric comes with its background (euclidean or one of the hyperbolic
// charts) and the deviation h = g - b is available as its own exact jet, so
// that flux integrands never subtract two nearly equal numbers.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asym/expr.hpp"
#include "asym/geometry.hpp"
#include "asym/jets.hpp"

namespace asym {

enum class MetricKind {
  euclidean,
  hyperbolic_polar,
  hyperbolic_area,
  schwarzschild_conformal,
  kottler,
  perturbation,
  expression,
};

std::string_view to_string(MetricKind kind);
MetricKind metric_kind_from_string(std::string_view name);

struct MetricSpec {
  MetricKind kind = MetricKind::euclidean;
  int n = 3;
  double m = 0.0;
  Vec center{};  // schwarzschild_conformal only

  // perturbation: the catalog metric being perturbed (never perturbation or
  // expression itself); m and center are shared with it.
  MetricKind base = MetricKind::euclidean;
  // expression: chart the components are written in.
  ChartKind expr_chart = ChartKind::cartesian;
  // Upper triangle, row-major: (0,0), (0,1), ..., (0,n-1), (1,1), ...
  std::vector<ExprAst> components;
  std::vector<std::string> param_names;
  std::vector<double> param_values;
  // Declared decay rate of g - b (r^-tau flat, e^{-tau r} hyperbolic); 0 if
  // not declared.
  double decay = 0.0;

  static MetricSpec euclidean(int n);
  static MetricSpec hyperbolic_polar(int n);
  static MetricSpec hyperbolic_area(int n);
  static MetricSpec schwarzschild(int n, double m, const Vec& center = {});
  static MetricSpec kottler(int n, double m);
};

// Index of component (i, j) in MetricSpec::components.
int component_index(int i, int j, int n);

// Chart the metric is written in.
ChartKind chart_of(const MetricSpec& spec);

// True for metrics asymptotic to hyperbolic space.
bool is_hyperbolic(const MetricSpec& spec);

// Einstein constant of the background: Ric^b = lambda (n-1) b.
double background_lambda(const MetricSpec& spec);

// Euclidean for flat-type metrics, the hyperbolic chart of the metric for
// hyperbolic-type metrics.
MetricSpec background_of(const MetricSpec& spec);

// Throws PreconditionError / UnsupportedError for malformed specs.
void validate(const MetricSpec& spec);

// Exact 2-jets of g and of h = g - background at p.
MetricJet metric_jet(const MetricSpec& spec, const ChartPoint& p);
MetricJet deviation_jet(const MetricSpec& spec, const ChartPoint& p);

struct MetricJets {
  MetricJet g;
  MetricJet b;
  MetricJet h;
};
MetricJets metric_jets(const MetricSpec& spec, const ChartPoint& p);

// Curvature of g relative to its background.
RelativeCurvature relative_curvature(const MetricSpec& spec, const ChartPoint& p);

// Inner radius of the excised region (0 if none). Points at chart radius
// <= this value are rejected.
double excised_radius(const MetricSpec& spec);

}  // namespace asym
