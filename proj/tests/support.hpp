#pragma once

// Shared oracles for the test suites: random expressions, central finite
// differences and closed-form sphere moments.

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "asym/expr.hpp"
#include "asym/jets.hpp"
#include "asym/metric.hpp"
#include "asym/tensor.hpp"

namespace asym::test {

inline ChartPoint cartesian(std::initializer_list<double> xs) {
  ChartPoint p;
  p.chart = ChartKind::cartesian;
  p.n = static_cast<int>(xs.size());
  int i = 0;
  for (double x : xs) p.coords[static_cast<std::size_t>(i++)] = x;
  return p;
}

inline ChartPoint polar(ChartKind chart, double r, std::initializer_list<double> angles) {
  ChartPoint p;
  p.chart = chart;
  p.n = static_cast<int>(angles.size()) + 1;
  p.coords[0] = r;
  int i = 1;
  for (double a : angles) p.coords[static_cast<std::size_t>(i++)] = a;
  return p;
}

// Random text over x1..xn (and r) whose value is finite on
// 0.3 <= |x| <= 3. Depth counts nested operations.
inline std::string random_expression(std::mt19937_64& rng, int n, int depth) {
  std::uniform_int_distribution<int> pick(0, 99);
  std::uniform_real_distribution<double> coef(0.5, 2.0);
  auto leaf = [&]() -> std::string {
    const int k = pick(rng) % (n + 2);
    if (k < n) return "x" + std::to_string(k + 1);
    if (k == n) return "r";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", coef(rng));
    return buf;
  };
  if (depth <= 0) return leaf();
  const std::string a = random_expression(rng, n, depth - 1);
  const std::string b = random_expression(rng, n, depth - 1);
  switch (pick(rng) % 12) {
    case 0:
      return "(" + a + " + " + b + ")";
    case 1:
      return "(" + a + " - " + b + ")";
    case 2:
      return "(" + a + ") * (" + b + ")";
    case 3:
      return "(" + a + ") / (1.5 + (" + b + ")^2)";
    case 4:
      return "sin(" + a + ")";
    case 5:
      return "cos(" + a + ")";
    case 6:
      return "exp(0.3 * tanh(" + a + "))";
    case 7:
      return "sqrt(2 + (" + a + ")^2)";
    case 8:
      return "log(1 + (" + a + ")^2)";
    case 9:
      return "tanh(" + a + ")";
    case 10:
      return "cosh(0.5 * sin(" + a + "))";
    default:
      return "pow(1.2 + sin(" + a + "), 1.5)";
  }
}

// Random cartesian point with 0.5 <= |x| <= 3.
inline ChartPoint random_cartesian(std::mt19937_64& rng, int n, double rmin = 0.5, double rmax = 3.0) {
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> radius(rmin, rmax);
  Vec x{};
  double norm = 0.0;
  for (int i = 0; i < n; ++i) {
    x[static_cast<std::size_t>(i)] = gauss(rng);
    norm += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
  }
  const double s = radius(rng) / std::sqrt(norm);
  ChartPoint p;
  p.n = n;
  for (int i = 0; i < n; ++i) p.coords[static_cast<std::size_t>(i)] = s * x[static_cast<std::size_t>(i)];
  return p;
}

// Expression metric in `chart` from upper-triangle component texts.
inline MetricSpec expression_metric(int n, ChartKind chart, const std::vector<std::string>& upper,
                                    std::vector<std::string> names = {},
                                    std::vector<double> values = {}) {
  MetricSpec s;
  s.kind = MetricKind::expression;
  s.n = n;
  s.expr_chart = chart;
  s.param_names = names;
  s.param_values = std::move(values);
  for (const std::string& t : upper) s.components.push_back(parse(t, n, chart, names));
  validate(s);
  return s;
}

// Catalog metric `base` plus user components h_ij (upper triangle).
inline MetricSpec perturbation_metric(const MetricSpec& base, const std::vector<std::string>& upper) {
  MetricSpec s = base;
  s.kind = MetricKind::perturbation;
  s.base = base.kind;
  for (const std::string& t : upper) s.components.push_back(parse(t, s.n, chart_of(base)));
  validate(s);
  return s;
}

inline ChartPoint shifted(const ChartPoint& p, int k, double h) {
  ChartPoint q = p;
  q.coords[static_cast<std::size_t>(k)] += h;
  return q;
}

using ScalarField = std::function<double(const ChartPoint&)>;

inline Vec fd_gradient(const ScalarField& f, const ChartPoint& p, double h) {
  Vec g{};
  for (int k = 0; k < p.n; ++k)
    g[static_cast<std::size_t>(k)] = (f(shifted(p, k, h)) - f(shifted(p, k, -h))) / (2.0 * h);
  return g;
}

inline Mat fd_hessian(const ScalarField& f, const ChartPoint& p, double h) {
  Mat H{};
  const double f0 = f(p);
  for (int k = 0; k < p.n; ++k) {
    for (int l = 0; l < p.n; ++l) {
      double v = 0.0;
      if (k == l) {
        v = (f(shifted(p, k, h)) - 2.0 * f0 + f(shifted(p, k, -h))) / (h * h);
      } else {
        v = (f(shifted(shifted(p, k, h), l, h)) - f(shifted(shifted(p, k, h), l, -h)) -
             f(shifted(shifted(p, k, -h), l, h)) + f(shifted(shifted(p, k, -h), l, -h))) /
            (4.0 * h * h);
      }
      H[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] = v;
    }
  }
  return H;
}

// Metric jet whose derivatives come from central differences of the metric
// values alone.
inline MetricJet fd_metric_jet(const MetricSpec& spec, const ChartPoint& p, double h) {
  MetricJet j;
  j.at = p;
  j.g = metric_jet(spec, p).g;
  const int n = p.n;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const ScalarField f = [&](const ChartPoint& q) {
        return metric_jet(spec, q).g[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      };
      const Vec g = fd_gradient(f, p, h);
      const Mat H = fd_hessian(f, p, h);
      for (int k = 0; k < n; ++k) {
        j.dg[k][a][b] = g[static_cast<std::size_t>(k)];
        for (int l = 0; l < n; ++l) j.ddg[k][l][a][b] = H[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
      }
    }
  }
  return j;
}

inline double max_abs(const Vec& v, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s = std::max(s, std::fabs(v[static_cast<std::size_t>(i)]));
  return s;
}

// Integral of u_1^{a_1} ... u_n^{a_n} over the unit sphere S^{n-1}:
// 2 prod Gamma((a_i + 1)/2) / Gamma((sum a_i + n)/2), zero if any a_i is odd.
inline double sphere_moment(const std::vector<int>& a) {
  double lg = 0.0;
  int total = 0;
  for (int e : a) {
    if (e % 2) return 0.0;
    lg += std::lgamma((e + 1) / 2.0);
    total += e;
  }
  lg -= std::lgamma((total + static_cast<int>(a.size())) / 2.0);
  return 2.0 * std::exp(lg);
}

}  // namespace asym::test
