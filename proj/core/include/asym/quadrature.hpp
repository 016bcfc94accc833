#pragma once

// Product quadrature on coordinate spheres and annuli.
//
// The rule on S^{n-1} is built in hyperspherical angles: psi_k (k < n-1)
// uses Gauss-Gegenbauer nodes in cos psi_k for the weight
// (1 - t^2)^{(n-2-k)/2} (Gauss-Legendre when the exponent vanishes), and the
// azimuth uses equally spaced nodes. With degree/2 + 1 polar and degree + 2
// azimuthal nodes the rule integrates spherical polynomials of total degree
// `degree` exactly.
//
// Node values are computed concurrently; the weighted sum is always reduced
// in node order with a fixed pairwise tree, so results are bit-identical for
// every thread count.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "asym/jets.hpp"
#include "asym/metric.hpp"

namespace asym {

inline constexpr int kMaxDegree = 60;

struct SphereRule {
  int n = 3;
  int degree = 0;
  std::vector<Vec> units;   // points of the unit sphere
  std::vector<Vec> angles;  // matching hyperspherical angles
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
};

// Throws UnsupportedError unless n in {3, 4, 5} and 0 <= degree <= 60.
SphereRule sphere_rule(int n, int degree);

// Gauss rule for the weight (1 - t^2)^a on [-1, 1] (Golub-Welsch).
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_gegenbauer(int count, double a);
GaussRule gauss_legendre(int count);

// Degree of the embedded rule used for error estimates.
int embedded_degree(int degree);

struct SphereNode {
  ChartPoint point;
  Vec unit{};
  std::size_t index = 0;
};

// The integrand must be a pure function; it may be called concurrently.
using PointIntegrand = std::function<double(const SphereNode&)>;

// Area and volume elements of coordinate spheres and annuli.
//
// `coordinate` integrates against the pulled-back round measure only
// (r^{n-1} dsigma in cartesian charts, dpsi_1...dpsi_{n-1} expressed against
// dsigma in polar charts); integrands that form their own area element use
// it. `of_metric` uses the measure induced by a metric.
class Measure {
 public:
  static Measure coordinate(ChartKind chart, int n);
  static Measure of_metric(const MetricSpec& spec);
  static Measure background(const MetricSpec& spec) { return of_metric(background_of(spec)); }

  ChartKind chart() const { return chart_; }
  int dim() const { return n_; }

  // Density of the area of S_r against dsigma (unit-sphere measure).
  double area_element(const ChartPoint& p) const;
  // Density of the volume against dr dsigma.
  double volume_element(const ChartPoint& p) const;

 private:
  ChartKind chart_ = ChartKind::cartesian;
  int n_ = 3;
  bool has_metric_ = false;
  MetricSpec spec_;
};

// Area element J of S_r for metric matrix g at p: sqrt(det g) |dF|_g times
// the chart factor relating coordinate measure to dsigma.
double sphere_area_element(const Mat& g, const ChartPoint& p);
// Chart factor alone: r^{n-1} (cartesian) or 1 / sqrt(det round) (polar).
double chart_area_factor(const ChartPoint& p);

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t nodes_used = 0;
};

struct QuadOptions {
  int threads = 0;  // 0: ASYM_THREADS from the environment, else hardware
};

// Thread count used when QuadOptions::threads is 0.
int default_thread_count();

QuadratureResult integrate_sphere(const PointIntegrand& f, double r, const SphereRule& rule,
                                  const Measure& measure, const QuadOptions& opts = {});

QuadratureResult integrate_annulus(const PointIntegrand& f, double r0, double r1,
                                   const SphereRule& rule, int radial_degree,
                                   const Measure& measure, const QuadOptions& opts = {});

// Sum in a fixed pairwise order.
double pairwise_sum(std::span<const double> values);

// Evaluates f(i) for i in [0, count) on `threads` workers and returns the
// values in index order. An exception thrown for some index is rethrown
// after all workers finish; the one with the smallest index wins.
std::vector<double> parallel_evaluate(std::size_t count,
                                      const std::function<double(std::size_t)>& f,
                                      int threads);

}  // namespace asym
