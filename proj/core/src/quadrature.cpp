#include "asym/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numbers>
#include <string>
#include <thread>

#include "asym/charts.hpp"
#include "asym/errors.hpp"
#include "asym/geometry.hpp"

namespace asym {

GaussRule gauss_gegenbauer(int count, double a) {
  if (count < 1) throw PreconditionError("Gauss rule needs at least one node");
  // Jacobi matrix of the orthonormal polynomials for (1-t^2)^a: zero diagonal,
  // off-diagonal beta_k.
  std::vector<double> beta(count, 0.0);
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(count, count);
  for (int k = 1; k < count; ++k) {
    const double s = 2.0 * k + 2.0 * a;
    const double b2 = 4.0 * k * (k + a) * (k + a) * (k + 2.0 * a) / (s * s * (s + 1.0) * (s - 1.0));
    beta[k] = std::sqrt(b2);
    j(k, k - 1) = j(k - 1, k) = beta[k];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(j, Eigen::EigenvaluesOnly);
  const double mu0 = std::sqrt(std::numbers::pi) * std::tgamma(a + 1.0) / std::tgamma(a + 1.5);

  // Orthonormal q_0..q_{count-1} at t, the sum of their squares, and the
  // unnormalized p_count with its derivative (for Newton steps).
  struct Eval {
    double sum_sq, p, dp;
  };
  auto eval = [&](double t) {
    double q0 = 1.0 / std::sqrt(mu0), q1 = 0.0;
    double sum = q0 * q0;
    // Monic recurrence for p_count and p'_count.
    double pm = 1.0, pmm = 0.0, dpm = 0.0, dpmm = 0.0;
    for (int k = 0; k < count; ++k) {
      const double b2 = k > 0 ? beta[k] * beta[k] : 0.0;
      const double p = t * pm - b2 * pmm;
      const double dp = pm + t * dpm - b2 * dpmm;
      pmm = pm;
      pm = p;
      dpmm = dpm;
      dpm = dp;
      if (k + 1 < count) {
        const double q2 = (t * q0 - (k > 0 ? beta[k] * q1 : 0.0)) / beta[k + 1];
        q1 = q0;
        q0 = q2;
        sum += q0 * q0;
      }
    }
    return Eval{sum, pm, dpm};
  };

  GaussRule out;
  out.nodes.resize(count);
  out.weights.resize(count);
  for (int k = 0; k < count; ++k) {
    double t = eig.eigenvalues()(k);
    for (int it = 0; it < 3; ++it) {
      const Eval e = eval(t);
      if (e.dp == 0.0) break;
      t -= e.p / e.dp;
    }
    out.nodes[k] = t;
    out.weights[k] = 1.0 / eval(t).sum_sq;
  }
  // Exact symmetry about 0.
  for (int k = 0; k < count / 2; ++k) {
    const int m = count - 1 - k;
    const double t = 0.5 * (out.nodes[m] - out.nodes[k]);
    const double w = 0.5 * (out.weights[m] + out.weights[k]);
    out.nodes[k] = -t;
    out.nodes[m] = t;
    out.weights[k] = out.weights[m] = w;
  }
  if (count % 2 == 1) out.nodes[count / 2] = 0.0;
  return out;
}

GaussRule gauss_legendre(int count) { return gauss_gegenbauer(count, 0.0); }

int embedded_degree(int degree) { return std::max(0, degree - std::max(2, degree / 4)); }

SphereRule sphere_rule(int n, int degree) {
  if (n < 3 || n > 5)
    throw UnsupportedError("sphere rules are available for n in {3, 4, 5}, got " +
                           std::to_string(n));
  if (degree < 0 || degree > kMaxDegree)
    throw UnsupportedError("quadrature degree must lie in [0, " + std::to_string(kMaxDegree) +
                           "], got " + std::to_string(degree));
  const int polar = n - 2;
  std::vector<GaussRule> rules;
  for (int k = 0; k < polar; ++k)
    rules.push_back(gauss_gegenbauer(degree / 2 + 1, 0.5 * (n - 3 - k)));
  const int naz = degree + 2;

  SphereRule rule;
  rule.n = n;
  rule.degree = degree;
  std::vector<int> idx(polar, 0);
  while (true) {
    for (int a = 0; a < naz; ++a) {
      Vec angles{};
      double w = 2.0 * std::numbers::pi / naz;
      for (int k = 0; k < polar; ++k) {
        angles[k] = std::acos(rules[k].nodes[idx[k]]);
        w *= rules[k].weights[idx[k]];
      }
      angles[polar] = 2.0 * std::numbers::pi * (a + 0.5) / naz;
      Vec unit{};
      const std::span<const double> sp(angles.data(), n - 1);
      for (int i = 0; i < n; ++i) unit[i] = sphere_embedding<double>(sp, i, n);
      rule.units.push_back(unit);
      rule.angles.push_back(angles);
      rule.weights.push_back(w);
    }
    int k = polar - 1;
    while (k >= 0 && ++idx[k] == static_cast<int>(rules[k].nodes.size())) idx[k--] = 0;
    if (k < 0) break;
  }
  return rule;
}

double chart_area_factor(const ChartPoint& p) {
  const int n = p.n;
  if (!is_polar(p.chart)) return std::pow(chart_radius(p), n - 1);
  // dpsi = dsigma / prod_k sin^{n-1-k} psi_k
  double dens = 1.0;
  for (int k = 1; k < n - 1; ++k) dens *= std::pow(std::sin(p.coords[k]), n - 1 - k);
  return 1.0 / dens;
}

double sphere_area_element(const Mat& g, const ChartPoint& p) {
  const int n = p.n;
  const Mat inv = inverse_metric(g, n);
  const Vec df = radial_covector(p);
  const double norm = std::sqrt(contract(inv, df, df, n));
  return std::sqrt(determinant(g, n)) * norm * chart_area_factor(p);
}

Measure Measure::coordinate(ChartKind chart, int n) {
  Measure m;
  m.chart_ = chart;
  m.n_ = n;
  return m;
}

Measure Measure::of_metric(const MetricSpec& spec) {
  Measure m;
  m.chart_ = chart_of(spec);
  m.n_ = spec.n;
  m.has_metric_ = true;
  m.spec_ = spec;
  return m;
}

double Measure::area_element(const ChartPoint& p) const {
  if (!has_metric_) return chart_area_factor(p);
  if (spec_.kind == MetricKind::euclidean) return chart_area_factor(p);
  return sphere_area_element(metric_jet(spec_, p).g, p);
}

double Measure::volume_element(const ChartPoint& p) const {
  // Volume against dr dsigma: sqrt(det g) times the chart factor, with the
  // radial covector of unit coordinate length in both chart types.
  if (!has_metric_ || spec_.kind == MetricKind::euclidean) return chart_area_factor(p);
  const Mat g = metric_jet(spec_, p).g;
  return std::sqrt(determinant(g, p.n)) * chart_area_factor(p);
}

int default_thread_count() {
  if (const char* env = std::getenv("ASYM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min(v, 256L));
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

std::vector<double> parallel_evaluate(std::size_t count,
                                      const std::function<double(std::size_t)>& f,
                                      int threads) {
  std::vector<double> out(count, 0.0);
  if (threads <= 0) threads = default_thread_count();
  threads = static_cast<int>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::size_t> error_index(threads, count);
  auto work = [&](int t) {
    // Strided assignment keeps the load balanced across sphere rows.
    for (std::size_t i = t; i < count; i += threads) {
      try {
        out[i] = f(i);
      } catch (...) {
        errors[t] = std::current_exception();
        error_index[t] = i;
        return;
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  int first = -1;
  for (int t = 0; t < threads; ++t)
    if (errors[t] && (first < 0 || error_index[t] < error_index[first])) first = t;
  if (first >= 0) std::rethrow_exception(errors[first]);
  return out;
}

namespace {

std::string describe_point(const ChartPoint& p) {
  std::string s = "(";
  for (int i = 0; i < p.n; ++i) {
    if (i) s += ", ";
    s += std::to_string(p.coords[i]);
  }
  return s + ")";
}

SphereNode make_node(const SphereRule& rule, std::size_t i, ChartKind chart, double r) {
  SphereNode node;
  node.index = i;
  node.unit = rule.units[i];
  node.point = sphere_point(chart, rule.n, r, std::span<const double>(rule.units[i].data(), rule.n),
                            std::span<const double>(rule.angles[i].data(), rule.n - 1));
  return node;
}

double sphere_sum(const PointIntegrand& f, double r, const SphereRule& rule,
                  const Measure& measure, const QuadOptions& opts) {
  const std::vector<double> terms = parallel_evaluate(
      rule.size(),
      [&](std::size_t i) {
        const SphereNode node = make_node(rule, i, measure.chart(), r);
        const double v = f(node) * measure.area_element(node.point);
        if (!std::isfinite(v))
          throw QuadratureError("integrand is not finite at node " + std::to_string(i) + " " +
                                    describe_point(node.point),
                                i);
        return rule.weights[i] * v;
      },
      opts.threads);
  return pairwise_sum(terms);
}

double annulus_sum(const PointIntegrand& f, double r0, double r1, const SphereRule& rule,
                   int radial_degree, const Measure& measure, const QuadOptions& opts) {
  const GaussRule gl = gauss_legendre(radial_degree / 2 + 1);
  const std::size_t ns = rule.size();
  const double half = 0.5 * (r1 - r0), mid = 0.5 * (r1 + r0);
  const std::vector<double> terms = parallel_evaluate(
      gl.nodes.size() * ns,
      [&](std::size_t k) {
        const std::size_t a = k / ns, i = k % ns;
        const double r = mid + half * gl.nodes[a];
        SphereNode node = make_node(rule, i, measure.chart(), r);
        node.index = k;
        const double v = f(node) * measure.volume_element(node.point);
        if (!std::isfinite(v))
          throw QuadratureError("integrand is not finite at node " + std::to_string(k) + " " +
                                    describe_point(node.point),
                                k);
        return gl.weights[a] * half * rule.weights[i] * v;
      },
      opts.threads);
  return pairwise_sum(terms);
}

}  // namespace

QuadratureResult integrate_sphere(const PointIntegrand& f, double r, const SphereRule& rule,
                                  const Measure& measure, const QuadOptions& opts) {
  if (measure.dim() != rule.n) throw PreconditionError("measure and rule dimensions differ");
  if (!(r > 0.0)) throw DomainError("sphere radius must be positive");
  const SphereRule low = sphere_rule(rule.n, embedded_degree(rule.degree));
  QuadratureResult out;
  out.value = sphere_sum(f, r, rule, measure, opts);
  const double coarse = sphere_sum(f, r, low, measure, opts);
  out.error_estimate = std::fabs(out.value - coarse);
  out.nodes_used = rule.size() + low.size();
  return out;
}

QuadratureResult integrate_annulus(const PointIntegrand& f, double r0, double r1,
                                   const SphereRule& rule, int radial_degree,
                                   const Measure& measure, const QuadOptions& opts) {
  if (!(r0 < r1)) throw PreconditionError("annulus needs r0 < r1");
  if (!(r0 > 0.0)) throw DomainError("annulus inner radius must be positive");
  if (radial_degree < 0 || radial_degree > 2 * kMaxDegree)
    throw UnsupportedError("radial degree out of range");
  if (measure.dim() != rule.n) throw PreconditionError("measure and rule dimensions differ");
  const SphereRule low = sphere_rule(rule.n, embedded_degree(rule.degree));
  const int low_radial = embedded_degree(radial_degree);
  QuadratureResult out;
  out.value = annulus_sum(f, r0, r1, rule, radial_degree, measure, opts);
  const double coarse = annulus_sum(f, r0, r1, low, low_radial, measure, opts);
  out.error_estimate = std::fabs(out.value - coarse);
  out.nodes_used = rule.size() * (radial_degree / 2 + 1) + low.size() * (low_radial / 2 + 1);
  return out;
}

}  // namespace asym
