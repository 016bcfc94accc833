#include "asym/limits.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include "asym/charts.hpp"
#include "asym/errors.hpp"
#include "asym/geometry.hpp"
#include "asym/quadrature.hpp"

namespace asym {
namespace {

constexpr double kDropSafety = 2.0;

// Decay function normalized to 1 at the first radius r0.
double basis(DecayModel model, double r, double r0, double sigma) {
  return model == DecayModel::power ? std::pow(r / r0, -sigma) : std::exp(-sigma * (r - r0));
}

double basis_log(DecayModel model, double r, double r0) {
  return model == DecayModel::power ? std::log(r / r0) : r - r0;
}

struct Linear {
  bool ok = false;
  Eigen::VectorXd coef;      // v_inf, c1 [, c2]
  Eigen::VectorXd limit_w;   // v_inf = limit_w . v
  Eigen::VectorXd residual;  // model - v
  double rss = 0.0;
};

Linear linear_fit(std::span<const double> r, std::span<const double> v, DecayModel model,
                  double sigma, int terms) {
  const int m = static_cast<int>(r.size());
  const int p = 1 + terms;
  Eigen::MatrixXd a(m, p);
  Eigen::VectorXd y(m);
  for (int k = 0; k < m; ++k) {
    a(k, 0) = 1.0;
    for (int t = 0; t < terms; ++t) a(k, 1 + t) = basis(model, r[k], r[0], sigma + t);
    y(k) = v[k];
  }
  Linear out;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-12);
  if (qr.rank() < p) return out;
  const Eigen::MatrixXd pinv = qr.solve(Eigen::MatrixXd::Identity(m, m));
  out.coef = pinv * y;
  out.limit_w = pinv.row(0).transpose();
  out.residual = a * out.coef - y;
  out.rss = out.residual.squaredNorm();
  out.ok = true;
  return out;
}

double rss_at(std::span<const double> r, std::span<const double> v, DecayModel model,
              double sigma, int terms) {
  const Linear l = linear_fit(r, v, model, sigma, terms);
  return l.ok ? l.rss : std::numeric_limits<double>::infinity();
}

double fit_sigma(std::span<const double> r, std::span<const double> v, DecayModel model,
                 int terms) {
  constexpr double lo = 0.05, hi = 12.0;
  constexpr int grid = 240;
  double best = 1.0, best_rss = std::numeric_limits<double>::infinity();
  std::vector<double> s(grid);
  for (int k = 0; k < grid; ++k) s[k] = lo * std::pow(hi / lo, k / (grid - 1.0));
  int best_k = 0;
  for (int k = 0; k < grid; ++k) {
    const double q = rss_at(r, v, model, s[k], terms);
    if (q < best_rss) {
      best_rss = q;
      best = s[k];
      best_k = k;
    }
  }
  // Golden-section refinement on the bracketing grid cell pair.
  double a = s[std::max(0, best_k - 1)], b = s[std::min(grid - 1, best_k + 1)];
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = rss_at(r, v, model, c, terms), fd = rss_at(r, v, model, d, terms);
  for (int it = 0; it < 200 && (b - a) > 1e-14 * b; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = rss_at(r, v, model, c, terms);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = rss_at(r, v, model, d, terms);
    }
  }
  const double mid = 0.5 * (a + b);
  return rss_at(r, v, model, mid, terms) <= best_rss ? mid : best;
}

// Gauss-Newton on (v_inf, c, sigma) for the single-term model.
double polish_sigma(std::span<const double> r, std::span<const double> v, DecayModel model,
                    double sigma) {
  const int m = static_cast<int>(r.size());
  Linear cur = linear_fit(r, v, model, sigma, 1);
  if (!cur.ok) return sigma;
  for (int it = 0; it < 30; ++it) {
    const double c = cur.coef(1);
    Eigen::MatrixXd j(m, 3);
    for (int k = 0; k < m; ++k) {
      const double phi = basis(model, r[k], r[0], sigma);
      j(k, 0) = 1.0;
      j(k, 1) = phi;
      j(k, 2) = -c * basis_log(model, r[k], r[0]) * phi;
    }
    if (j.col(2).cwiseAbs().maxCoeff() <= 1e-14 * (1.0 + std::fabs(cur.coef(0)))) break;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(j);
    if (qr.rank() < 3) break;
    const Eigen::VectorXd step = qr.solve(-cur.residual);
    const double next = sigma + step(2);
    if (!(next > 0.0) || !std::isfinite(next)) break;
    const Linear trial = linear_fit(r, v, model, next, 1);
    if (!trial.ok || trial.rss > cur.rss) break;
    const bool done = std::fabs(step(2)) <= 1e-15 * std::max(1.0, sigma);
    sigma = next;
    cur = trial;
    if (done) break;
  }
  return sigma;
}

}  // namespace

std::string_view to_string(DecayModel m) {
  return m == DecayModel::power ? "power" : "exponential";
}

FitResult extrapolate(std::span<const double> r, std::span<const double> v,
                      std::span<const double> quad_error, DecayModel model,
                      const FitOptions& opts) {
  const std::size_t m = r.size();
  const int terms = opts.two_term ? 2 : 1;
  const std::size_t need = opts.two_term ? 4 : 3;
  if (v.size() != m || (!quad_error.empty() && quad_error.size() != m))
    throw FitError("sample arrays differ in length");
  if (m < need)
    throw FitError("extrapolation needs at least " + std::to_string(need) + " samples, got " +
                   std::to_string(m));
  for (std::size_t k = 0; k < m; ++k) {
    if (!std::isfinite(r[k]) || !std::isfinite(v[k])) throw FitError("non-finite sample");
    if (k > 0 && !(r[k] > r[k - 1])) throw FitError("radii must be strictly increasing");
  }
  if (model == DecayModel::power && !(r[0] > 0.0)) throw FitError("radii must be positive");

  FitResult out;
  out.model = model;
  bool constant = true;
  for (std::size_t k = 1; k < m; ++k) constant = constant && v[k] == v[0];

  // A fitted exponent is determined by the last `need` samples, where the
  // neglected terms are smallest; a hinted one uses every sample.
  const bool fitted = !opts.sigma && !constant;
  auto window_sigma = [&](std::span<const double> wr, std::span<const double> wv) {
    double s = fit_sigma(wr, wv, model, terms);
    if (terms == 1) s = polish_sigma(wr, wv, model, s);
    return s;
  };
  const std::size_t first = fitted ? m - need : 0;
  const std::span<const double> wr = r.subspan(first), wv = v.subspan(first);

  double sigma = 1.0;
  if (opts.sigma) {
    if (!(*opts.sigma > 0.0)) throw FitError("decay exponent must be positive");
    sigma = *opts.sigma;
  } else if (fitted) {
    sigma = window_sigma(wr, wv);
    out.sigma_fitted = true;
  }
  const Linear fit = linear_fit(wr, wv, model, sigma, terms);
  if (!fit.ok) throw FitError("singular extrapolation system");

  out.sigma = sigma;
  out.limit = constant ? v[0] : fit.coef(0);
  for (int t = 0; t < terms; ++t) {
    // Undo the normalization of the basis at the first fitted radius.
    const double at_r0 =
        model == DecayModel::power ? std::pow(wr[0], sigma + t) : std::exp((sigma + t) * wr[0]);
    out.coefficients.push_back(constant ? 0.0 : fit.coef(1 + t) * at_r0);
  }
  out.residuals.assign(m, 0.0);
  if (!constant) {
    for (std::size_t k = 0; k < m; ++k) {
      double model_v = out.limit;
      for (int t = 0; t < terms; ++t)
        model_v += fit.coef(1 + t) * basis(model, r[k], wr[0], sigma + t);
      out.residuals[k] = model_v - v[k];
    }
    for (std::size_t k = first; k < m; ++k)
      out.residual_error = std::max(out.residual_error, std::fabs(out.residuals[k]));
  }
  if (!quad_error.empty())
    for (std::size_t k = first; k < m; ++k)
      out.quadrature_error +=
          std::fabs(fit.limit_w(static_cast<Eigen::Index>(k - first))) * quad_error[k];
  if (!constant) {
    // The refit on the previous window or on fewer radii still carries part
    // of the truncation bias.
    std::optional<double> other;
    if (fitted && m > need) {
      const std::span<const double> pr = r.subspan(first - 1, need);
      const std::span<const double> pv = v.subspan(first - 1, need);
      const Linear prev = linear_fit(pr, pv, model, window_sigma(pr, pv), terms);
      if (prev.ok) other = prev.coef(0);
    } else if (!fitted && m - 1 >= static_cast<std::size_t>(1 + terms)) {
      const Linear dropped = linear_fit(r.subspan(1), v.subspan(1), model, sigma, terms);
      if (dropped.ok) other = dropped.coef(0);
    }
    if (other) out.drop_error = kDropSafety * std::fabs(*other - out.limit);
  }
  out.error = std::max({out.residual_error, out.drop_error, out.quadrature_error});
  return out;
}

void attach_limit(RadialSeries& series, DecayModel model, const FitOptions& opts) {
  std::vector<double> r, v, e;
  for (const FluxSample& s : series.samples) {
    r.push_back(s.r);
    v.push_back(s.normalized);
    e.push_back(s.quad_error);
  }
  series.fit = extrapolate(r, v, e, model, opts);
  series.limit = series.fit.limit;
  series.limit_error = series.fit.error;
}

std::vector<double> geometric_radii(double r0, double ratio, int count) {
  if (!(r0 > 0.0) || !(ratio > 1.0) || count < 1)
    throw PreconditionError("radius schedule needs r0 > 0, ratio > 1 and count >= 1");
  std::vector<double> out;
  double r = r0;
  for (int k = 0; k < count; ++k, r *= ratio) out.push_back(r);
  return out;
}

DecayModel decay_model_of(const MetricSpec& spec) {
  return is_hyperbolic(spec) ? DecayModel::exponential : DecayModel::power;
}

double chart_radius_at(const MetricSpec& spec, double radius) {
  return chart_of(spec) == ChartKind::polar_area ? std::sinh(radius) : radius;
}

double asymptotic_radius_at(const MetricSpec& spec, double chart_radius) {
  return chart_of(spec) == ChartKind::polar_area ? std::asinh(chart_radius) : chart_radius;
}

DecayReport decay_rate(const MetricSpec& spec, std::span<const double> radii, int degree) {
  const int n = spec.n;
  const SphereRule rule = sphere_rule(n, degree);
  DecayReport out;
  out.threshold = is_hyperbolic(spec) ? 0.5 * n : 0.5 * (n - 2);
  for (double s : radii) {
    const double rc = chart_radius_at(spec, s);
    double sup = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const ChartPoint p =
          sphere_point(chart_of(spec), n, rc, std::span<const double>(rule.units[i].data(), n),
                       std::span<const double>(rule.angles[i].data(), n - 1));
      const MetricJets j = metric_jets(spec, p);
      const Mat bi = inverse_metric(j.b.g, n);
      // |h|_b^2 = b^ik b^jl h_ij h_kl
      Mat hr{};
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int k = 0; k < n; ++k) hr[a][b] += bi[a][k] * j.h.g[k][b];
      double sq = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) sq += hr[a][b] * hr[b][a];
      sup = std::max(sup, std::sqrt(std::max(sq, 0.0)));
    }
    out.radii.push_back(s);
    out.sup_deviation.push_back(sup);
  }
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < radii.size(); ++k)
    if (out.sup_deviation[k] > 0.0) {
      xs.push_back(is_hyperbolic(spec) ? out.radii[k] : std::log(out.radii[k]));
      ys.push_back(std::log(out.sup_deviation[k]));
    }
  if (xs.size() < 2) {
    out.vanishing = xs.empty();
    out.tau = std::numeric_limits<double>::infinity();
    out.above_threshold = true;
    return out;
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
  }
  out.tau = -sxy / sxx;
  out.above_threshold = out.tau > out.threshold;
  return out;
}

}  // namespace asym
