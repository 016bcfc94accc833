#pragma once

// Extrapolation of radial flux samples to r -> infinity and decay-rate
// estimates for metric deviations.
//
// Flat charts use v(r) = v_inf + c r^-sigma, hyperbolic charts
// v(s) = v_inf + c e^{-sigma s} in the geodesic radius s. All radii handled
// here are asymptotic radii: |x| in cartesian charts, geodesic distance in
// hyperbolic ones.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asym/metric.hpp"

namespace asym {

enum class DecayModel { power, exponential };

std::string_view to_string(DecayModel m);

struct FitOptions {
  std::optional<double> sigma;  // fixed exponent instead of a fitted one
  bool two_term = false;        // add c2 * r^{-sigma-1} (or e^{-(sigma+1)s})
};

struct FitResult {
  DecayModel model = DecayModel::power;
  double limit = 0.0;
  double error = 0.0;
  double sigma = 0.0;
  bool sigma_fitted = false;
  std::vector<double> coefficients;  // c (and c2 for two-term fits)
  std::vector<double> residuals;     // per sample
  // Components of the error estimate.
  double residual_error = 0.0;
  double drop_error = 0.0;
  double quadrature_error = 0.0;
};

// Throws FitError for fewer than 3 samples (4 for two-term fits),
// non-increasing radii, non-finite values or a singular system.
FitResult extrapolate(std::span<const double> r, std::span<const double> v,
                      std::span<const double> quad_error, DecayModel model,
                      const FitOptions& opts = {});

struct FluxSample {
  double r = 0.0;           // asymptotic radius
  double raw_flux = 0.0;    // unnormalized sphere integral
  double normalized = 0.0;  // raw_flux times the charge normalization
  double quad_error = 0.0;  // estimate for `normalized`
};

struct RadialSeries {
  std::vector<FluxSample> samples;
  double limit = 0.0;
  double limit_error = 0.0;
  FitResult fit;
};

// Fills limit, limit_error and fit from the samples.
void attach_limit(RadialSeries& series, DecayModel model, const FitOptions& opts = {});

// Geometric schedule r0 * ratio^k, k = 0..count-1.
std::vector<double> geometric_radii(double r0, double ratio, int count);

DecayModel decay_model_of(const MetricSpec& spec);

// Chart radius of the coordinate sphere at asymptotic radius `radius`, and
// the inverse map.
double chart_radius_at(const MetricSpec& spec, double radius);
double asymptotic_radius_at(const MetricSpec& spec, double chart_radius);

struct DecayReport {
  std::vector<double> radii;
  std::vector<double> sup_deviation;  // sup over S_r of |g - b|_b
  bool vanishing = false;             // g = b at every sample
  double tau = 0.0;                   // +infinity when vanishing
  double threshold = 0.0;             // (n-2)/2 flat, n/2 hyperbolic
  bool above_threshold = false;
};

// Regression of log sup|g - b|_b against log r (flat) or s (hyperbolic).
DecayReport decay_rate(const MetricSpec& spec, std::span<const double> radii, int degree = 8);

}  // namespace asym
