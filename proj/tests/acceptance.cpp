// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances are fixed below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "asym/charges.hpp"
#include "asym/charts.hpp"
#include "asym/expr.hpp"
#include "asym/kernels.hpp"
#include "asym/quadrature.hpp"
#include "asym/verify.hpp"
#include "support.hpp"

#ifdef ASYM_HAVE_APP
#include "asym/app/config.hpp"
#include "asym/app/report.hpp"
#endif

using namespace asym;

namespace {

// Criterion 1
constexpr double kMassClassicalRel = 1e-3;
constexpr double kMassRicciRel = 1e-2;
constexpr double kMassSeconds = 10.0;
// Criterion 2
constexpr double kCenterAbs = 1e-2;
constexpr double kRtExponent = 2.0;
constexpr double kRtSlack = 0.3;
// Criterion 3
constexpr double kAhMassRel = 1e-3;
constexpr double kAhRicciRel = 1e-2;
constexpr double kAhOddAbs = 1e-6;
// Criterion 4
constexpr int kPohozaevDegree = 30;
constexpr double kPohozaevRel = 1e-6;
constexpr double kPohozaevClosedRel = 1e-8;
// Criteria 5 and 6
constexpr int kSamplePoints = 50;
constexpr double kKernelAbs = 1e-8;
// Criterion 7
constexpr int kSpecializationPoints = 100;
constexpr double kSpecializationRel = 1e-12;
// Criterion 8
constexpr int kRandomExpressions = 100;
constexpr double kDerivativeRel = 1e-6;
constexpr double kQuadratureRel = 1e-12;

using Clock = std::chrono::steady_clock;

struct Criterion {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "; failed: ";
      else detail << ", ";
      detail << what;
    }
    pass = pass && ok;
  }
};

double rel_err(double got, double want) { return std::fabs(got - want) / std::fabs(want); }

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// 1. Schwarzschild mass, classical and Ricci.
void schwarzschild_mass(Criterion& c) {
  const std::vector<double> radii = geometric_radii(8, 2, 5);
  double worst_cl = 0, worst_ri = 0, slowest = 0;
  for (int n : {3, 4, 5})
    for (double m : {1.0, 2.5}) {
      const auto t0 = Clock::now();
      const MetricSpec s = MetricSpec::schwarzschild(n, m);
      const double cl = classical_mass(s, radii).limit;
      const double ri = ricci_mass(s, radii).limit;
      const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
      const std::string tag = "n=" + std::to_string(n) + " m=" + fmt("%g", m);
      c.require(rel_err(cl, m) < kMassClassicalRel, tag + " classical " + fmt("%.10g", cl));
      c.require(rel_err(ri, m) < kMassRicciRel, tag + " ricci " + fmt("%.10g", ri));
      c.require(secs < kMassSeconds, tag + " took " + fmt("%.1fs", secs));
      worst_cl = std::max(worst_cl, rel_err(cl, m));
      worst_ri = std::max(worst_ri, rel_err(ri, m));
      slowest = std::max(slowest, secs);
    }
  c.detail << "max rel err classical " << fmt("%.2e", worst_cl) << ", ricci " << fmt("%.2e", worst_ri)
           << ", slowest case " << fmt("%.2fs", slowest);
}

// 2. Center of mass of a translated Schwarzschild metric.
void center_of_mass(Criterion& c) {
  const std::vector<double> radii = geometric_radii(8, 2, 5);
  Vec center{};
  center[0] = 1.0;
  center[1] = 0.5;
  const MetricSpec s = MetricSpec::schwarzschild(3, 1.0, center);
  const double mass = classical_mass(s, radii).limit;
  double worst = 0;
  for (int a = 0; a < 3; ++a) {
    const double cl = classical_center(s, a, radii, mass).limit;
    const double ri = ricci_center(s, a, radii, mass).limit;
    c.require(std::fabs(cl - center[a]) < kCenterAbs, "classical c" + std::to_string(a + 1));
    c.require(std::fabs(ri - center[a]) < kCenterAbs, "ricci c" + std::to_string(a + 1));
    worst = std::max({worst, std::fabs(cl - center[a]), std::fabs(ri - center[a])});
  }
  const RtReport rt = rt_diagnostics(s, radii);
  c.require(std::fabs(rt.exponent - kRtExponent) <= kRtSlack, "RT exponent " + fmt("%.3f", rt.exponent));
  c.detail << "max abs err " << fmt("%.2e", worst) << ", RT exponent " << fmt("%.3f", rt.exponent);
}

// 3. Kottler mass functional.
void hyperbolic_mass(Criterion& c) {
  const std::vector<double> radii = geometric_radii(3, 2, 5);
  double worst_m = 0, worst_r = 0, worst_odd = 0;
  for (int n : {3, 4})
    for (double m : {1.0, 2.0}) {
      const MetricSpec k = MetricSpec::kottler(n, m);
      const std::string tag = "n=" + std::to_string(n) + " m=" + fmt("%g", m);
      const double am = ah_mass(k, KernelFunction{KernelId::ah_v0, 0}, radii).limit;
      const double ar = ah_ricci_charge(k, 0, radii).limit;
      c.require(rel_err(am, m) < kAhMassRel, tag + " ah_mass " + fmt("%.10g", am));
      c.require(rel_err(ar, m) < kAhRicciRel, tag + " ah_ricci " + fmt("%.10g", ar));
      worst_m = std::max(worst_m, rel_err(am, m));
      worst_r = std::max(worst_r, rel_err(ar, m));
      for (int a = 0; a < n; ++a) {
        const double v = ah_mass(k, KernelFunction{KernelId::ah_valpha, a}, radii).limit;
        const double w = ah_ricci_charge(k, a + 1, radii).limit;
        c.require(std::fabs(v) < kAhOddAbs && std::fabs(w) < kAhOddAbs,
                  tag + " V" + std::to_string(a + 1));
        worst_odd = std::max({worst_odd, std::fabs(v), std::fabs(w)});
      }
    }
  c.detail << "max rel err ah_mass " << fmt("%.2e", worst_m) << ", ah_ricci " << fmt("%.2e", worst_r)
           << ", max |V^a charge| " << fmt("%.2e", worst_odd);
}

// 4. Integrated Bianchi identity on annuli (r0, 2 r0).
void pohozaev(Criterion& c) {
  double worst = 0, worst_closed = 0;
  int checks = 0;
  for (int n : {3, 4}) {
    for (const MetricSpec& spec : {MetricSpec::euclidean(n), MetricSpec::hyperbolic_polar(n),
                                   MetricSpec::schwarzschild(n, 1.0)}) {
      const double r0 = is_hyperbolic(spec) ? 1.0 : 4.0;
      for (const ConformalKilling& x : conformal_basis(spec)) {
        const IdentityReport r = pohozaev_check(spec, x, r0, 2 * r0, kPohozaevDegree);
        const std::string tag = std::string(to_string(spec.kind)) + " n=" + std::to_string(n) + " " + x.name();
        c.require(r.relative_residual < kPohozaevRel, tag + " rel residual " + fmt("%.2e", r.relative_residual));
        worst = std::max(worst, r.relative_residual);
        ++checks;
        if (is_hyperbolic(spec) && x.id == FieldId::ah_x0) {
          const double closed = (n - 1) * (n - 2) / 2.0 * sphere_volume(n) *
                                (std::pow(std::sinh(2 * r0), n) - std::pow(std::sinh(r0), n));
          const double e = std::max(rel_err(r.lhs, closed), rel_err(r.rhs, closed));
          c.require(e < kPohozaevClosedRel, tag + " closed form " + fmt("%.2e", e));
          worst_closed = std::max(worst_closed, e);
        }
      }
    }
  }
  c.detail << checks << " identities, max rel residual " << fmt("%.2e", worst)
           << ", closed-form rel err " << fmt("%.2e", worst_closed);
}

// 5. Hess(delta X) + lambda (delta X) g = 0 on the model spaces.
void kernel_identity(Criterion& c) {
  double worst = 0;
  for (int n : {3, 4})
    for (const MetricSpec& spec : {MetricSpec::euclidean(n), MetricSpec::hyperbolic_polar(n)}) {
      const std::vector<ChartPoint> pts = sample_points(spec, kSamplePoints, 2024 + n, 0.5, 5.0);
      for (const ConformalKilling& x : conformal_basis(spec)) {
        const KernelReport k = kernel_identity_check(spec, x, pts);
        c.require(k.max_residual < kKernelAbs && k.samples == kSamplePoints,
                  std::string(to_string(spec.kind)) + " " + x.name());
        worst = std::max(worst, k.max_residual);
      }
    }
  c.detail << "max residual " << fmt("%.2e", worst);
}

// 6. Kernel membership and divergence pairing of the hyperbolic bases.
void kernel_pairing(Criterion& c) {
  double worst_adj = 0, worst_pair = 0;
  for (int n : {3, 4})
    for (const MetricSpec& spec : {MetricSpec::hyperbolic_polar(n), MetricSpec::hyperbolic_area(n)}) {
      const std::vector<ChartPoint> pts = sample_points(spec, kSamplePoints, 77 + n, 0.5, 5.0);
      const std::vector<KernelFunction> vs = kernel_basis(spec);
      const std::vector<ConformalKilling> xs = conformal_basis(spec);
      for (std::size_t i = 0; i < vs.size(); ++i)
        for (const ChartPoint& p : pts) {
          const MetricJet jet = metric_jet(spec, p);
          const ScalarJet v = vs[i].jet(p);
          const double adj = max_abs(dscal_adjoint(jet, v, curvature(jet)), n);
          const double pair = std::fabs(divergence_vector(jet, xs[i].jet(p)) + n * v.value);
          worst_adj = std::max(worst_adj, adj);
          worst_pair = std::max(worst_pair, pair);
        }
    }
  c.require(worst_adj < kKernelAbs, "dscal adjoint " + fmt("%.2e", worst_adj));
  c.require(worst_pair < kKernelAbs, "pairing " + fmt("%.2e", worst_pair));
  c.detail << "max |(D Scal)* V| " << fmt("%.2e", worst_adj) << ", max |delta X + n V| "
           << fmt("%.2e", worst_pair);
}

// 7. Michel's integrand reduces to the flat mass and center integrands.
void specialization(Criterion& c) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> coef(-0.5, 0.5);
  double worst = 0;
  for (int k = 0; k < kSpecializationPoints; ++k) {
    const int n = 3 + k % 3;
    Vec center{};
    for (int a = 0; a < n; ++a) center[a] = coef(rng);
    const MetricSpec spec = MetricSpec::schwarzschild(n, 0.5 + (k % 7) * 0.3, center);
    ChartPoint p = test::random_cartesian(rng, n);
    for (int a = 0; a < n; ++a) p.coords[a] *= 4.0;
    const MetricJets j = metric_jets(spec, p);
    Vec nu{};
    for (int a = 0; a < n; ++a) nu[a] = gauss(rng);
    const double adm = adm_integrand(j.g, nu);
    const double one = michel_integrand(KernelFunction{KernelId::const_one, 0}.jet(p), j.g, j.b, nu);
    worst = std::max(worst, std::fabs(one - adm) / std::max(1.0, std::fabs(adm)));
    for (int a = 0; a < n; ++a) {
      const double com = com_integrand(j.g, a, nu);
      const double mic = michel_integrand(KernelFunction{KernelId::coordinate, a}.jet(p), j.g, j.b, nu);
      worst = std::max(worst, std::fabs(mic - com) / std::max(1.0, std::fabs(com)));
    }
  }
  c.require(worst < kSpecializationRel, "max rel diff " + fmt("%.2e", worst));
  c.detail << "max rel diff " << fmt("%.2e", worst);
}

// 8. Derivatives, quadrature exactness and thread determinism.
void hygiene(Criterion& c) {
  std::mt19937_64 rng(99);
  double worst_ad = 0;
  for (int k = 0; k < kRandomExpressions; ++k) {
    const int n = 3 + k % 3;
    const ExprAst e = parse(test::random_expression(rng, n, 1 + k % 5), n, ChartKind::cartesian);
    const ChartPoint p = test::random_cartesian(rng, n);
    const ScalarJet j = e.eval_jet(p, {});
    const test::ScalarField f = [&](const ChartPoint& q) {
      return e.evaluate<double>(std::span<const double>(q.coords.data(), static_cast<std::size_t>(n)), {});
    };
    const Vec g = test::fd_gradient(f, p, 1e-5);
    const Mat h = test::fd_hessian(f, p, 1e-4);
    const double gs = std::max(1.0, test::max_abs(j.grad, n));
    const double hs = std::max(1.0, max_abs(j.hess, n));
    for (int a = 0; a < n; ++a) {
      worst_ad = std::max(worst_ad, std::fabs(g[a] - j.grad[a]) / gs);
      for (int b = 0; b < n; ++b) worst_ad = std::max(worst_ad, std::fabs(h[a][b] - j.hess[a][b]) / hs);
    }
  }
  c.require(worst_ad < kDerivativeRel, "AD vs FD " + fmt("%.2e", worst_ad));

  double worst_q = 0;
  for (int n = 3; n <= 5; ++n)
    for (int degree : {8, 16, 24, 30}) {
      const SphereRule rule = sphere_rule(n, degree);
      const Measure unit = Measure::coordinate(ChartKind::cartesian, n);
      std::uniform_int_distribution<int> coord(0, n - 1);
      for (int trial = 0; trial < 20; ++trial) {
        // Total degree exactly `degree` for half the trials.
        const int total = trial % 2 ? degree : std::uniform_int_distribution<int>(0, degree)(rng);
        std::vector<int> a(static_cast<std::size_t>(n), 0);
        for (int t = 0; t < total; ++t) ++a[static_cast<std::size_t>(coord(rng))];
        const auto mono = [&](const SphereNode& s) {
          double v = 1.0;
          for (int i = 0; i < n; ++i) v *= std::pow(s.unit[i], a[static_cast<std::size_t>(i)]);
          return v;
        };
        const double got = integrate_sphere(mono, 1.0, rule, unit).value;
        const double mag =
            integrate_sphere([&](const SphereNode& s) { return std::fabs(mono(s)); }, 1.0, rule, unit).value;
        worst_q = std::max(worst_q, std::fabs(got - test::sphere_moment(a)) / mag);
      }
    }
  c.require(worst_q < kQuadratureRel, "quadrature exactness " + fmt("%.2e", worst_q));

  bool identical = true;
#ifdef ASYM_HAVE_APP
  for (const char* text :
       {"[run]\ncommand = center\n[metric]\nkind = schwarzschild\nn = 3\nm = 1\ncenter = 1, 0.5, 0\n"
        "[quadrature]\ndegree = 12\n",
        "[run]\ncommand = ah-mass\n[metric]\nkind = kottler\nn = 3\nm = 1\n[quadrature]\ndegree = 12\n"}) {
    std::string first;
    for (int threads : {1, 2, 5}) {
      app::RunConfig cfg = app::parse_config(text);
      cfg.timings = false;
      cfg.threads = threads;
      auto j = app::to_json(app::run(cfg));
      j["config"]["quadrature"].erase("threads");
      const std::string dump = j.dump(2);
      if (first.empty()) first = dump;
      identical = identical && dump == first;
    }
  }
#else
  {
    Vec center{};
    center[0] = 1.0;
    const MetricSpec s = MetricSpec::schwarzschild(3, 1.0, center);
    std::string first;
    for (int threads : {1, 2, 5}) {
      ChargeOptions o;
      o.quad.threads = threads;
      std::ostringstream out;
      out.precision(17);
      for (const FluxSample& x : ricci_center(s, 0, geometric_radii(8, 2, 5), 1.0, o).samples)
        out << x.raw_flux << ' ' << x.quad_error << '\n';
      if (first.empty()) first = out.str();
      identical = identical && out.str() == first;
    }
  }
#endif
  c.require(identical, "reports differ across thread counts");
  c.detail << "AD vs FD " << fmt("%.2e", worst_ad) << ", quadrature " << fmt("%.2e", worst_q)
           << ", reports " << (identical ? "identical" : "differ") << " across thread counts";
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    std::function<void(Criterion&)> run;
  };
  const Entry entries[] = {
      {"1 schwarzschild mass", schwarzschild_mass},
      {"2 center of mass", center_of_mass},
      {"3 hyperbolic mass", hyperbolic_mass},
      {"4 pohozaev identity", pohozaev},
      {"5 conformal kernel identity", kernel_identity},
      {"6 kernel and divergence pairing", kernel_pairing},
      {"7 integrand specialization", specialization},
      {"8 numerics hygiene", hygiene},
  };
  int failed = 0;
  for (const Entry& e : entries) {
    Criterion c;
    const auto t0 = Clock::now();
    try {
      e.run(c);
    } catch (const std::exception& ex) {
      c.require(false, std::string("exception: ") + ex.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::printf("%s criterion %s: %s (%.1fs)\n", c.pass ? "PASS" : "FAIL", e.name, c.detail.str().c_str(),
                secs);
    std::fflush(stdout);
    failed += c.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(entries)) - failed,
              std::size(entries));
  return failed == 0 ? 0 : 1;
}
