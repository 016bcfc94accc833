#include <cmath>
#include <random>

#include "asym/geometry.hpp"
#include "asym/kernels.hpp"
#include "asym/metric.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace asym;
using asym::test::cartesian;
using asym::test::polar;

namespace {

double rel_diff(const Mat& a, const Mat& b, int n) {
  Mat d{};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d[i][j] = a[i][j] - b[i][j];
  return max_abs(d, n) / std::max(1.0, max_abs(b, n));
}

// Vector field jet from component functions X^i(x), derivatives by central
// differences.
VectorJet vector_jet(const ChartPoint& p, const std::function<Vec(const ChartPoint&)>& f) {
  VectorJet v;
  v.at = p;
  v.x = f(p);
  const double h = 1e-5;
  for (int j = 0; j < p.n; ++j) {
    const Vec a = f(test::shifted(p, j, h));
    const Vec b = f(test::shifted(p, j, -h));
    for (int i = 0; i < p.n; ++i) v.dx[j][i] = (a[i] - b[i]) / (2 * h);
  }
  return v;
}

}  // namespace

TEST_CASE("euclidean metric is flat") {
  std::mt19937_64 rng(3);
  for (int n = 3; n <= 6; ++n) {
    const ChartPoint p = test::random_cartesian(rng, n);
    const CurvatureBundle c = curvature(metric_jet(MetricSpec::euclidean(n), p));
    CHECK(max_abs(c.ricci, n) == 0.0);
    CHECK(c.scal == 0.0);
    CHECK_FALSE(c.modified_einstein.has_value());
  }
}

TEST_CASE("hyperbolic polar chart: connection and Einstein constant") {
  for (int n = 3; n <= 5; ++n) {
    const double r = 1.3;
    ChartPoint p = polar(ChartKind::polar_geodesic, r, {});
    p.n = n;
    for (int k = 1; k < n; ++k) p.coords[k] = 0.4 + 0.3 * k;
    const MetricJet jet = metric_jet(MetricSpec::hyperbolic_polar(n), p);
    const Tensor3 gamma = christoffel(jet);
    CHECK(gamma[0][1][1] == doctest::Approx(-std::sinh(r) * std::cosh(r)).epsilon(1e-13));
    CHECK(gamma[1][0][1] == doctest::Approx(std::cosh(r) / std::sinh(r)).epsilon(1e-13));

    const CurvatureBundle c = curvature(jet);
    Mat expect{};
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) expect[i][j] = -(n - 1) * jet.g[i][j];
    CHECK(rel_diff(c.ricci, expect, n) < 1e-12);
    CHECK(c.scal == doctest::Approx(-n * (n - 1.0)).epsilon(1e-12));
    REQUIRE(c.modified_einstein.has_value());
    CHECK(max_abs(*c.modified_einstein, n) < 1e-10);
  }
}

TEST_CASE("hyperbolic area chart has the same curvature") {
  const int n = 4;
  const ChartPoint p = polar(ChartKind::polar_area, 2.2, {0.7, 1.9, 2.4});
  const CurvatureBundle c = curvature(metric_jet(MetricSpec::hyperbolic_area(n), p));
  CHECK(c.scal == doctest::Approx(-12.0).epsilon(1e-12));
  REQUIRE(c.modified_einstein.has_value());
  CHECK(max_abs(*c.modified_einstein, n) < 1e-10);
}

TEST_CASE("conformally flat connection") {
  // g = u^{4/(n-2)} e: Gamma^k_ij = 2/(n-2) (delta_ik d_j ln u + delta_jk d_i ln u
  // - delta_ij d_k ln u).
  std::mt19937_64 rng(11);
  for (int n = 3; n <= 5; ++n) {
    const double m = 1.7;
    const MetricSpec spec = MetricSpec::schwarzschild(n, m);
    for (int trial = 0; trial < 5; ++trial) {
      const ChartPoint p = test::random_cartesian(rng, n, 1.5, 4.0);
      const test::ScalarField lnu = [&](const ChartPoint& q) {
        double r2 = 0;
        for (int i = 0; i < n; ++i) r2 += q.coords[i] * q.coords[i];
        return std::log(1 + m / (2 * std::pow(r2, (n - 2) / 2.0)));
      };
      const Vec dl = test::fd_gradient(lnu, p, 1e-6);
      const Tensor3 gamma = christoffel(metric_jet(spec, p));
      const double c = 2.0 / (n - 2);
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            const double want =
                c * ((i == k) * dl[j] + (j == k) * dl[i] - (i == j) * dl[k]);
            CHECK(gamma[k][i][j] == doctest::Approx(want).epsilon(1e-7).scale(1.0));
          }
    }
  }
}

TEST_CASE("Schwarzschild Ricci tensor against symbolic values") {
  const MetricSpec s3 = MetricSpec::schwarzschild(3, 1.0);
  const CurvatureBundle c3 = curvature(metric_jet(s3, cartesian({1.3, -0.7, 2.1})));
  const double want3[3][3] = {
      {0.0095512393185827081539, 0.017154528512980785040, -0.051463585538942355119},
      {0.017154528512980785040, 0.032172595599436490624, 0.027711161444045883526},
      {-0.051463585538942355119, 0.027711161444045883526, -0.041723834918019198778}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(c3.ricci[i][j] == doctest::Approx(want3[i][j]).epsilon(1e-12));
  CHECK(std::fabs(c3.scal) < 1e-14);
  CHECK(christoffel(metric_jet(s3, cartesian({1.3, -0.7, 2.1})))[0][0][0] ==
        doctest::Approx(-0.064317635212952741692).epsilon(1e-12));

  const MetricSpec s4 = MetricSpec::schwarzschild(4, 2.0);
  const CurvatureBundle c4 = curvature(metric_jet(s4, cartesian({0.5, -1.5, 1.2, 0.8})));
  CHECK(c4.ricci[0][0] == doctest::Approx(0.10041743922178391973).epsilon(1e-12));
  CHECK(c4.ricci[0][1] == doctest::Approx(0.084148692085293787487).epsilon(1e-12));
  CHECK(c4.ricci[1][3] == doctest::Approx(0.13463790733647005998).epsilon(1e-12));
  CHECK(c4.ricci[3][3] == doctest::Approx(0.056660119337431150241).epsilon(1e-12));
  CHECK(std::fabs(c4.scal) < 1e-13);
}

TEST_CASE("Kottler curvature against symbolic values") {
  const MetricSpec k = MetricSpec::kottler(3, 1.0);
  const MetricJet jet = metric_jet(k, polar(ChartKind::polar_area, 2.5, {1.1, 0.4}));
  const CurvatureBundle c = curvature(jet);
  CHECK(c.ricci[0][0] == doctest::Approx(-0.32992248062015503876).epsilon(1e-12));
  CHECK(c.ricci[1][1] == doctest::Approx(-12.1).epsilon(1e-12));
  CHECK(c.ricci[2][2] == doctest::Approx(-9.6104317593948415366).epsilon(1e-12));
  CHECK(std::fabs(c.ricci[0][1]) < 1e-13);
  CHECK(c.scal == doctest::Approx(-6.0).epsilon(1e-12));
  const Tensor3 g = christoffel(jet);
  CHECK(g[0][1][1] == doctest::Approx(-16.125).epsilon(1e-12));
  CHECK(g[2][1][2] == doctest::Approx(0.50896810523906440719).epsilon(1e-12));

  for (int n = 3; n <= 5; ++n) {
    ChartPoint p = polar(ChartKind::polar_area, 3.0, {});
    p.n = n;
    for (int a = 1; a < n; ++a) p.coords[a] = 0.5 + 0.2 * a;
    CHECK(curvature(metric_jet(MetricSpec::kottler(n, 2.0), p)).scal ==
          doctest::Approx(-n * (n - 1.0)).epsilon(1e-11));
  }
}

TEST_CASE("relative curvature agrees with direct curvature") {
  const MetricSpec k = MetricSpec::kottler(4, 1.5);
  const ChartPoint p = polar(ChartKind::polar_area, 2.0, {0.9, 1.2, 0.3});
  const CurvatureBundle c = curvature(metric_jet(k, p));
  const RelativeCurvature rc = relative_curvature(k, p);
  CHECK(rel_diff(rc.ricci, c.ricci, 4) < 1e-12);
  CHECK(rc.scal == doctest::Approx(c.scal).epsilon(1e-12));
  CHECK(rel_diff(rc.modified_einstein, *c.modified_einstein, 4) < 1e-11);
}

TEST_CASE("exact curvature matches finite-difference metric jets") {
  std::mt19937_64 rng(5);
  const MetricSpec pert = test::perturbation_metric(
      MetricSpec::schwarzschild(3, 1.0),
      {"0.3*x1*x2/(1+r^2)", "0.1*sin(x3)", "0", "0.2*exp(-r)", "0.05*x1*x3/(2+r^2)", "0"});
  const MetricSpec specs[] = {MetricSpec::schwarzschild(3, 1.0), MetricSpec::schwarzschild(5, 2.0),
                              pert};
  for (const MetricSpec& spec : specs) {
    for (int trial = 0; trial < 5; ++trial) {
      const ChartPoint p = test::random_cartesian(rng, spec.n, 1.5, 4.0);
      const CurvatureBundle exact = curvature(metric_jet(spec, p));
      const CurvatureBundle fd = curvature(test::fd_metric_jet(spec, p, 1e-4));
      CHECK(rel_diff(fd.ricci, exact.ricci, spec.n) < 1e-6);
    }
  }
}

TEST_CASE("trace identities") {
  std::mt19937_64 rng(17);
  const MetricSpec spec = test::perturbation_metric(
      MetricSpec::euclidean(3), {"0.2*x1^2/(1+r^2)", "0.1*x2*x3", "0", "0.3*exp(-r^2)", "0", "0.1*x1"});
  for (int trial = 0; trial < 10; ++trial) {
    const ChartPoint p = test::random_cartesian(rng, 3);
    const MetricJet jet = metric_jet(spec, p);
    const Mat inv = inverse_metric(jet.g, 3);
    const CurvatureBundle c = curvature(jet);
    CHECK(trace(inv, c.ricci, 3) == doctest::Approx(c.scal).epsilon(1e-12).scale(1.0));
    CHECK(trace(inv, c.einstein, 3) == doctest::Approx(-0.5 * c.scal).epsilon(1e-12).scale(1.0));

    const VectorJet x = vector_jet(p, [](const ChartPoint& q) {
      Vec v{};
      v[0] = q.coords[1] * q.coords[2];
      v[1] = std::sin(q.coords[0]);
      v[2] = q.coords[0] * q.coords[0];
      return v;
    });
    const KillingParts k = killing_operator(jet, x);
    const double div = divergence_vector(jet, x);
    CHECK(trace(inv, k.full, 3) == doctest::Approx(-div).epsilon(1e-12).scale(1.0));
    CHECK(std::fabs(trace(inv, k.trace_free, 3)) < 1e-12);
  }
}

TEST_CASE("contracted Bianchi identity") {
  // delta G = 0, with the derivatives of G taken by finite differences.
  std::mt19937_64 rng(23);
  const MetricSpec spec = test::perturbation_metric(
      MetricSpec::euclidean(3),
      {"0.2*x1^2/(1+r^2)", "0.1*x2*x3/(1+r^2)", "0", "0.3*exp(-r^2)", "0", "0.1*sin(x1)"});
  for (int trial = 0; trial < 5; ++trial) {
    const ChartPoint p = test::random_cartesian(rng, 3);
    MetricJet t;
    t.at = p;
    t.g = curvature(metric_jet(spec, p)).einstein;
    const double h = 1e-5;
    for (int k = 0; k < 3; ++k) {
      const Mat a = curvature(metric_jet(spec, test::shifted(p, k, h))).einstein;
      const Mat b = curvature(metric_jet(spec, test::shifted(p, k, -h))).einstein;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t.dg[k][i][j] = (a[i][j] - b[i][j]) / (2 * h);
    }
    const Vec div = divergence_symmetric2(metric_jet(spec, p), t);
    CHECK(test::max_abs(div, 3) < 1e-7 * std::max(1.0, max_abs(t.g, 3)));
  }
}

TEST_CASE("divergences of the model conformal fields") {
  const MetricSpec e = MetricSpec::euclidean(3);
  const ChartPoint p = cartesian({0.4, -1.1, 2.0});
  const MetricJet ej = metric_jet(e, p);
  CHECK(divergence_vector(ej, field_from_name("dilation", e).jet(p)) == doctest::Approx(-3.0));
  for (int a = 0; a < 3; ++a) {
    const ConformalKilling x{FieldId::inverted_translation, a};
    CHECK(divergence_vector(ej, x.jet(p)) == doctest::Approx(6.0 * p.coords[a]).epsilon(1e-13));
  }
  const MetricSpec h = MetricSpec::hyperbolic_polar(4);
  const ChartPoint q = polar(ChartKind::polar_geodesic, 1.7, {0.6, 1.4, 2.9});
  const double d = divergence_vector(metric_jet(h, q), ConformalKilling{FieldId::ah_x0, 0}.jet(q));
  CHECK(d == doctest::Approx(-4.0 * std::cosh(1.7)).epsilon(1e-13));
}

TEST_CASE("Killing operator") {
  const MetricSpec e = MetricSpec::euclidean(3);
  const ChartPoint p = cartesian({0.4, -1.1, 2.0});
  const MetricJet jet = metric_jet(e, p);

  // Rotation x1 d2 - x2 d1 is Killing.
  const VectorJet rot = vector_jet(p, [](const ChartPoint& q) {
    Vec v{};
    v[0] = -q.coords[1];
    v[1] = q.coords[0];
    return v;
  });
  CHECK(max_abs(killing_operator(jet, rot).full, 3) < 1e-10);

  // The dilation is conformal Killing but not Killing.
  const KillingParts dil = killing_operator(jet, field_from_name("dilation", e).jet(p));
  CHECK(max_abs(dil.trace_free, 3) < 1e-14);
  CHECK(dil.full[0][0] == doctest::Approx(1.0));

  for (const ConformalKilling& x : conformal_basis(e))
    CHECK(max_abs(killing_operator(jet, x.jet(p)).trace_free, 3) < 1e-12);

  const VectorJet sq = vector_jet(p, [](const ChartPoint& q) {
    Vec v{};
    v[0] = q.coords[0] * q.coords[0];
    return v;
  });
  const KillingParts k = killing_operator(jet, sq);
  // full = diag(2 x1, 0, 0); trace-free part subtracts (2 x1 / 3) e.
  CHECK(k.full[0][0] == doctest::Approx(0.8).epsilon(1e-8));
  CHECK(k.trace_free[0][0] == doctest::Approx(0.8 - 0.8 / 3).epsilon(1e-8));
  CHECK(k.trace_free[1][1] == doctest::Approx(-0.8 / 3).epsilon(1e-8));

  const MetricSpec h = MetricSpec::hyperbolic_area(3);
  const ChartPoint q = polar(ChartKind::polar_area, 1.5, {0.8, 2.0});
  for (const ConformalKilling& x : conformal_basis(h))
    CHECK(max_abs(killing_operator(metric_jet(h, q), x.jet(q)).trace_free, 3) < 1e-12);
}

TEST_CASE("Hessian and Laplacian") {
  const ChartPoint p = cartesian({0.4, -1.1, 2.0, 0.3});
  ScalarJet v;
  v.at = p;
  for (int i = 0; i < 4; ++i) {
    v.value += 0.5 * p.coords[i] * p.coords[i];
    v.grad[i] = p.coords[i];
    v.hess[i][i] = 1.0;
  }
  const MetricJet e = metric_jet(MetricSpec::euclidean(4), p);
  CHECK(rel_diff(hessian(e, v), identity(4), 4) < 1e-15);
  // Delta = delta d is the nonnegative Laplacian.
  CHECK(laplacian(e, v) == doctest::Approx(-4.0));

  // Hess cosh r = cosh r b on hyperbolic space.
  const MetricSpec h = MetricSpec::hyperbolic_polar(3);
  const ChartPoint q = polar(ChartKind::polar_geodesic, 1.2, {0.7, 2.1});
  const MetricJet hj = metric_jet(h, q);
  const ScalarJet v0 = KernelFunction{KernelId::ah_v0, 0}.jet(q);
  Mat want{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) want[i][j] = std::cosh(1.2) * hj.g[i][j];
  CHECK(rel_diff(hessian(hj, v0), want, 3) < 1e-13);
  CHECK(laplacian(hj, v0) == doctest::Approx(-3.0 * std::cosh(1.2)).epsilon(1e-13));
}

TEST_CASE("adjoint linearized scalar curvature annihilates the model kernels") {
  for (int n = 3; n <= 5; ++n) {
    ChartPoint pc = cartesian({0.3, -0.8, 1.4});
    pc.n = n;
    for (int i = 3; i < n; ++i) pc.coords[i] = 0.2 * i;
    const MetricSpec e = MetricSpec::euclidean(n);
    const MetricJet ej = metric_jet(e, pc);
    const CurvatureBundle ec = curvature(ej);
    for (const KernelFunction& v : kernel_basis(e))
      CHECK(max_abs(dscal_adjoint(ej, v.jet(pc), ec), n) < 1e-13);

    for (const MetricSpec& h : {MetricSpec::hyperbolic_polar(n), MetricSpec::hyperbolic_area(n)}) {
      ChartPoint q = polar(chart_of(h), 1.1, {});
      q.n = n;
      for (int a = 1; a < n; ++a) q.coords[a] = 0.4 + 0.35 * a;
      const MetricJet hj = metric_jet(h, q);
      const CurvatureBundle hc = curvature(hj);
      for (const KernelFunction& v : kernel_basis(h))
        CHECK(max_abs(dscal_adjoint(hj, v.jet(q), hc), n) < 1e-11);
    }
  }
  // A non-kernel function is detected.
  const ChartPoint p = cartesian({0.3, -0.8, 1.4});
  const MetricJet ej = metric_jet(MetricSpec::euclidean(3), p);
  ScalarJet v;
  v.at = p;
  v.value = p.coords[0] * p.coords[0];
  v.grad[0] = 2 * p.coords[0];
  v.hess[0][0] = 2.0;
  CHECK(max_abs(dscal_adjoint(ej, v, curvature(ej)), 3) > 1.0);
}

TEST_CASE("degenerate metrics and chart mismatches") {
  Mat g = identity(3);
  g[2][2] = 0.0;
  CHECK_THROWS_AS(inverse_metric(g, 3), DegenerateMetric);
  g[2][2] = -1.0;
  CHECK_THROWS_AS(inverse_metric(g, 3), DegenerateMetric);
  CHECK(determinant(identity(4), 4) == doctest::Approx(1.0));

  MetricJet jet = metric_jet(MetricSpec::euclidean(3), cartesian({1, 2, 3}));
  jet.g[1][1] = 0.0;
  CHECK_THROWS_AS(curvature(jet), DegenerateMetric);

  CHECK_THROWS_AS(require_same_point(cartesian({1, 2, 3}), cartesian({1, 2, 3.5})), ChartMismatch);
  CHECK_THROWS_AS(require_same_point(cartesian({1, 0.5, 0.5}),
                                     polar(ChartKind::polar_area, 1, {0.5, 0.5})),
                  ChartMismatch);
  CHECK_NOTHROW(require_same_point(cartesian({1, 2, 3}), cartesian({1, 2, 3})));

  const ChartPoint p = cartesian({1, 2, 3});
  const ChartPoint q = cartesian({1, 2, 4});
  const MetricJet ej = metric_jet(MetricSpec::euclidean(3), p);
  VectorJet x;
  x.at = q;
  CHECK_THROWS_AS(divergence_vector(ej, x), ChartMismatch);
  ScalarJet v;
  v.at = q;
  CHECK_THROWS_AS(hessian(ej, v), ChartMismatch);
}
