#include <benchmark/benchmark.h>

#include "asym/charges.hpp"
#include "asym/expr.hpp"
#include "asym/geometry.hpp"
#include "asym/metric.hpp"
#include "asym/quadrature.hpp"
#include "asym/verify.hpp"

using namespace asym;

namespace {

ChartPoint point(int n) {
  ChartPoint p;
  p.n = n;
  for (int i = 0; i < n; ++i) p.coords[i] = 1.0 + 0.3 * i;
  return p;
}

void BM_MetricJet(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const MetricSpec s = MetricSpec::schwarzschild(n, 1.0);
  const ChartPoint p = point(n);
  for (auto _ : state) benchmark::DoNotOptimize(metric_jet(s, p));
}
BENCHMARK(BM_MetricJet)->DenseRange(3, 5);

void BM_Curvature(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const MetricJet jet = metric_jet(MetricSpec::schwarzschild(n, 1.0), point(n));
  for (auto _ : state) benchmark::DoNotOptimize(curvature(jet));
}
BENCHMARK(BM_Curvature)->DenseRange(3, 5);

void BM_ExpressionJet(benchmark::State& state) {
  const ExprAst e = parse("(1 + m/(2*r))^4 * exp(-x1^2/(1 + r^2)) + sin(x2*x3)", 3,
                          ChartKind::cartesian, {"m"});
  const ChartPoint p = point(3);
  const std::vector<double> params{1.0};
  for (auto _ : state) benchmark::DoNotOptimize(e.eval_jet(p, params));
}
BENCHMARK(BM_ExpressionJet);

void BM_SphereRule(benchmark::State& state) {
  const int degree = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sphere_rule(4, degree));
}
BENCHMARK(BM_SphereRule)->Arg(10)->Arg(20)->Arg(40);

void BM_SphereIntegral(benchmark::State& state) {
  const SphereRule rule = sphere_rule(3, static_cast<int>(state.range(0)));
  const Measure m = Measure::coordinate(ChartKind::cartesian, 3);
  const QuadOptions opts{.threads = static_cast<int>(state.range(1))};
  const auto f = [](const SphereNode& s) { return 1.0 / (2.0 + s.unit[0] * s.unit[1]); };
  for (auto _ : state) benchmark::DoNotOptimize(integrate_sphere(f, 3.0, rule, m, opts));
}
BENCHMARK(BM_SphereIntegral)->Args({20, 1})->Args({40, 1})->Args({40, 4});

void BM_MassFlux(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const MetricSpec s = MetricSpec::schwarzschild(n, 1.0);
  const ChargeSpec c{state.range(1) ? ChargeKind::mass_ricci : ChargeKind::mass_classical, 0, {}};
  for (auto _ : state) benchmark::DoNotOptimize(flux_sample(s, c, 16.0));
}
BENCHMARK(BM_MassFlux)->Args({3, 0})->Args({3, 1})->Args({4, 1})->Unit(benchmark::kMillisecond);

void BM_KottlerRicciCharge(benchmark::State& state) {
  const MetricSpec k = MetricSpec::kottler(3, 1.0);
  const std::vector<double> radii = geometric_radii(3, 2, 5);
  for (auto _ : state) benchmark::DoNotOptimize(ah_ricci_charge(k, 0, radii));
}
BENCHMARK(BM_KottlerRicciCharge)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
