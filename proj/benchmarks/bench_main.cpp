#include <benchmark/benchmark.h>

#include <memory>

#include "calderon/dtn.hpp"
#include "calderon/fracpoisson.hpp"
#include "calderon/hilbert1d.hpp"
#include "calderon/numkit/bessel.hpp"
#include "calderon/radialbasis.hpp"

using namespace calderon;

static void BM_RadialBasis(benchmark::State& state) {
  ProblemParams params;
  params.n = 2;
  params.s = 0.5;
  const int k_max = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(radial::build_radial_basis(2, k_max, params));
}
BENCHMARK(BM_RadialBasis)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

static void BM_TriangleBasis(benchmark::State& state) {
  ProblemParams params;
  params.n = 2;
  for (auto _ : state) benchmark::DoNotOptimize(poisson::ExteriorBasis::build_triangle(params, 12));
}
BENCHMARK(BM_TriangleBasis)->Unit(benchmark::kMillisecond);

static void BM_GammaSection(benchmark::State& state) {
  ProblemParams params;
  const int elements = static_cast<int>(state.range(0));
  const auto basis = std::make_shared<const poisson::ExteriorBasis>(poisson::ExteriorBasis::build_triangle(params, 10));
  const dtn::GammaEvaluator evaluator(basis, poisson::triangle_indices(1, 10), {elements});
  const auto q = dtn::Potential::bump(1, 0.25 * evaluator.op().lambda_min(), {0.2, 0, 0}, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(evaluator.evaluate(q));
}
BENCHMARK(BM_GammaSection)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_FracOpAssembly(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(dtn::assemble_frac_op(static_cast<int>(state.range(0)), 0.5));
}
BENCHMARK(BM_FracOpAssembly)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_HilbertSvd(benchmark::State& state) {
  const int nodes = static_cast<int>(state.range(0));
  const auto ht = hilbert::build_ht(nodes, nodes);
  for (auto _ : state) benchmark::DoNotOptimize(hilbert::ht_svd(ht, 12));
}
BENCHMARK(BM_HilbertSvd)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_Bessel(benchmark::State& state) {
  const double z = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(numkit::bessel_i_scaled(0.25, z));
}
BENCHMARK(BM_Bessel)->Arg(1)->Arg(20)->Arg(200);

static void BM_MinNormControl(benchmark::State& state) {
  ProblemParams params;
  params.n = 3;
  const int p = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(poisson::min_norm_control(p, {p + 2, p + 2}, params));
}
BENCHMARK(BM_MinNormControl)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
