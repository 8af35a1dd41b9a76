#include <benchmark/benchmark.h>

#include <cmath>

#include "ldplab/freeprob.hpp"
#include "ldplab/lpp.hpp"
#include "ldplab/matrixlab.hpp"
#include "ldplab/measures.hpp"
#include "ldplab/specmeasures.hpp"
#include "ldplab/weights.hpp"

using namespace ldp;

static void BM_SampleWigner(benchmark::State& state) {
  const auto ens = WignerEnsemble::unit_variance(1.0);
  std::uint64_t r = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_wigner(ens, static_cast<std::size_t>(state.range(0)), 1, r++));
}
BENCHMARK(BM_SampleWigner)->Arg(100)->Arg(400);

static void BM_Spectrum(benchmark::State& state) {
  const auto a = sample_wigner(WignerEnsemble::unit_variance(1.0), static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(spectrum(a));
}
BENCHMARK(BM_Spectrum)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_FreeConvolutionPoint(benchmark::State& state) {
  const auto sc = semicircle_discretization(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(free_conv_semicircle_at(sc, cplx(0.5, 2.0)));
}
BENCHMARK(BM_FreeConvolutionPoint)->Arg(200)->Arg(2000);

static void BM_AlphaLawSample(benchmark::State& state) {
  const auto law = AlphaLaw::mu(0.5);
  std::uint64_t r = 0;
  for (auto _ : state) benchmark::DoNotOptimize(law.sample(10000, 3, r++));
}
BENCHMARK(BM_AlphaLawSample);

static void BM_LastPassage(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto w = WeightField::sample(2, n, AlphaLaw::mu(0.5), 4);
  for (auto _ : state) benchmark::DoNotOptimize(last_passage(w));
}
BENCHMARK(BM_LastPassage)->Arg(40)->Arg(200);

static void BM_DeterministicEquivalentT(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  WeightField h(2, n);
  h[h.size() - 1] = 1.0;
  const ShapeFunction g = [](const std::vector<double>& v) {
    const double s = std::sqrt(v[0]) + std::sqrt(v[1]);
    return s * s;
  };
  for (auto _ : state) benchmark::DoNotOptimize(deterministic_equivalent_T(h, g));
}
BENCHMARK(BM_DeterministicEquivalentT)->Arg(10)->Arg(20);

static void BM_TraceCubic(benchmark::State& state) {
  const auto x = sample_wigner(WignerEnsemble::unit_variance(1.0), static_cast<std::size_t>(state.range(0)), 5);
  const auto p = NCPolynomial::power(1, 3);
  for (auto _ : state) benchmark::DoNotOptimize(eval_trace(p, {x}));
}
BENCHMARK(BM_TraceCubic)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

static void BM_TauProduct(benchmark::State& state) {
  const auto grid = tau_grid(AlphaLaw::nu(1.0));
  const auto w = WeightFunction::corexp(0.25);
  const std::function<double(double)> wf = [&](double t) { return w(t); };
  std::vector<double> f(grid.nodes.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::max(0.0, grid.nodes[i] - 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(tau_product(grid, wf, f));
}
BENCHMARK(BM_TauProduct)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
