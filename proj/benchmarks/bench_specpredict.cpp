#include <benchmark/benchmark.h>

#include <numeric>

#include "specpredict/duality.hpp"
#include "specpredict/predictors.hpp"
#include "specpredict/spectral_factor.hpp"

namespace sp = specpredict;

namespace {

// |I + M e_1|^2 style q x q weight with a fixed, well-conditioned lag-1 block.
sp::WeightFunction test_weight(int q) {
  sp::Matrix m1 = sp::Matrix::Zero(q, q);
  for (int r = 0; r < q; ++r) {
    for (int c = 0; c < q; ++c) m1(r, c) = sp::cplx(0.3 / (1 + r + c), 0.05 * (r - c));
  }
  sp::Matrix m0 = sp::Matrix::Identity(q, q) + m1.adjoint() * m1;
  return sp::WeightFunction::trig_poly({sp::hermitian_part(m0), m1});
}

}  // namespace

static void BM_fourier_coefficients(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto g = sp::evaluate_on_grid(test_weight(2), n);
  for (auto _ : state) benchmark::DoNotOptimize(sp::fourier_coefficients(g, 128));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_fourier_coefficients)->RangeMultiplier(4)->Range(1 << 10, 1 << 14)->Complexity();

static void BM_factorize(benchmark::State& state) {
  const auto g = sp::evaluate_on_grid(test_weight(static_cast<int>(state.range(0))), 4096);
  for (auto _ : state) benchmark::DoNotOptimize(sp::factorize(g));
}
BENCHMARK(BM_factorize)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_gram_project_past(benchmark::State& state) {
  const auto g = sp::evaluate_on_grid(test_weight(2), 4096);
  const int k = static_cast<int>(state.range(0));
  const auto lags = sp::IndexSetSpec::past().truncated(k);
  for (auto _ : state) benchmark::DoNotOptimize(sp::gram_project(g, sp::Geometry::Direct, lags, k));
}
BENCHMARK(BM_gram_project_past)->RangeMultiplier(2)->Range(16, 256)->Unit(benchmark::kMillisecond);

static void BM_nakazi(benchmark::State& state) {
  const auto f = sp::factorize(sp::evaluate_on_grid(test_weight(2), 4096));
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sp::nakazi_predict(f, n));
}
BENCHMARK(BM_nakazi)->Arg(1)->Arg(8)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_dual_projection_check(benchmark::State& state) {
  const auto w = test_weight(2);
  sp::VerifyOptions o;
  o.window = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sp::dual_projection_check(w, sp::IndexSetSpec::nakazi(1), o));
}
BENCHMARK(BM_dual_projection_check)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
