#include <benchmark/benchmark.h>

#include <random>

#include "chq/coulomb.hpp"
#include "chq/field.hpp"
#include "chq/kernels.hpp"

namespace {

using chq::cplx;

std::vector<cplx> random_values(std::size_t n) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  std::vector<cplx> v(n);
  for (cplx& x : v) x = {g(rng), g(rng)};
  return v;
}

template <bool Par>
void BM_Norm2(benchmark::State& state) {
  const std::size_t n = std::size_t(state.range(0));
  const auto x = random_values(n * n * n);
  for (auto _ : state) {
    double r = Par ? chq::kernels::omp::norm2(x) : chq::kernels::serial::norm2(x);
    benchmark::DoNotOptimize(r);
  }
  state.SetBytesProcessed(state.iterations() * std::int64_t(x.size() * sizeof(cplx)));
}

template <bool Par>
void BM_Axpby(benchmark::State& state) {
  const std::size_t n = std::size_t(state.range(0));
  const auto x = random_values(n * n * n);
  auto y = random_values(n * n * n);
  for (auto _ : state) {
    if (Par)
      chq::kernels::omp::axpby(0.5, x, 0.25, y);
    else
      chq::kernels::serial::axpby(0.5, x, 0.25, y);
    benchmark::ClobberMemory();
  }
}

template <bool Par>
void BM_Laplacian(benchmark::State& state) {
  const int n = int(state.range(0));
  auto f = random_values(std::size_t(n) * n * n);
  for (auto _ : state) {
    if (Par)
      chq::kernels::omp::laplacian_multiply(f, n, 0.3, 1e-3);
    else
      chq::kernels::serial::laplacian_multiply(f, n, 0.3, 1e-3);
    benchmark::ClobberMemory();
  }
}

void BM_Coulomb(benchmark::State& state) {
  const chq::Grid3 g = chq::make_grid(int(state.range(0)), 6.0);
  const chq::CoulombKernel k(g);
  const chq::ScalarField rho = chq::ScalarField::sample(g, [](const chq::Point3& x) {
    return std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
  });
  for (auto _ : state) benchmark::DoNotOptimize(k.convolve(rho));
}

}  // namespace

BENCHMARK(BM_Norm2<false>)->Arg(64)->Arg(128);
BENCHMARK(BM_Norm2<true>)->Arg(64)->Arg(128);
BENCHMARK(BM_Axpby<false>)->Arg(64)->Arg(128);
BENCHMARK(BM_Axpby<true>)->Arg(64)->Arg(128);
BENCHMARK(BM_Laplacian<false>)->Arg(64)->Arg(128);
BENCHMARK(BM_Laplacian<true>)->Arg(64)->Arg(128);
BENCHMARK(BM_Coulomb)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
