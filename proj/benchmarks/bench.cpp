#include <benchmark/benchmark.h>

#include <alqes/qes.hpp>
#include <alqes/spectral.hpp>
#include <alqes/verify.hpp>

#include <cmath>

using namespace alqes;

namespace {

PotentialParams integer_case() {
  return PotentialParams(Rational(2), Rational(1), ModulusParam(0.5), -2.0);
}

PotentialParams half_case() {
  const double d9 = std::sqrt(4.0 - 2.0 + 25.0 * 0.25);
  return PotentialParams(Rational(7, 2), Rational(1, 2), ModulusParam(0.5),
                         -2.0 - 29.0 * 0.125 + d9);
}

void BM_complete_k(benchmark::State& state) {
  const ModulusParam m(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(complete_k(m));
}
BENCHMARK(BM_complete_k);

void BM_jacobi(benchmark::State& state) {
  const ModulusParam m(0.5);
  double x = 0.0;
  for (auto _ : state) {
    x += 0.37;
    benchmark::DoNotOptimize(jacobi(x, m));
  }
}
BENCHMARK(BM_jacobi);

void BM_solve_integer_case(benchmark::State& state) {
  const PotentialParams p = integer_case();
  for (auto _ : state) benchmark::DoNotOptimize(solve_band_edges(p));
}
BENCHMARK(BM_solve_integer_case);

void BM_solve_half_case(benchmark::State& state) {
  const PotentialParams p = half_case();
  for (auto _ : state) benchmark::DoNotOptimize(solve_band_edges(p));
}
BENCHMARK(BM_solve_half_case);

// Per-energy cost of one discriminant evaluation at the step count used by
// the crosscheck; the potential table is precomputed once.
void BM_discriminant(benchmark::State& state) {
  const FloquetIntegrator fi(integer_case(), static_cast<int>(state.range(0)));
  double e = 0.0;
  for (auto _ : state) {
    e = e < 12.0 ? e + 0.1 : 0.0;
    benchmark::DoNotOptimize(fi.discriminant(e));
  }
}
BENCHMARK(BM_discriminant)->Arg(2000)->Arg(20000);

void BM_integrator_setup(benchmark::State& state) {
  const PotentialParams p = integer_case();
  for (auto _ : state) benchmark::DoNotOptimize(FloquetIntegrator(p, 20000));
}
BENCHMARK(BM_integrator_setup);

void BM_crosscheck(benchmark::State& state) {
  const PotentialParams p = integer_case();
  const auto sols = solve_band_edges(p);
  for (auto _ : state) benchmark::DoNotOptimize(crosscheck(sols, p, 2000));
}
BENCHMARK(BM_crosscheck);

}  // namespace

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  return 0;
}
