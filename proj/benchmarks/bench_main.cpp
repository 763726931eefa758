#include <benchmark/benchmark.h>

#include "utm/accum.hpp"
#include "utm/delta.hpp"
#include "utm/eigen.hpp"
#include "utm/presets.hpp"
#include "utm/solver.hpp"

using namespace utm;

namespace {

const Domain unit = Domain::finite(0.0, 1.0);
BoundaryConditions robin() { return BoundaryConditions::finite({-1, 1, 0, 0}, {0, 0, 1, 1}); }

void BM_Propagate(benchmark::State& state) {
  DispersionCache cache(make_preset("tanh_step"), unit);
  const int N = static_cast<int>(state.range(0));
  const SpectralParam s = SpectralParam::general(cplx(20.0, 8.0));
  for (auto _ : state) benchmark::DoNotOptimize(propagate_on(cache, s, 0.0, 1.0, {}, Direction::Forward, N));
}
BENCHMARK(BM_Propagate)->Arg(2)->Arg(4)->Arg(6);

void BM_DeltaAt(benchmark::State& state) {
  DispersionCache cache(make_preset("gaussian_bump"), unit);
  const auto bc = robin();
  cplx k(15.0, 6.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(delta_at(SpectralParam::general(k), bc, cache, 4));
    k += cplx(1e-6, 0.0);
  }
}
BENCHMARK(BM_DeltaAt);

void BM_SolvePoint(benchmark::State& state) {
  DispersionCache cache(make_preset("gaussian_bump"), unit);
  ProblemData d;
  d.q0 = [](double x) { return cplx(std::exp(-20 * (x - 0.4) * (x - 0.4))); };
  for (auto _ : state) benchmark::DoNotOptimize(solve_q(cache, robin(), d, {0.3, 0.6}, {0.1}));
}
BENCHMARK(BM_SolvePoint)->Unit(benchmark::kMillisecond);

void BM_CglEigs(benchmark::State& state) {
  DispersionCache cache(make_preset("cgl"), unit);
  const auto bc = BoundaryConditions::finite({1, 0, -1, 0}, {0, 1, 0, -1});
  for (auto _ : state) benchmark::DoNotOptimize(find_eigenvalues(bc, cache, default_region(cache, 5), 1));
}
BENCHMARK(BM_CglEigs)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace
BENCHMARK_MAIN();
