#include <benchmark/benchmark.h>

#include "fracmaps/cs_extension.hpp"
#include "fracmaps/discrete_energy.hpp"
#include "fracmaps/riesz_kernel.hpp"
#include "fracmaps/solver.hpp"

using namespace fracmaps;

namespace {

AmbientPoint vec2(double a, double b) {
  AmbientPoint p(2);
  p << a, b;
  return p;
}

LineGrid line(std::int64_t cells) { return {Interval(-1.0, 1.0), 2.0 / static_cast<double>(cells), 2.0}; }

void BM_KernelMassAdjacent(benchmark::State& state) {
  const FractionalOrder o(0.25);
  double x = 0.0;
  for (auto _ : state) {
    x += 1e-9;
    benchmark::DoNotOptimize(kernel_mass(Interval(x, 1.0), Interval(1.0, 2.0), o));
  }
}
BENCHMARK(BM_KernelMassAdjacent);

void BM_KernelMassFarField(benchmark::State& state) {
  const FractionalOrder o(0.25);
  for (auto _ : state) benchmark::DoNotOptimize(kernel_mass(Interval(0.0, 1.0), Interval(9.0, 10.0), o));
}
BENCHMARK(BM_KernelMassFarField);

void BM_QuadratureOracle(benchmark::State& state) {
  const FractionalOrder o(0.25);
  for (auto _ : state) benchmark::DoNotOptimize(quadrature_oracle(Interval(0.0, 1.0), Interval(1.0, 2.0), o, 1e-12));
}
BENCHMARK(BM_QuadratureOracle)->Unit(benchmark::kMicrosecond);

void BM_Assemble(benchmark::State& state) {
  const FractionalOrder o(0.25);
  const LineGrid g = line(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(assemble(g, o));
}
BENCHMARK(BM_Assemble)->RangeMultiplier(4)->Range(16, 1024)->Unit(benchmark::kMicrosecond);

void BM_EnergyAndGradient(benchmark::State& state) {
  const FractionalOrder o(0.25);
  const LineGrid g = line(state.range(0));
  const KernelMatrix K = assemble(g, o);
  const LatticeMap u = jump_map(g, vec2(1, 0), vec2(-1, 0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(energy(u, K, o));
    benchmark::DoNotOptimize(energy_gradient(u, K, o));
  }
}
BENCHMARK(BM_EnergyAndGradient)->RangeMultiplier(4)->Range(16, 1024)->Unit(benchmark::kMicrosecond);

void BM_MinimizeAntipodal(benchmark::State& state) {
  const FractionalOrder o(0.25);
  const LineGrid g = line(state.range(0));
  const KernelMatrix K = assemble(g, o);
  const LatticeMap u = jump_map(g, vec2(1, 0), vec2(-1, 0));
  SolverOptions opts;
  opts.perturbation = 1e-3;
  opts.seed = 7;
  for (auto _ : state) benchmark::DoNotOptimize(minimize(u, K, Sphere(2), o, opts));
}
BENCHMARK(BM_MinimizeAntipodal)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_PoissonExtend(benchmark::State& state) {
  const FractionalOrder o(0.25);
  const LatticeMap u = jump_map(line(32), vec2(1, 0), vec2(-1, 0));
  const double d = 1.0 / static_cast<double>(state.range(0));
  const HalfRectGrid hg(-1.5, 1.5, 1.0, d, d);
  for (auto _ : state) benchmark::DoNotOptimize(poisson_extend(u, hg, o));
}
BENCHMARK(BM_PoissonExtend)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_JumpDensityProfile(benchmark::State& state) {
  const FractionalOrder o(0.25);
  const LatticeMap u = jump_map(line(32), vec2(1, 0), vec2(-1, 0));
  const ExtensionField v = poisson_extend(u, HalfRectGrid(-1.0, 1.0, 1.0, 1.0 / 128, 1.0 / 128), o);
  for (auto _ : state) benchmark::DoNotOptimize(density_profile(v, 0.0, {0.125, 0.25, 0.5}, o));
}
BENCHMARK(BM_JumpDensityProfile)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
