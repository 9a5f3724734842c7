// Hot paths: per-family path construction, cone queries, moment sums, and
// the spectrum pipeline. Run with --benchmark_min_time=... for stable
// numbers; defaults keep the suite under a minute.

#include <benchmark/benchmark.h>

#include "cascade/analysis.hpp"
#include "cascade/cascades.hpp"
#include "cascade/convergence.hpp"
#include "cascade/models.hpp"
#include "cascade/simulate.hpp"
#include "cascade/weights.hpp"

namespace {

using namespace cascade;

BadicIndependentModel canonical_model() {
  FiniteAtomicLaw law;
  law.atoms = {{Complex(0.5, 0.0), 0.5}, {Complex(1.5, 0.0), 0.5}};
  return badic_iid(2, WeightLaw(law));
}

CompoundPoissonModel cone_model() {
  CompoundPoissonModel m;
  m.base = 2;
  m.beta = 1.0;
  m.intensity = IntensityMeasure::scale_invariant(1.0);
  m.mark = WeightLaw(GaussianPerturbedLaw{0.5});
  return m;
}

LogInfDivisibleModel cell_model(int m_cells) {
  LogInfDivisibleModel m;
  m.base = 2;
  m.drift = {-0.25, 0.0};
  m.gaussian = {{{0.5, 0.0}, {0.0, 0.0}}};
  m.m_cells = m_cells;
  return m;
}

void bm_build_badic(benchmark::State& state) {
  const auto model = CascadeModel(canonical_model());
  const auto leb = ReferenceMeasure::lebesgue();
  const int n = static_cast<int>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_paths(model, leb, seed++, n));
  }
  state.SetComplexityN(std::int64_t{1} << n);
}
BENCHMARK(bm_build_badic)->Arg(8)->Arg(10)->Arg(12)->Complexity();

void bm_build_cone(benchmark::State& state) {
  const auto model = CascadeModel(cone_model());
  const auto leb = ReferenceMeasure::lebesgue();
  const int n = static_cast<int>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_paths(model, leb, seed++, n, 2));
  }
}
BENCHMARK(bm_build_cone)->Arg(6)->Arg(8);

void bm_build_cell_field(benchmark::State& state) {
  const auto model = CascadeModel(cell_model(static_cast<int>(state.range(0))));
  const auto leb = ReferenceMeasure::lebesgue();
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_paths(model, leb, seed++, 6, 2));
  }
}
BENCHMARK(bm_build_cell_field)->Arg(8)->Arg(32);

void bm_cone_point_eval(benchmark::State& state) {
  ConePointRealization real(cone_model(), 17, 8);
  double t = 0.0;
  for (auto _ : state) {
    t += 1.0 / 4096.0;
    if (t >= 1.0) t = 0.0;
    benchmark::DoNotOptimize(real.eval_Q(t, 8));
  }
}
BENCHMARK(bm_cone_point_eval);

void bm_moment_sum_closed(benchmark::State& state) {
  const auto model = canonical_model();
  const auto leb = ReferenceMeasure::lebesgue();
  for (auto _ : state) {
    benchmark::DoNotOptimize(level_moment_sum_closed(model, leb, 8, 2.0));
  }
}
BENCHMARK(bm_moment_sum_closed);

void bm_phi_grid(benchmark::State& state) {
  const auto model = CascadeModel(canonical_model());
  const auto leb = ReferenceMeasure::lebesgue();
  for (auto _ : state) {
    for (int i = 1; i <= 32; ++i) {
      benchmark::DoNotOptimize(phi_closed(model, leb, i / 16.0));
    }
  }
}
BENCHMARK(bm_phi_grid);

void bm_verdict(benchmark::State& state) {
  const auto model = CascadeModel(canonical_model());
  const auto leb = ReferenceMeasure::lebesgue();
  for (auto _ : state) {
    VerdictOptions vo;
    benchmark::DoNotOptimize(convergence_verdict(model, leb, vo));
  }
}
BENCHMARK(bm_verdict);

void bm_spectrum(benchmark::State& state) {
  const auto model = CascadeModel(canonical_model());
  const auto leb = ReferenceMeasure::lebesgue();
  const int n = static_cast<int>(state.range(0));
  const PathSample path = build_paths(model, leb, 11, n);
  const SampledPath sp = path_generation(path, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(large_deviation_spectrum(sp, 2, n));
  }
}
BENCHMARK(bm_spectrum)->Arg(10)->Arg(12);

void bm_structure_exponents(benchmark::State& state) {
  const auto model = CascadeModel(canonical_model());
  const auto leb = ReferenceMeasure::lebesgue();
  const PathSample path = build_paths(model, leb, 11, 12);
  const SampledPath sp = path_generation(path, 12);
  const std::vector<double> qs{0.0, 0.5, 1.0, 1.5, 2.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(structure_exponents(sp, qs, 2, 12));
  }
}
BENCHMARK(bm_structure_exponents);

}  // namespace

BENCHMARK_MAIN();
