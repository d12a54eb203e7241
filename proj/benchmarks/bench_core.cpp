#include <cmath>
#include <numbers>

#include <benchmark/benchmark.h>

#include "kdvflat/airy.hpp"
#include "kdvflat/analysis.hpp"
#include "kdvflat/flatout.hpp"
#include "kdvflat/genfun.hpp"
#include "kdvflat/jets.hpp"
#include "kdvflat/pde.hpp"
#include "kdvflat/synth.hpp"

namespace {

using namespace kdvflat;

const Profile sine = [](double x) { return std::sin(std::numbers::pi * x); };

void BM_JetExpSin(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const Jet t = jet_var(0.3, order);
    benchmark::DoNotOptimize(jet_exp(jet_sin(t) * t));
  }
}
BENCHMARK(BM_JetExpSin)->Arg(8)->Arg(24)->Arg(64);

void BM_BuildTable(benchmark::State& state) {
  const int i_max = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_table(1.0, i_max));
}
BENCHMARK(BM_BuildTable)->Arg(12)->Arg(30);

void BM_StepPhi(benchmark::State& state) {
  const StepParams step{2.0, 1.0, 0.5, 1.0};
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(step_phi(step, 0.37, depth));
}
BENCHMARK(BM_StepPhi)->Arg(6)->Arg(24);

void BM_SynthesizeControl(benchmark::State& state) {
  const auto table = build_table(0.0, 12);
  const double b[] = {3, -3, 3, -3, 3, -3, 3};
  const auto z = flat_output_reach(b, 0.5, 1.0, 13);
  const auto ts = linspace(0.0, 1.0, 1001);
  for (auto _ : state) benchmark::DoNotOptimize(synthesize_control(table, z, 12, ts));
}
BENCHMARK(BM_SynthesizeControl)->Unit(benchmark::kMillisecond);

void BM_SolveFree(benchmark::State& state) {
  Discretization d;
  d.n_x = static_cast<int>(state.range(0));
  d.n_t = 1000;
  for (auto _ : state) benchmark::DoNotOptimize(solve_free(sine, 1.0, 1.0, d));
}
BENCHMARK(BM_SolveFree)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_ModalTrace(benchmark::State& state) {
  for (auto _ : state) {
    const ModalTrace mt(sine, 1.0, Discretization{}, 0.05);
    benchmark::DoNotOptimize(mt.jet(0.5, 13));
  }
}
BENCHMARK(BM_ModalTrace)->Unit(benchmark::kMillisecond);

void BM_LemmaSweep(benchmark::State& state) {
  const double as[] = {0.5, 1.0, 4.0};
  for (auto _ : state) benchmark::DoNotOptimize(lemma_sweep(100, 9, 1, as, 3));
}
BENCHMARK(BM_LemmaSweep)->Unit(benchmark::kMillisecond);

void BM_AiryEval(benchmark::State& state) {
  double x = -4.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(airy_eval(x));
    x = x > 4.0 ? -4.0 : x + 0.01;
  }
}
BENCHMARK(BM_AiryEval);

}  // namespace

BENCHMARK_MAIN();
