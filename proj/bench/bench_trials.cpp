// SPDX-License-Identifier: Apache-2.0
// Serial reference loop vs OpenMP trial-parallel loop on the Monte Carlo studies.
#include <benchmark/benchmark.h>
#include <omp.h>

#include "tsgrqi/harness.hpp"

namespace {

using tsgrqi::ExecutionPolicy;

void table1(benchmark::State& state, ExecutionPolicy policy)
{
  auto cfg = tsgrqi::table1_defaults();
  cfg.trials = state.range(0);
  cfg.policy = policy;
  for (auto _ : state) benchmark::DoNotOptimize(tsgrqi::run_table1(cfg).summary.successes);
  state.SetItemsProcessed(state.iterations() * cfg.trials);
  state.counters["threads"] = policy == ExecutionPolicy::Parallel ? omp_get_max_threads() : 1;
}

void hamiltonian(benchmark::State& state, ExecutionPolicy policy)
{
  auto cfg = tsgrqi::hamiltonian_defaults();
  cfg.trials = state.range(0);
  cfg.policy = policy;
  for (auto _ : state) benchmark::DoNotOptimize(tsgrqi::run_hamiltonian(cfg).summary.successes);
  state.SetItemsProcessed(state.iterations() * cfg.trials);
  state.counters["threads"] = policy == ExecutionPolicy::Parallel ? omp_get_max_threads() : 1;
}

}  // namespace

BENCHMARK_CAPTURE(table1, serial, ExecutionPolicy::Serial)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(table1, openmp, ExecutionPolicy::Parallel)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(hamiltonian, serial, ExecutionPolicy::Serial)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(hamiltonian, openmp, ExecutionPolicy::Parallel)->Arg(100)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
