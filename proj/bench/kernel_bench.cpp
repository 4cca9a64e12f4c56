// Serial reference kernels against the OpenMP versions on random relations
// of the size of the dining-philosophers state space.
#include <benchmark/benchmark.h>

#include "ebsched/kernel/kernels.hpp"
#include "ebsched/kernel/normal_form.hpp"
#include "ebsched/kernel/random.hpp"

using namespace ebsched::kernel;

namespace {

Rows sparse(std::size_t n, std::size_t out_degree, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<StateIndex>> lists(n);
  for (auto& row : lists)
    for (std::size_t k = 0; k < out_degree; ++k) row.push_back(static_cast<StateIndex>(rng.below(n)));
  return Rows::from_lists(std::move(lists));
}

void BM_ComposeSerial(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  Rows a = sparse(n, 4, 1), b = sparse(n, 4, 2);
  Bits all(n, true);
  for (auto _ : st) benchmark::DoNotOptimize(serial::compose(a, b, all));
}

void BM_ComposeParallel(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  Rows a = sparse(n, 4, 1), b = sparse(n, 4, 2);
  Bits all(n, true);
  for (auto _ : st) benchmark::DoNotOptimize(par::compose(a, b, all));
}

void BM_WellFoundedSerial(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  Rows a = sparse(n, 1, 3);
  for (auto _ : st) benchmark::DoNotOptimize(serial::well_founded(a));
}

void BM_WellFoundedParallel(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  Rows a = sparse(n, 1, 3);
  for (auto _ : st) benchmark::DoNotOptimize(par::well_founded(a));
}

void BM_ClosureSerial(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  Rows a = sparse(n, 1, 4);
  Bits all(n, true);
  for (auto _ : st) benchmark::DoNotOptimize(serial::closure(a, all));
}

void BM_ClosureParallel(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  Rows a = sparse(n, 1, 4);
  Bits all(n, true);
  for (auto _ : st) benchmark::DoNotOptimize(par::closure(a, all));
}

void BM_WeakIterClosedForm(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  auto space = line_space(n);
  NormalForm body{space, Bits(n, true), sparse(n, 2, 5)};
  for (auto _ : st) benchmark::DoNotOptimize(default_rules().weak_iter(body));
}

void BM_WeakIterKleene(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  auto space = line_space(n);
  NormalForm body{space, Bits(n, true), sparse(n, 2, 5)};
  for (auto _ : st) benchmark::DoNotOptimize(kleene_rules().weak_iter(body));
}

}  // namespace

BENCHMARK(BM_ComposeSerial)->Arg(1000)->Arg(10000);
BENCHMARK(BM_ComposeParallel)->Arg(1000)->Arg(10000);
BENCHMARK(BM_WellFoundedSerial)->Arg(1000)->Arg(10000);
BENCHMARK(BM_WellFoundedParallel)->Arg(1000)->Arg(10000);
BENCHMARK(BM_ClosureSerial)->Arg(200)->Arg(1000);
BENCHMARK(BM_ClosureParallel)->Arg(200)->Arg(1000);
BENCHMARK(BM_WeakIterClosedForm)->Arg(100)->Arg(400);
BENCHMARK(BM_WeakIterKleene)->Arg(100)->Arg(400);

BENCHMARK_MAIN();
