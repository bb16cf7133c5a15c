#include <benchmark/benchmark.h>

#include <memory>

#include "mrtlab/expsum.hpp"
#include "mrtlab/nud.hpp"
#include "mrtlab/phase_eval.hpp"
#include "mrtlab/poly_family.hpp"
#include "mrtlab/prime_arith.hpp"

using namespace mrtlab;

static void BM_Sieve(benchmark::State& st) {
  const auto limit = static_cast<std::uint64_t>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(PrimeTable::sieve(limit).primes().size());
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_Sieve)->Arg(1 << 20)->Arg(1 << 24)->Unit(benchmark::kMillisecond);

static void BM_PhaseBlocks(benchmark::State& st) {
  const auto pf = make_phase_function(static_cast<int>(st.range(0)));
  const auto comb = pf.log_combination(mpz_class(1'000'000));
  const std::uint64_t first = 1000, count = 1 << 20;
  for (auto _ : st) {
    double acc = 0;
    for_each_phase(comb, first, first + count - 1, [&](std::uint64_t, Turns t) { acc += t.unit().real(); });
    benchmark::DoNotOptimize(acc);
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(count));
}
BENCHMARK(BM_PhaseBlocks)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

static void BM_PhaseAnchor(benchmark::State& st) {
  const auto pf = make_phase_function(static_cast<int>(st.range(0)));
  const auto comb = pf.log_combination(mpz_class(1'000'000));
  std::uint64_t n = 12345;
  for (auto _ : st) benchmark::DoNotOptimize(phase_at(comb, n++));
}
BENCHMARK(BM_PhaseAnchor)->DenseRange(0, 3);

static void BM_ExpSum(benchmark::State& st) {
  ExpSumSpec sp;
  sp.phase = std::make_shared<const PhaseFunction>(make_phase_function(1));
  sp.s = 10'000'000;
  sp.a = 1;
  sp.b = static_cast<std::uint64_t>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(exp_sum(sp).value);
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_ExpSum)->Arg(177827)->Arg(1 << 22)->Unit(benchmark::kMillisecond);

static void BM_PQFactored(benchmark::State& st) {
  const int d = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(pq_polynomials(d).P.degree());
}
BENCHMARK(BM_PQFactored)->DenseRange(4, 12, 2)->Unit(benchmark::kMillisecond);

static void BM_PQRecurrence(benchmark::State& st) {
  const int d = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(pq_via_recurrence(d).P.degree());
}
BENCHMARK(BM_PQRecurrence)->DenseRange(4, 10, 2)->Unit(benchmark::kMillisecond);

static void BM_NuDSampling(benchmark::State& st) {
  const int d = static_cast<int>(st.range(0));
  std::uint64_t stream = 0;
  for (auto _ : st) benchmark::DoNotOptimize(sample_nu_d(d, 1024, 1, stream++).back());
  st.SetItemsProcessed(st.iterations() * 1024);
}
BENCHMARK(BM_NuDSampling)->DenseRange(0, 6, 3);
BENCHMARK_MAIN();
