// Serial reference kernels against their OpenMP versions.

#include <benchmark/benchmark.h>

#include "cst/families.hpp"
#include "cst/kernels.hpp"

using namespace cst;

namespace {

std::vector<long double> dyck_spectrum(int n) {
  auto G = dyck_g1();
  std::vector<long double> c;
  for (int k = 1; k <= n; ++k) c.push_back(G.count(k));
  return c;
}

const FactorAutomaton& three_mme_automaton() {
  static const FactorAutomaton A = [] {
    auto G = three_mme();
    return factor_automaton(G.truncation(9), 5);
  }();
  return A;
}

const GBernoulliMeasure& dyck_mme() {
  static const GBernoulliMeasure mu = [] {
    auto G = dyck_g1();
    return mme(G, solve_entropy(G));
  }();
  return mu;
}

void BM_PrefixRootsSerial(benchmark::State& st) {
  auto c = dyck_spectrum(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::prefix_roots_serial(c, 1e-13));
}
void BM_PrefixRootsOmp(benchmark::State& st) {
  auto c = dyck_spectrum(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::prefix_roots_omp(c, 1e-13));
}
BENCHMARK(BM_PrefixRootsSerial)->Arg(40)->Arg(200);
BENCHMARK(BM_PrefixRootsOmp)->Arg(40)->Arg(200);

void BM_TransferSerial(benchmark::State& st) {
  const auto& A = three_mme_automaton();
  for (auto _ : st) benchmark::DoNotOptimize(kernels::transfer_counts_serial(A, static_cast<int>(st.range(0))));
}
void BM_TransferOmp(benchmark::State& st) {
  const auto& A = three_mme_automaton();
  for (auto _ : st) benchmark::DoNotOptimize(kernels::transfer_counts_omp(A, static_cast<int>(st.range(0))));
}
BENCHMARK(BM_TransferSerial)->Arg(60);
BENCHMARK(BM_TransferOmp)->Arg(60);

void BM_BlockCountsSerial(benchmark::State& st) {
  WindowSampler s(dyck_mme());
  for (auto _ : st) benchmark::DoNotOptimize(kernels::block_counts_serial(s, 8, st.range(0), 7));
}
void BM_BlockCountsOmp(benchmark::State& st) {
  WindowSampler s(dyck_mme());
  for (auto _ : st) benchmark::DoNotOptimize(kernels::block_counts_omp(s, 8, st.range(0), 7));
}
BENCHMARK(BM_BlockCountsSerial)->Arg(100000);
BENCHMARK(BM_BlockCountsOmp)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
