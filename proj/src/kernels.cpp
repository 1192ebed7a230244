#include "cst/kernels.hpp"

#include <unordered_map>

#include <omp.h>

namespace cst::kernels {

std::vector<FiniteRoot> prefix_roots_serial(const std::vector<long double>& coeff, double tol) {
  std::vector<FiniteRoot> out(coeff.size());
  for (std::size_t L = 1; L <= coeff.size(); ++L)
    out[L - 1] = solve_finite_series(std::vector<long double>(coeff.begin(), coeff.begin() + L), tol);
  return out;
}

std::vector<FiniteRoot> prefix_roots_omp(const std::vector<long double>& coeff, double tol) {
  const long long n = static_cast<long long>(coeff.size());
  std::vector<FiniteRoot> out(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long L = 1; L <= n; ++L)
    out[L - 1] = solve_finite_series(std::vector<long double>(coeff.begin(), coeff.begin() + L), tol);
  return out;
}

std::vector<BigCount> transfer_counts_serial(const FactorAutomaton& A, int n_max) {
  const int S = A.states(), k = A.alphabet_size;
  std::vector<BigCount> v(S), next(S);
  v[A.start] = 1;
  std::vector<BigCount> out{1};
  for (int n = 1; n <= n_max; ++n) {
    for (auto& x : next) x = 0;
    for (int q = 0; q < S; ++q) {
      if (v[q] == 0) continue;
      for (int a = 0; a < k; ++a)
        if (int t = A.delta[q * k + a]; t >= 0) next[t] += v[q];
    }
    std::swap(v, next);
    BigCount total = 0;
    for (const auto& x : v) total += x;
    out.push_back(std::move(total));
  }
  return out;
}

std::vector<BigCount> transfer_counts_omp(const FactorAutomaton& A, int n_max) {
  const int S = A.states(), k = A.alphabet_size;
  // incoming edges in CSR form, so each target is summed by one thread
  std::vector<int> offset(S + 1, 0), sources;
  for (int q = 0; q < S; ++q)
    for (int a = 0; a < k; ++a)
      if (int t = A.delta[q * k + a]; t >= 0) ++offset[t + 1];
  for (int t = 0; t < S; ++t) offset[t + 1] += offset[t];
  sources.resize(offset[S]);
  std::vector<int> fill(offset.begin(), offset.end() - 1);
  for (int q = 0; q < S; ++q)
    for (int a = 0; a < k; ++a)
      if (int t = A.delta[q * k + a]; t >= 0) sources[fill[t]++] = q;

  std::vector<BigCount> v(S), next(S);
  v[A.start] = 1;
  std::vector<BigCount> out{1};
  for (int n = 1; n <= n_max; ++n) {
#pragma omp parallel for schedule(static)
    for (int t = 0; t < S; ++t) {
      BigCount s = 0;
      for (int e = offset[t]; e < offset[t + 1]; ++e) s += v[sources[e]];
      next[t] = std::move(s);
    }
    std::swap(v, next);
    BigCount total = 0;
    for (const auto& x : v) total += x;
    out.push_back(std::move(total));
  }
  return out;
}

namespace {

void run_chunk(const WindowSampler& sampler, int n, long long chunk, long long samples, std::uint64_t seed,
               std::unordered_map<Word, long long>& counts) {
  auto rng = make_stream(seed, static_cast<std::uint64_t>(chunk) + 1);
  const long long begin = chunk * kSampleChunk, end = std::min(samples, begin + kSampleChunk);
  for (long long i = begin; i < end; ++i) ++counts[sampler.sample(n, rng).word];
}

BlockCounts finish(const WindowSampler& sampler, int n, long long samples,
                   const std::unordered_map<Word, long long>& counts) {
  BlockCounts bc;
  bc.n = n;
  bc.samples = samples;
  bc.cap = sampler.cap();
  bc.counts.insert(counts.begin(), counts.end());
  return bc;
}

}  // namespace

BlockCounts block_counts_serial(const WindowSampler& sampler, int n, long long samples, std::uint64_t seed) {
  std::unordered_map<Word, long long> counts;
  const long long chunks = (samples + kSampleChunk - 1) / kSampleChunk;
  for (long long c = 0; c < chunks; ++c) run_chunk(sampler, n, c, samples, seed, counts);
  return finish(sampler, n, samples, counts);
}

BlockCounts block_counts_omp(const WindowSampler& sampler, int n, long long samples, std::uint64_t seed) {
  std::unordered_map<Word, long long> counts;
  const long long chunks = (samples + kSampleChunk - 1) / kSampleChunk;
#pragma omp parallel
  {
    std::unordered_map<Word, long long> local;
#pragma omp for schedule(dynamic, 4)
    for (long long c = 0; c < chunks; ++c) run_chunk(sampler, n, c, samples, seed, local);
#pragma omp critical
    for (const auto& [w, k] : local) counts[w] += k;
  }
  return finish(sampler, n, samples, counts);
}

}  // namespace cst::kernels
