#include "cst/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cst/kernels.hpp"

namespace cst {

namespace {

constexpr std::size_t kEnumerateBelow = 4096;

}  // namespace

WindowSampler::WindowSampler(const GBernoulliMeasure& mu, double shortfall, int max_cap)
    : mu_(&mu), shortfall_(shortfall) {
  int min_cap = 1;
  for (const auto& [g, v] : mu.phi.overrides) min_cap = std::max(min_cap, static_cast<int>(g.size()));
  auto short_at = [&](int L) { return std::max(mu.mass_tail_beyond(L), mu.moment_tail_beyond(L) / mu.c); };

  if (auto ml = mu.G.max_length()) {
    cap_ = *ml;
  } else if (mu.K == 0) {
    cap_ = min_cap;
  } else {
    int L = std::max(min_cap, 8);
    while (L < max_cap && !(short_at(L) < shortfall)) L = std::min(2 * L, max_cap);
    if (!(short_at(L) < shortfall))
      throw std::domain_error("sampler: truncated mass " + std::to_string(short_at(L)) + " at cap " +
                              std::to_string(L) + " exceeds the shortfall threshold");
    int lo = std::max(min_cap, L / 2) - 1;
    while (lo + 1 < L) {
      const int mid = (lo + L) / 2;
      if (short_at(mid) < shortfall)
        L = mid;
      else
        lo = mid;
    }
    cap_ = L;
  }

  std::map<int, int> overridden;
  for (const auto& [g, v] : mu.phi.overrides) ++overridden[static_cast<int>(g.size())];
  long double cp = 0, cs = 0;
  for (int n = 1; n <= cap_; ++n) {
    if (mu.K == 0) break;
    const Count k = mu.G.count(n) - overridden[n];
    if (k <= 0) continue;
    const long double w = k * mu.length_weight(n);
    if (w == 0) continue;
    cats_.push_back({n, std::nullopt});
    cp += w;
    cs += n * w;
    cum_p_.push_back(cp);
    cum_size_.push_back(cs);
  }
  for (const auto& [g, v] : mu.phi.overrides) {
    const long double w = mu.p(g);
    cats_.push_back({static_cast<int>(g.size()), g});
    cp += w;
    cs += g.size() * w;
    cum_p_.push_back(cp);
    cum_size_.push_back(cs);
  }
  if (cats_.empty()) throw std::domain_error("sampler: measure has no mass below the cap");
}

std::size_t WindowSampler::pick(const std::vector<long double>& cum, Rng& rng) const {
  const long double u = uniform01(rng) * cum.back();
  const auto it = std::upper_bound(cum.begin(), cum.end(), u);
  return std::min<std::size_t>(it - cum.begin(), cum.size() - 1);
}

Word WindowSampler::realize(const Category& cat, Rng& rng) const {
  if (cat.word) return *cat.word;
  const auto& overrides = mu_->phi.overrides;
  const auto& G = mu_->G;
  if (G.count(cat.length) <= kEnumerateBelow) {
    const auto& all = G.enumerate(cat.length);
    for (;;) {
      const Word& g = all[uniform_index(rng, all.size())];
      if (!overrides.count(g)) return g;
    }
  }
  for (;;) {
    Word g = G.source().sample(cat.length, rng);
    if (!overrides.count(g)) return g;
  }
}

Word WindowSampler::draw_generator(Rng& rng) const { return realize(cats_[pick(cum_p_, rng)], rng); }

Word WindowSampler::draw_origin(Rng& rng) const { return realize(cats_[pick(cum_size_, rng)], rng); }

SampleWindow WindowSampler::sample(int len, Rng& rng) const {
  if (len < 1) throw std::invalid_argument("sample: window length must be >= 1");
  SampleWindow s;
  s.origin_block = draw_origin(rng);
  s.offset = static_cast<int>(uniform_index(rng, s.origin_block.size()));
  s.word = s.origin_block.substr(s.offset);
  while (static_cast<int>(s.word.size()) < len) s.word += draw_generator(rng);
  s.word.resize(len);
  return s;
}

SampleWindow sample_window(const GBernoulliMeasure& mu, int len, std::uint64_t seed) {
  WindowSampler sampler(mu);
  auto rng = make_stream(seed, 0);
  return sampler.sample(len, rng);
}

BlockCounts block_counts(const GBernoulliMeasure& mu, int n, long long samples, std::uint64_t seed, bool parallel) {
  if (n < 1 || samples < 1) throw std::invalid_argument("block_counts: n and samples must be >= 1");
  WindowSampler sampler(mu);
  return parallel ? kernels::block_counts_omp(sampler, n, samples, seed)
                  : kernels::block_counts_serial(sampler, n, samples, seed);
}

double plugin_entropy(const BlockCounts& bc) {
  double H = 0;
  for (const auto& [w, k] : bc.counts) {
    const double f = static_cast<double>(k) / bc.samples;
    H -= f * std::log(f);
  }
  return H / bc.n;
}

double empirical_entropy(const GBernoulliMeasure& mu, int n, long long samples, std::uint64_t seed) {
  if (static_cast<double>(n) * samples > kEntropyBudget)
    throw std::invalid_argument("empirical_entropy: n * samples exceeds the sampling budget");
  return plugin_entropy(block_counts(mu, n, samples, seed));
}

}  // namespace cst
