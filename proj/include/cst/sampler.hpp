#pragma once

// Stationary sampling from G-Bernoulli measures and empirical block statistics.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "cst/measures.hpp"
#include "cst/rng.hpp"

namespace cst {

struct SampleWindow {
  Word word;
  Word origin_block;  // generator containing coordinate 0
  int offset = 0;     // position of coordinate 0 inside origin_block
};

/// Draws generators with probabilities p_g truncated at a cap whose omitted
/// mass (and size-biased mass) is below `shortfall`.
class WindowSampler {
 public:
  explicit WindowSampler(const GBernoulliMeasure& mu, double shortfall = 1e-9, int max_cap = 8192);

  int cap() const { return cap_; }
  double shortfall() const { return shortfall_; }
  const GBernoulliMeasure& measure() const { return *mu_; }

  Word draw_generator(Rng& rng) const;
  /// Origin block with law |g| p_g / c.
  Word draw_origin(Rng& rng) const;
  SampleWindow sample(int len, Rng& rng) const;

 private:
  struct Category {
    int length = 0;
    std::optional<Word> word;  // set for generators with their own probability
  };
  Word realize(const Category& cat, Rng& rng) const;
  std::size_t pick(const std::vector<long double>& cum, Rng& rng) const;

  const GBernoulliMeasure* mu_;
  int cap_ = 0;
  double shortfall_ = 0;
  std::vector<Category> cats_;
  std::vector<long double> cum_p_, cum_size_;
};

/// Deterministic in (mu, len, seed, cap).
SampleWindow sample_window(const GBernoulliMeasure& mu, int len, std::uint64_t seed);

struct BlockCounts {
  int n = 0;
  long long samples = 0;
  int cap = 0;
  std::map<Word, long long> counts;  // word at coordinates [0, n)
};

/// Counts of the n-block at coordinate 0 over independent stationary draws.
/// Chunk k uses stream k + 1 of `seed`, so the result does not depend on
/// the thread count.
BlockCounts block_counts(const GBernoulliMeasure& mu, int n, long long samples, std::uint64_t seed,
                         bool parallel = true);

/// -(1/n) sum f log f over the observed n-blocks.
double plugin_entropy(const BlockCounts& bc);
/// Sample budget n * samples accepted by empirical_entropy.
inline constexpr long long kEntropyBudget = 200'000'000;
double empirical_entropy(const GBernoulliMeasure& mu, int n, long long samples, std::uint64_t seed);

}  // namespace cst
