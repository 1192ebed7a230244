#pragma once

// G-Bernoulli measures: construction, cylinder masses, entropy and Gibbs scans.

#include <map>
#include <string>
#include <vector>

#include "cst/entropy.hpp"
#include "cst/genset.hpp"

namespace cst {

/// A G-Bernoulli measure is its generator probabilities and the normalizer
/// c = sum |g| p_g. Probabilities have the form p_g = e^{Phi(g)} lambda^{-|g|},
/// so every generator without an explicit value gets K x^{|g|} with
/// K = e^{offset} and x = e^{slope} / lambda.
struct GBernoulliMeasure {
  GeneratingSet G;
  double lambda = 1;
  WeightedPotential phi;
  std::string source;  // "mme", "pressure" or "custom"

  double c = 0;       // normalizer, partial sum plus tail midpoint-free: partial only
  double c_tail = 0;  // bound on the omitted part of c
  double mass = 0;    // sum of p_g over the partial range
  double mass_tail = 0;
  int depth = 0;

  long double K = 1;
  long double x = 0;

  /// p_g; throws for words outside G.
  double p(const Word& g) const;
  /// Probability of a generator of length n without an explicit value.
  long double length_weight(int n) const;
  /// Bound on sum_{|g| > L} p_g.
  double mass_tail_beyond(int L) const;
  /// Bound on sum_{|g| > L} |g| p_g.
  double moment_tail_beyond(int L) const;
};

/// p_g = lambda*^{-|g|}; checks that sum p_g = 1 and that c is finite, both
/// with certified tails.
GBernoulliMeasure mme(const GeneratingSet& G, const CharacteristicSolution& sol);
/// p_g = e^{Phi(g)} e^{-P |g|} from a pressure solve.
GBernoulliMeasure equilibrium(const GeneratingSet& G, const WeightedPotential& phi,
                              const CharacteristicSolution& sol);
/// Finitely supported probabilities given explicitly.
GBernoulliMeasure custom_measure(const GeneratingSet& G, const std::map<Word, double>& p);

/// (1/c) prod p_g; 1/c for the empty list.
double g_cylinder(const GBernoulliMeasure& mu, const std::vector<Word>& gs);

struct CylinderEstimate {
  double value = 0;
  double tail_error = 0;
  long long covers_enumerated = 0;  // nonzero cover terms summed
  int cutoff = 0;
  bool sequential_only = true;  // the value is the mass carried by sequential points
};

/// Mass of the standard cylinder [w] at coordinate 0, summing all minimal
/// covers by generators of length <= L.
CylinderEstimate word_cylinder(const GBernoulliMeasure& mu, const Word& w, int L);
/// Smallest cap whose word_cylinder tail per coordinate is below `target`.
int default_cutoff(const GBernoulliMeasure& mu, double target = 1e-12, int max_cap = 4096);

struct MeasureEntropy {
  double h = 0;        // entropy of the measure
  double induced = 0;  // -sum p log p, the entropy of the induced Bernoulli measure
  double tail = 0;     // bound on the omitted part of `induced`
};
MeasureEntropy measure_entropy(const GBernoulliMeasure& mu);

/// sum_{|g| <= N} |g| mu([[g]]) and the bound on the rest; the total is 1.
SeriesValue partition_sum(const GBernoulliMeasure& mu, int N);

struct GibbsReport {
  std::vector<Word> words;
  std::vector<double> ratios;  // mu([w]) e^{|w| h}
  std::vector<double> tail_errors;
  double inf_ratio = 0, sup_ratio = 0;
};
GibbsReport gibbs_scan(const GBernoulliMeasure& mu, const std::vector<Word>& words, double h, int L);

}  // namespace cst
