#pragma once

// Generator builders: small sequential entropy over a prescribed SFT, and
// augmentation of a generating set by marker-bracketed words.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cst/genset.hpp"

namespace cst {

/// Irreducible subshift of finite type given by forbidden words.
struct SftSpec {
  Alphabet alphabet;
  std::vector<Word> forbidden;
  Word periodic;  // p with p^infinity in Z
  Word minimal_forbidden;  // a = k a~, not in L(Z), proper subwords are
  Symbol k = 0;
  Word a_tail;
  int memory = 1;  // K: Z is determined by its (K+1)-windows

  /// Essential K-block graph: vertices are words of length K that extend
  /// both ways, edges are admissible (K+1)-words.
  std::vector<Word> vertices;
  std::vector<std::vector<int>> succ;

  std::map<Word, int> index;

  bool in_language(std::string_view w) const;
  bool irreducible() const;
  /// Words of L(Z) of length n in lexicographic order.
  std::vector<Word> words(int n) const;
};

/// Builds the block graph, checks irreducibility, finds the minimal
/// forbidden word and, unless given, the shortest periodic word.
SftSpec make_sft(const Alphabet& alphabet, std::vector<Word> forbidden, std::optional<Word> periodic = {});
/// {"alphabet": [...] or "01", "forbidden": [...], "periodic": "0"}
SftSpec sft_from_json(const nlohmann::json& j);

struct Bridge {
  Word from, to, word;
};

/// Shortest, then lexicographically least, word v containing `k` with
/// x v y in L(Z).
Word bridge(const SftSpec& Z, const Word& x, const Word& y);

struct TheoremABuild {
  double epsilon = 0;
  std::vector<long long> m;
  std::vector<Word> w;  // w_1 .. w_{N+1}
  std::vector<Word> s, g;
  std::vector<Bridge> bridges;
  double certificate_sum = 0;   // sum_{i <= N} e^{-eps |g_i|}
  double certificate_tail = 0;  // bound on the remaining terms, e^{-i} each
  bool certified = false;
  GeneratingSet generators;
  SftSpec sft;
};

TheoremABuild build_theorem_a(const SftSpec& Z, double epsilon, int N);

struct AugmentationBuild {
  GeneratingSet base;
  Word u, v;
  int marker_horizon = 0;  // truncation length of the absence check
  std::vector<Word> w;     // w(1) .. w(depth)
  std::vector<Word> f;
  std::vector<long long> m;  // schedule used in the final round
  std::vector<int> pool_len;
  double epsilon = 0;
  double lambda_base = 0, lambda_aug = 0, bound = 0;
  bool certified = false;
  int rounds = 0;
  GeneratingSet combined;
};

/// f_i = u^{2^i |w(i)|} w(i) v^{2^i |w(i)|}. The schedule `m_schedule` gives
/// lower bounds |w(i)| >= m_i; it is doubled until lambda~ < lambda e^eps.
AugmentationBuild build_augmentation(const GeneratingSet& G, double epsilon, int depth,
                                     std::vector<int> m_schedule = {});

/// Lexicographically first primitive words u < v of the smallest length
/// l >= 2 absent from the factor language of the truncation to `horizon`,
/// with v not a rotation of u.
std::pair<Word, Word> find_markers(const GeneratingSet& G, int horizon);

}  // namespace cst
