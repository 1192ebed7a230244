#include "cst/sofic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <unordered_map>

#include "cst/kernels.hpp"

namespace cst {

namespace {

struct VecHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = v.size();
    for (int x : v) h ^= std::hash<int>()(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

}  // namespace

StateBudgetExceeded::StateBudgetExceeded(std::size_t explored_, std::size_t pending_, int nfa_states_)
    : std::runtime_error("factor automaton: subset construction exceeded the state budget after " +
                         std::to_string(explored_) + " states (" + std::to_string(pending_) +
                         " pending, " + std::to_string(nfa_states_) + " NFA states)"),
      explored(explored_),
      pending(pending_),
      nfa_states(nfa_states_) {}

std::size_t FactorAutomaton::transitions() const {
  return static_cast<std::size_t>(std::count_if(delta.begin(), delta.end(), [](int t) { return t >= 0; }));
}

std::vector<std::vector<int>> FactorAutomaton::transfer_matrix() const {
  const int n = states();
  std::vector<std::vector<int>> T(n, std::vector<int>(n, 0));
  for (int q = 0; q < n; ++q)
    for (int a = 0; a < alphabet_size; ++a)
      if (int t = delta[q * alphabet_size + a]; t >= 0) ++T[q][t];
  return T;
}

FactorAutomaton factor_automaton(const std::vector<Word>& words, int alphabet_size, std::size_t budget) {
  if (words.empty()) throw std::invalid_argument("factor automaton: empty generating set");
  if (alphabet_size < 1) throw std::invalid_argument("factor automaton: empty alphabet");

  // flower NFA: state 0 is the hub, each word of length l adds l - 1 states
  std::vector<std::vector<std::vector<int>>> nfa(1, std::vector<std::vector<int>>(alphabet_size));
  std::size_t nfa_edges = 0;
  for (const auto& w : words) {
    if (w.empty()) throw std::invalid_argument("factor automaton: empty generator");
    int cur = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const int a = static_cast<unsigned char>(w[i]);
      if (a >= alphabet_size) throw std::invalid_argument("factor automaton: symbol outside the alphabet");
      int next = 0;
      if (i + 1 < w.size()) {
        next = static_cast<int>(nfa.size());
        nfa.emplace_back(alphabet_size);
      }
      nfa[cur][a].push_back(next);
      ++nfa_edges;
      cur = next;
    }
  }

  FactorAutomaton A;
  A.alphabet_size = alphabet_size;
  A.nfa_states = static_cast<int>(nfa.size());
  A.nfa_transitions = nfa_edges;

  std::unordered_map<std::vector<int>, int, VecHash> index;
  std::vector<std::vector<int>> sets;
  std::vector<int> all(nfa.size());
  for (std::size_t i = 0; i < nfa.size(); ++i) all[i] = static_cast<int>(i);
  index.emplace(all, 0);
  sets.push_back(std::move(all));

  for (std::size_t k = 0; k < sets.size(); ++k) {
    for (int a = 0; a < alphabet_size; ++a) {
      std::vector<int> next;
      for (int s : sets[k])
        for (int t : nfa[s][a]) next.push_back(t);
      if (next.empty()) {
        A.delta.push_back(-1);
        continue;
      }
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      auto it = index.find(next);
      if (it == index.end()) {
        if (sets.size() >= budget) throw StateBudgetExceeded(k, sets.size() - k, A.nfa_states);
        it = index.emplace(next, static_cast<int>(sets.size())).first;
        sets.push_back(std::move(next));
      }
      A.delta.push_back(it->second);
    }
  }
  return A;
}

FactorAutomaton factor_automaton(const GeneratingSet& Gm, std::size_t budget) {
  if (!Gm.finite()) throw std::invalid_argument("factor automaton: the generating set must be finite");
  return factor_automaton(Gm.truncation(*Gm.max_length()), static_cast<int>(Gm.alphabet().size()), budget);
}

bool accepts(const FactorAutomaton& A, std::string_view w) {
  int q = A.start;
  for (char ch : w) {
    const int a = static_cast<unsigned char>(ch);
    if (a >= A.alphabet_size) return false;
    q = A.delta[q * A.alphabet_size + a];
    if (q < 0) return false;
  }
  return true;
}

BigCount count_language(const FactorAutomaton& A, int n) { return language_counts(A, n, false).back(); }

std::vector<BigCount> language_counts(const FactorAutomaton& A, int n_max, bool parallel) {
  if (n_max < 0) throw std::invalid_argument("language counts: n must be >= 0");
  return parallel ? kernels::transfer_counts_omp(A, n_max) : kernels::transfer_counts_serial(A, n_max);
}

double log_count(const BigCount& v) {
  if (v <= 0) return -std::numeric_limits<double>::infinity();
  const auto bits = boost::multiprecision::msb(v);
  if (bits < 1000) return std::log(v.convert_to<double>());
  const unsigned shift = static_cast<unsigned>(bits - 60);
  const BigCount top = v >> shift;
  return std::log(top.convert_to<double>()) + shift * std::log(2.0);
}

}  // namespace cst
