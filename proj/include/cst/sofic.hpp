#pragma once

// Factor automata for finite generating sets and exact language counts.
//
// For a finite generating set the limit set is empty: a window longer than
// the longest generator cannot sit inside one generator. So the factor
// language of G^* is exactly L(X_G), and counting accepted words of the
// determinized flower automaton gives |L_n(X_G)|.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "cst/genset.hpp"

namespace cst {

struct FactorAutomaton {
  int alphabet_size = 0;
  int nfa_states = 0;
  std::size_t nfa_transitions = 0;
  int start = 0;
  /// delta[q * alphabet_size + a], -1 for the dead state
  std::vector<std::int32_t> delta;
  bool deterministic = true;

  int states() const { return alphabet_size ? static_cast<int>(delta.size()) / alphabet_size : 0; }
  std::size_t transitions() const;
  /// Transfer matrix entries T[p][q] = number of symbols leading p -> q.
  std::vector<std::vector<int>> transfer_matrix() const;
};

class StateBudgetExceeded : public std::runtime_error {
 public:
  StateBudgetExceeded(std::size_t explored, std::size_t pending, int nfa_states);
  std::size_t explored, pending;
  int nfa_states;
};

/// Flower automaton of the words (hub plus one loop per word), every state
/// initial and accepting, determinized by subset construction.
FactorAutomaton factor_automaton(const std::vector<Word>& words, int alphabet_size,
                                 std::size_t budget = 1'000'000);
FactorAutomaton factor_automaton(const GeneratingSet& Gm, std::size_t budget = 1'000'000);

bool accepts(const FactorAutomaton& A, std::string_view w);

/// |L_n|, exact.
BigCount count_language(const FactorAutomaton& A, int n);
/// |L_0|, ..., |L_n_max|.
std::vector<BigCount> language_counts(const FactorAutomaton& A, int n_max, bool parallel = true);

/// log of a nonnegative exact count; -inf for zero.
double log_count(const BigCount& v);

}  // namespace cst
