#pragma once

// Characteristic series, entropy and pressure solves, S-graph determinants and
// sofic approximations.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cst/families.hpp"
#include "cst/genset.hpp"

namespace cst {

struct SeriesValue {
  double value = 0;  // partial sum up to depth
  double tail = 0;   // certified bound on the omitted terms
  int depth = 0;
};

/// sum_{n <= N} c(n) lambda^{-n} plus the tail bound past N.
/// Throws std::domain_error when lambda <= rho for an infinite family.
SeriesValue characteristic_fn(const GeneratingSet& G, double lambda, int N);

enum class SolveStatus { ok, degenerate, no_root };
std::string to_string(SolveStatus s);

struct CharacteristicSolution {
  SolveStatus status = SolveStatus::ok;
  double lambda_star = 0;
  double h_top = 0;  // log lambda_star; the pressure for weighted solves
  double lo = 0, hi = 0;
  int depth = 0;
  double residual = 0;  // bound on |f(lambda_star) - 1|
  double tol = 0;
  int iterations = 0;
  std::string note;
};

/// Phi(g) = offset + slope |g|, replaced by explicit values for listed
/// generators. With finite_support only the listed generators carry weight.
struct WeightedPotential {
  double offset = 0;
  double slope = 0;
  std::map<Word, double> overrides;
  bool finite_support = false;

  static WeightedPotential zero() { return {}; }
  /// Phi(g) = -t |g|
  static WeightedPotential length(double t);
  bool is_zero() const { return offset == 0 && slope == 0 && overrides.empty() && !finite_support; }
  double operator()(const Word& g) const;
};

CharacteristicSolution solve_entropy(const GeneratingSet& G, double tol = 1e-12);
/// Solves sum_g e^{Phi(g)} lambda^{-|g|} = 1; P = log lambda.
CharacteristicSolution solve_pressure(const GeneratingSet& G, const WeightedPotential& phi, double tol = 1e-12);

/// Root lambda >= 1 of sum_n coeff[n-1] lambda^{-n} = 1 for a finite spectrum.
struct FiniteRoot {
  SolveStatus status = SolveStatus::ok;
  double lambda = 1;
  int iterations = 0;
};
FiniteRoot solve_finite_series(const std::vector<long double>& coeff, double tol = 1e-13);

// -- S-graphs ------------------------------------------------------------------

struct SGraphSpec {
  std::vector<GapSet> S;  // S_1 .. S_d
  int r = 0;              // letters that are generators of length one
};

/// 1 - r x - x sum_i sum_{s in S_i, s <= N} x^s, with the tail of the
/// omitted members bounded in closed form.
SeriesValue sgraph_char_value(const SGraphSpec& spec, double x, int N);

// -- sofic approximation -------------------------------------------------------

struct SoficStep {
  long long m = 0;       // number of generators used
  int max_len = 0;       // length of the m-th generator
  SolveStatus status = SolveStatus::ok;
  double lambda = 1;
};

/// lambda_m for the first m generators (length, then lexicographic order).
std::vector<SoficStep> sofic_approx_entropies(const GeneratingSet& G, int m_max, double tol = 1e-13);
/// lambda_m at the m covering all generators of length <= L, for L = 1..L_max.
/// Uses counts only, so large length classes are fine.
std::vector<SoficStep> sofic_by_length(const GeneratingSet& G, int L_max, double tol = 1e-13,
                                       bool parallel = true);

// -- h(G) ----------------------------------------------------------------------

struct GensetEntropy {
  int N = 0;
  int window_lo = 0;
  double ratio_estimate = 0;  // max (log c(n))/n over the window
  double slope_estimate = 0;  // least-squares slope of log c(n) over the window
  std::optional<double> closed_form;
};
GensetEntropy genset_entropy(const GeneratingSet& G, int N);

}  // namespace cst
