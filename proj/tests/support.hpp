#pragma once

// Independent oracles for the test suites. None of these call into the
// library's solvers; they work on plain strings and small dense matrices.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "cst/families.hpp"
#include "cst/words.hpp"

namespace oracle {

using cst::Word;

inline Word sym(std::initializer_list<int> s) {
  Word w;
  for (int c : s) w.push_back(static_cast<char>(c));
  return w;
}

/// Text "0101" over digit alphabets to symbol bytes.
inline Word digits(const std::string& text) {
  Word w;
  for (char ch : text) w.push_back(static_cast<char>(ch - '0'));
  return w;
}

/// Parse count by trying every one of the 2^(n-1) cut sets.
inline long long cut_set_parses(const Word& w, const std::set<Word>& code) {
  if (w.empty()) return 1;
  const int n = static_cast<int>(w.size());
  long long total = 0;
  for (std::uint32_t mask = 0; mask < (1u << (n - 1)); ++mask) {
    std::size_t start = 0;
    bool ok = true;
    for (int i = 1; i <= n && ok; ++i) {
      if (i == n || (mask >> (i - 1)) & 1u) {
        ok = code.count(w.substr(start, i - start)) > 0;
        start = i;
      }
    }
    total += ok;
  }
  return total;
}

/// Parse count by left-to-right dynamic programming.
inline long long dp_parses(const Word& w, const std::set<Word>& code) {
  std::vector<long long> ways(w.size() + 1, 0);
  ways[0] = 1;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!ways[i]) continue;
    for (const auto& g : code)
      if (w.compare(i, g.size(), g) == 0 && i + g.size() <= w.size()) ways[i + g.size()] += ways[i];
  }
  return ways[w.size()];
}

/// Calls f on every word of length n over {0..k-1} in lexicographic order.
inline void for_each_word(int k, int n, const std::function<void(const Word&)>& f) {
  Word w(n, 0);
  for (;;) {
    f(w);
    int i = n - 1;
    while (i >= 0 && w[i] == k - 1) w[i--] = 0;
    if (i < 0) return;
    ++w[i];
  }
}

/// Some word of length <= max_len with two or more parses, or "" if none.
inline std::pair<bool, Word> brute_ambiguous(const std::set<Word>& code, int k, int max_len) {
  for (int n = 1; n <= max_len; ++n) {
    std::pair<bool, Word> hit{false, {}};
    for_each_word(k, n, [&](const Word& w) {
      if (!hit.first && dp_parses(w, code) >= 2) hit = {true, w};
    });
    if (hit.first) return hit;
  }
  return {false, {}};
}

inline std::vector<std::size_t> naive_occurrences(const Word& w, const Word& u) {
  std::vector<std::size_t> out;
  if (u.size() > w.size()) return out;
  for (std::size_t i = 0; i + u.size() <= w.size(); ++i) {
    bool eq = true;
    for (std::size_t j = 0; j < u.size(); ++j) eq = eq && w[i + j] == u[j];
    if (eq) out.push_back(i);
  }
  return out;
}

/// All length-n factors of concatenations of code words.
inline std::set<Word> factor_language(const std::vector<Word>& code, int n) {
  std::size_t longest = 0;
  for (const auto& g : code) longest = std::max(longest, g.size());
  const std::size_t reach = n + 2 * longest;
  std::set<Word> out;
  std::vector<Word> stack{Word{}};
  while (!stack.empty()) {
    Word c = stack.back();
    stack.pop_back();
    for (std::size_t i = 0; i + n <= c.size(); ++i) out.insert(c.substr(i, n));
    if (c.size() >= reach) continue;
    for (const auto& g : code) stack.push_back(c + g);
  }
  return out;
}

inline long long fibonacci(int n) {
  long long a = 0, b = 1;
  for (int i = 0; i < n; ++i) {
    const long long t = a + b;
    a = b;
    b = t;
  }
  return a;
}

/// Spectral radius of a small nonnegative matrix.
inline double spectral_radius(const Eigen::MatrixXd& M) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(M);
  double r = 0;
  for (int i = 0; i < M.rows(); ++i) r = std::max(r, std::abs(es.eigenvalues()[i]));
  return r;
}

/// Determinant of the S-graph matrix at x for gap sets given by member lists
/// (sigma_i = sum x^s over members) with r one-letter generators.
inline double sgraph_determinant(const std::vector<std::vector<int>>& S, int r, double x) {
  const int d = static_cast<int>(S.size());
  const int n = d + r + 1;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  std::vector<double> sigma(d, 0.0);
  for (int i = 0; i < d; ++i)
    for (int s : S[i]) sigma[i] += std::pow(x, s);
  M(0, 0) = 1;
  for (int i = 1; i <= d; ++i) M(0, i) = -x;
  for (int i = 1; i <= d; ++i) {
    M(i, 0) = -sigma[i - 1];
    M(i, i) = 1;
    for (int j = d + 1; j <= d + r; ++j) M(i, j) = -sigma[i - 1];
  }
  for (int j = d + 1; j <= d + r; ++j) {
    M(j, 0) = -x;
    for (int k = d + 1; k <= d + r; ++k) M(j, k) = (j == k) ? 1 - x : -x;
  }
  return M.determinant();
}

/// A small valid parameter set for every preset.
inline nlohmann::json example_params(const std::string& name) {
  using nlohmann::json;
  if (name == "sgap") return {{"S", {0, 1, 3}}};
  if (name == "multigap") return {{"S", json::array({json::array({1, 2}), json{{"start", 0}, {"step", 2}}})}};
  if (name == "beta") return {{"beta", 2.5}};
  if (name == "theorem_a") return {{"sft", {{"alphabet", "01"}, {"forbidden", {"11"}}}}, {"epsilon", 0.1}, {"n", 4}};
  if (name == "augmented") return {{"base", {{"name", "three_mme"}}}, {"epsilon", 0.05}, {"depth", 3}};
  return json::object();
}

inline cst::GeneratingSet example_preset(const std::string& name) { return cst::preset(name, example_params(name)); }

}  // namespace oracle
