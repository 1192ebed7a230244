#include "cst/words.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace cst {

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty() || symbols_.size() > 255)
    throw std::invalid_argument("alphabet must have between 1 and 255 symbols");
  std::unordered_set<std::string> seen;
  for (const auto& s : symbols_) {
    if (s.empty()) throw std::invalid_argument("alphabet symbol must be nonempty");
    if (!seen.insert(s).second) throw std::invalid_argument("duplicate alphabet symbol '" + s + "'");
    if (s.size() != 1) single_char_ = false;
  }
}

Alphabet Alphabet::from_chars(std::string_view chars) {
  std::vector<std::string> out;
  for (char ch : chars) out.emplace_back(1, ch);
  return Alphabet(std::move(out));
}

Alphabet Alphabet::digits(int k) {
  std::vector<std::string> out;
  for (int i = 0; i < k; ++i) out.push_back(std::to_string(i));
  return Alphabet(std::move(out));
}

std::optional<Symbol> Alphabet::find(std::string_view token) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i] == token) return static_cast<Symbol>(i);
  return std::nullopt;
}

Symbol Alphabet::index(std::string_view token) const {
  if (auto s = find(token)) return *s;
  throw std::invalid_argument("symbol '" + std::string(token) + "' is not in the alphabet");
}

Word Alphabet::parse(std::string_view text) const {
  Word w;
  if (text.empty()) return w;
  if (single_char_) {
    for (char ch : text) w.push_back(static_cast<char>(index(std::string_view(&ch, 1))));
    return w;
  }
  std::size_t start = 0;
  while (true) {
    auto comma = text.find(',', start);
    auto tok = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    w.push_back(static_cast<char>(index(tok)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return w;
}

std::string Alphabet::format(const Word& w) const {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!single_char_ && i > 0) out.push_back(',');
    out += token(static_cast<Symbol>(w[i]));
  }
  return out;
}

bool Alphabet::valid(const Word& w) const {
  return std::all_of(w.begin(), w.end(),
                     [&](char c) { return static_cast<Symbol>(c) < symbols_.size(); });
}

std::vector<std::size_t> occurrences(std::string_view w, std::string_view pattern) {
  if (pattern.empty()) throw std::invalid_argument("occurrences: empty pattern");
  std::vector<std::size_t> out;
  for (auto pos = w.find(pattern); pos != std::string_view::npos; pos = w.find(pattern, pos + 1))
    out.push_back(pos);
  return out;
}

namespace {

// ways[i] = number of parses of w[i..)
std::vector<BigCount> suffix_parse_counts(std::string_view w, const MembershipFn& is_generator,
                                          std::size_t max_gen_len) {
  const std::size_t n = w.size();
  std::vector<BigCount> ways(n + 1);
  ways[n] = 1;
  for (std::size_t i = n; i-- > 0;) {
    const std::size_t lim = std::min(max_gen_len, n - i);
    for (std::size_t len = 1; len <= lim; ++len)
      if (ways[i + len] != 0 && is_generator(w.substr(i, len))) ways[i] += ways[i + len];
  }
  return ways;
}

}  // namespace

BigCount count_factorizations(std::string_view w, const MembershipFn& is_generator,
                              std::size_t max_gen_len) {
  return suffix_parse_counts(w, is_generator, max_gen_len)[0];
}

FactorizationList factorize(std::string_view w, const MembershipFn& is_generator,
                            std::size_t max_gen_len, std::size_t limit) {
  const auto ways = suffix_parse_counts(w, is_generator, max_gen_len);
  FactorizationList out;
  out.total = ways[0];
  if (ways[0] == 0) return out;

  const std::size_t n = w.size();
  std::vector<std::size_t> cuts{0};
  // Depth-first with ascending block length yields lexicographic cut order;
  // ways[] prunes dead branches so every leaf is a complete parse.
  std::function<bool(std::size_t)> dfs = [&](std::size_t i) -> bool {
    if (i == n) {
      if (out.parses.size() >= limit) {
        out.truncated = true;
        return false;
      }
      Factorization f;
      f.cut_points = cuts;
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
        f.blocks.emplace_back(w.substr(cuts[k], cuts[k + 1] - cuts[k]));
      out.parses.push_back(std::move(f));
      return true;
    }
    const std::size_t lim = std::min(max_gen_len, n - i);
    for (std::size_t len = 1; len <= lim; ++len) {
      if (ways[i + len] == 0 || !is_generator(w.substr(i, len))) continue;
      cuts.push_back(i + len);
      bool go_on = dfs(i + len);
      cuts.pop_back();
      if (!go_on) return false;
    }
    return true;
  };
  dfs(0);
  return out;
}

}  // namespace cst
