#include "cst/genset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "cst/rng.hpp"

namespace cst {

// -- generic pattern counting ---------------------------------------------

bool has_prefix(std::string_view g, std::string_view s) {
  return g.size() >= s.size() && g.compare(0, s.size(), s) == 0;
}

bool has_suffix(std::string_view g, std::string_view s) {
  return g.size() >= s.size() && g.compare(g.size() - s.size(), s.size(), s) == 0;
}

int interior_occurrences(std::string_view g, std::string_view s) {
  int k = 0;
  for (std::size_t l = 1; l + s.size() < g.size(); ++l)
    if (g.compare(l, s.size(), s) == 0) ++k;
  return k;
}

bool GeneratorSource::contains(std::string_view w) const {
  if (w.empty()) return false;
  auto words = enumerate(static_cast<int>(w.size()));
  return std::binary_search(words.begin(), words.end(), w,
                            [](std::string_view a, std::string_view b) { return a < b; });
}

Word GeneratorSource::sample(int n, Rng& rng) const {
  auto words = enumerate(n);
  if (words.empty()) throw std::logic_error("sample: no generator of length " + std::to_string(n));
  return words[uniform_index(rng, words.size())];
}

Count GeneratorSource::count_prefix(std::string_view s, int n) const {
  if (static_cast<int>(s.size()) > n) return 0;
  Count k = 0;
  for (const auto& g : enumerate(n)) k += has_prefix(g, s);
  return k;
}

Count GeneratorSource::count_suffix(std::string_view s, int n) const {
  if (static_cast<int>(s.size()) > n) return 0;
  Count k = 0;
  for (const auto& g : enumerate(n)) k += has_suffix(g, s);
  return k;
}

Count GeneratorSource::count_infix(std::string_view s, int n) const {
  if (static_cast<int>(s.size()) + 2 > n) return 0;
  Count k = 0;
  for (const auto& g : enumerate(n)) k += interior_occurrences(g, s);
  return k;
}

long double GeneratorSource::pattern_mass(PatternKind kind, std::string_view s, long double x, int lo,
                                          int hi) const {
  if (auto m = max_length()) hi = std::min(hi, *m);
  long double total = 0;
  for (int n = std::max(lo, 1); n <= hi; ++n) {
    const Count k = kind == PatternKind::Prefix   ? count_prefix(s, n)
                    : kind == PatternKind::Suffix ? count_suffix(s, n)
                                                  : count_infix(s, n);
    if (k != 0) total += k * std::pow(x, static_cast<long double>(n));
  }
  return total;
}

// -- explicit ----------------------------------------------------------------

ExplicitSource::ExplicitSource(Alphabet alphabet, std::vector<Word> words, std::string name)
    : alphabet_(std::move(alphabet)), words_(std::move(words)), name_(std::move(name)) {
  std::unordered_set<Word> seen;
  for (const auto& w : words_) {
    if (w.empty()) throw std::invalid_argument("generating set contains the empty word");
    if (!alphabet_.valid(w)) throw std::invalid_argument("generator uses a symbol outside the alphabet");
    if (!seen.insert(w).second)
      throw std::invalid_argument("duplicate generator '" + alphabet_.format(w) + "'");
  }
  std::sort(words_.begin(), words_.end(), [](const Word& a, const Word& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  for (const auto& w : words_) by_length_[static_cast<int>(w.size())].push_back(w);
  max_len_ = words_.empty() ? 0 : static_cast<int>(words_.back().size());
}

Count ExplicitSource::count(int n) const {
  auto it = by_length_.find(n);
  return it == by_length_.end() ? 0 : static_cast<Count>(it->second.size());
}

std::vector<Word> ExplicitSource::enumerate(int n) const {
  auto it = by_length_.find(n);
  return it == by_length_.end() ? std::vector<Word>{} : it->second;
}

bool ExplicitSource::contains(std::string_view w) const {
  auto it = by_length_.find(static_cast<int>(w.size()));
  if (it == by_length_.end()) return false;
  return std::binary_search(it->second.begin(), it->second.end(), w,
                            [](std::string_view a, std::string_view b) { return a < b; });
}

// -- union ---------------------------------------------------------------------

UnionSource::UnionSource(std::shared_ptr<const GeneratorSource> base, std::vector<Word> extra,
                         std::string name)
    : base_(std::move(base)), extra_(base_->alphabet(), std::move(extra)), name_(std::move(name)) {
  for (const auto& w : extra_.words())
    if (base_->contains(w))
      throw std::invalid_argument("extra generator '" + alphabet().format(w) + "' already in base set");
}

std::optional<int> UnionSource::max_length() const {
  auto b = base_->max_length();
  if (!b) return std::nullopt;
  return std::max(*b, *extra_.max_length());
}

Count UnionSource::count(int n) const { return base_->count(n) + extra_.count(n); }

std::vector<Word> UnionSource::enumerate(int n) const {
  auto out = base_->enumerate(n);
  auto more = extra_.enumerate(n);
  out.insert(out.end(), more.begin(), more.end());
  std::sort(out.begin(), out.end());
  return out;
}

bool UnionSource::contains(std::string_view w) const { return extra_.contains(w) || base_->contains(w); }

Word UnionSource::sample(int n, Rng& rng) const {
  const Count nb = base_->count(n), ne = extra_.count(n);
  if (ne > 0 && uniform01(rng) * static_cast<double>(nb + ne) >= static_cast<double>(nb)) {
    auto words = extra_.enumerate(n);
    return words[uniform_index(rng, words.size())];
  }
  return base_->sample(n, rng);
}

Count UnionSource::count_prefix(std::string_view s, int n) const {
  return base_->count_prefix(s, n) + extra_.count_prefix(s, n);
}
Count UnionSource::count_suffix(std::string_view s, int n) const {
  return base_->count_suffix(s, n) + extra_.count_suffix(s, n);
}
Count UnionSource::count_infix(std::string_view s, int n) const {
  return base_->count_infix(s, n) + extra_.count_infix(s, n);
}
long double UnionSource::pattern_mass(PatternKind kind, std::string_view s, long double x, int lo,
                                      int hi) const {
  return base_->pattern_mass(kind, s, x, lo, hi) + extra_.pattern_mass(kind, s, x, lo, hi);
}
std::optional<double> UnionSource::entropy_closed_form() const { return base_->entropy_closed_form(); }

// -- GeneratingSet -------------------------------------------------------------

GeneratingSet GeneratingSet::from_words(const Alphabet& alphabet, std::vector<Word> words) {
  GeneratingSet g;
  g.kind_ = GenSetKind::Explicit;
  auto src = std::make_shared<ExplicitSource>(alphabet, std::move(words));
  if (src->words().empty()) throw std::invalid_argument("generating set is empty");
  g.tail_ = TailBound{0.0, 1.0, *src->max_length() + 1};
  g.source_ = std::move(src);
  return g;
}

GeneratingSet GeneratingSet::from_strings(const Alphabet& alphabet, const std::vector<std::string>& words) {
  std::vector<Word> ws;
  for (const auto& s : words) ws.push_back(alphabet.parse(s));
  return from_words(alphabet, std::move(ws));
}

GeneratingSet GeneratingSet::family(std::shared_ptr<const GeneratorSource> source, TailBound tail,
                                    std::string certificate) {
  if (!(tail.C >= 0) || !(tail.rho >= 1.0) || tail.N0 < 1)
    throw std::invalid_argument("tail bound needs C >= 0, rho >= 1, N0 >= 1");
  GeneratingSet g;
  g.kind_ = GenSetKind::Family;
  g.source_ = std::move(source);
  g.tail_ = tail;
  g.certificate_ = std::move(certificate);
  for (int n = tail.N0; n <= tail.N0 + 64; ++n) {
    const long double bound = static_cast<long double>(tail.C) * std::pow(static_cast<long double>(tail.rho), n);
    const Count c = g.count(n);
    if (c < 0 || c > bound * (1 + 1e-9L))
      throw std::invalid_argument("tail bound violated at n=" + std::to_string(n) + " for family " +
                                  g.name());
  }
  return g;
}

Count GeneratingSet::count(int n) const {
  if (n < 1) return 0;
  std::lock_guard lock(cache_->mu);
  auto& v = cache_->counts;
  while (static_cast<int>(v.size()) < n) v.push_back(source_->count(static_cast<int>(v.size()) + 1));
  return v[n - 1];
}

std::vector<Count> GeneratingSet::length_spectrum(int N) const {
  if (N < 1) throw std::invalid_argument("length_spectrum: N must be >= 1");
  std::vector<Count> out;
  out.reserve(N);
  for (int n = 1; n <= N; ++n) out.push_back(count(n));
  return out;
}

const std::vector<Word>& GeneratingSet::enumerate(int n, std::size_t budget) const {
  {
    std::lock_guard lock(cache_->mu);
    auto it = cache_->words.find(n);
    if (it != cache_->words.end()) return it->second;
  }
  if (count(n) > static_cast<Count>(budget))
    throw std::runtime_error("enumeration of length " + std::to_string(n) + " exceeds budget (" +
                             std::to_string(static_cast<double>(count(n))) + " generators)");
  std::vector<Word> words;
  try {
    words = source_->enumerate(n);
  } catch (const std::exception& e) {
    throw std::runtime_error("enumeration failed at n=" + std::to_string(n) + ": " + e.what());
  }
  std::lock_guard lock(cache_->mu);
  return cache_->words.emplace(n, std::move(words)).first->second;
}

std::vector<Word> GeneratingSet::truncation(int max_len, std::size_t budget) const {
  std::vector<Word> out;
  if (auto m = max_length()) max_len = std::min(max_len, *m);
  Count total = 0;
  for (int n = 1; n <= max_len; ++n) total += count(n);
  if (total > static_cast<Count>(budget))
    throw std::runtime_error("truncation to length " + std::to_string(max_len) + " exceeds budget");
  for (int n = 1; n <= max_len; ++n) {
    const auto& ws = enumerate(n, budget);
    out.insert(out.end(), ws.begin(), ws.end());
  }
  return out;
}

MembershipFn GeneratingSet::membership() const {
  auto src = source_;
  return [src](std::string_view w) { return src->contains(w); };
}

double GeneratingSet::tail_sum(double x, int N) const {
  if (auto m = max_length(); m && N >= *m) return 0.0;
  if (tail_.C == 0.0 && N >= tail_.N0 - 1) return 0.0;
  if (N < tail_.N0 - 1) return std::numeric_limits<double>::infinity();
  const double r = tail_.rho * x;
  if (!(r < 1.0)) return std::numeric_limits<double>::infinity();
  return tail_.C * std::pow(r, N + 1) / (1.0 - r);
}

double GeneratingSet::tail_moment(double x, int N) const {
  if (auto m = max_length(); m && N >= *m) return 0.0;
  if (tail_.C == 0.0 && N >= tail_.N0 - 1) return 0.0;
  if (N < tail_.N0 - 1) return std::numeric_limits<double>::infinity();
  const double r = tail_.rho * x;
  if (!(r < 1.0)) return std::numeric_limits<double>::infinity();
  return tail_.C * std::pow(r, N + 1) * ((N + 1) - N * r) / ((1.0 - r) * (1.0 - r));
}

// -- Sardinas-Patterson ------------------------------------------------------

namespace {

struct SpNode {
  Word dangling;
  std::size_t cost;  // length of the longer partial parse
  int parent;        // -1 for roots
  Word appended;     // generator appended to the behind side (roots: the longer word)
  Word root_short;   // roots only: the shorter word
};

}  // namespace

UdVerdict sardinas_patterson(const std::vector<Word>& code_in) {
  if (code_in.empty()) throw std::invalid_argument("sardinas_patterson: empty code");
  std::vector<Word> code = code_in;
  std::sort(code.begin(), code.end());
  code.erase(std::unique(code.begin(), code.end()), code.end());
  std::unordered_set<std::string_view> members(code.begin(), code.end());
  std::size_t maxlen = 0;
  for (const auto& g : code) maxlen = std::max(maxlen, g.size());

  UdVerdict out;
  out.code_size = code.size();
  out.max_gen_len = static_cast<int>(maxlen);

  std::vector<SpNode> nodes;
  using Item = std::pair<std::size_t, int>;  // (cost, node)
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  std::unordered_map<Word, std::size_t> best;

  auto push = [&](SpNode node) {
    auto it = best.find(node.dangling);
    if (it != best.end() && it->second <= node.cost) return;
    best[node.dangling] = node.cost;
    nodes.push_back(std::move(node));
    queue.emplace(nodes.back().cost, static_cast<int>(nodes.size()) - 1);
  };

  for (const auto& g : code)
    for (std::size_t k = 1; k < g.size(); ++k)
      if (members.count(std::string_view(g).substr(0, k)))
        push(SpNode{g.substr(k), g.size(), -1, g, g.substr(0, k)});

  std::unordered_set<Word> done;
  int hit = -1;
  while (!queue.empty()) {
    auto [cost, id] = queue.top();
    queue.pop();
    const Word d = nodes[id].dangling;
    if (nodes[id].cost != best[d] || !done.insert(d).second) continue;
    if (members.count(d)) {
      hit = id;
      break;
    }
    // generators that are proper prefixes of d
    for (std::size_t k = 1; k < d.size() && k <= maxlen; ++k) {
      auto pre = std::string_view(d).substr(0, k);
      if (members.count(pre)) push(SpNode{d.substr(k), cost, id, Word(pre), {}});
    }
    // generators having d as a proper prefix
    for (auto it = std::lower_bound(code.begin(), code.end(), d); it != code.end() && has_prefix(*it, d); ++it)
      if (it->size() > d.size()) push(SpNode{it->substr(d.size()), cost + it->size() - d.size(), id, *it, {}});
  }
  if (hit < 0) return out;

  // Replay the path from its root to rebuild both parses.
  std::vector<int> path;
  for (int v = hit; v >= 0; v = nodes[v].parent) path.push_back(v);
  std::reverse(path.begin(), path.end());
  std::vector<Word> ahead{nodes[path[0]].appended}, behind{nodes[path[0]].root_short};
  Word dangling = nodes[path[0]].dangling;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Word& g = nodes[path[i]].appended;
    behind.push_back(g);
    if (g.size() > dangling.size()) std::swap(ahead, behind);
    dangling = nodes[path[i]].dangling;
  }
  behind.push_back(dangling);
  Word w;
  for (const auto& g : ahead) w += g;
  out.decipherable = false;
  out.witness = w;
  out.parse_a = ahead;
  out.parse_b = behind;
  return out;
}

UdVerdict sardinas_patterson(const GeneratingSet& G, int max_gen_len) {
  auto code = G.truncation(max_gen_len);
  if (code.empty()) throw std::invalid_argument("sardinas_patterson: truncated code is empty");
  auto v = sardinas_patterson(code);
  v.max_gen_len = max_gen_len;
  return v;
}

UniquenessReport unique_representation_check(const GeneratingSet& G, int horizon, int max_gen_len) {
  UniquenessReport r;
  r.horizon = horizon;
  r.max_gen_len = std::min(horizon, max_gen_len);
  if (!G.certificate().empty()) {
    r.pass = true;
    r.certificate = G.certificate();
    return r;
  }
  r.searched = true;
  r.verdict = sardinas_patterson(G, r.max_gen_len);
  r.pass = r.verdict.decipherable;
  return r;
}

}  // namespace cst
