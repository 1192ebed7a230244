#include "cst/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "cst/entropy.hpp"
#include "cst/sofic.hpp"

namespace cst {

namespace {

bool has_forbidden(std::string_view w, const std::vector<Word>& forbidden) {
  for (const auto& f : forbidden)
    if (w.find(f) != std::string_view::npos) return true;
  return false;
}

Word power(const Word& p, long long r) {
  Word out;
  out.reserve(p.size() * r);
  for (long long i = 0; i < r; ++i) out += p;
  return out;
}

bool primitive(const Word& w) { return (w + w).find(w, 1) == w.size(); }

}  // namespace

bool SftSpec::in_language(std::string_view w) const {
  const int K = memory;
  if (w.empty()) return true;
  if (static_cast<int>(w.size()) <= K) {
    for (const auto& v : vertices)
      if (v.find(w) != Word::npos) return true;
    return false;
  }
  int prev = -1;
  for (std::size_t i = 0; i + K <= w.size(); ++i) {
    auto it = index.find(Word(w.substr(i, K)));
    if (it == index.end()) return false;
    if (prev >= 0 && !std::count(succ[prev].begin(), succ[prev].end(), it->second)) return false;
    prev = it->second;
  }
  return true;
}

bool SftSpec::irreducible() const {
  const int n = static_cast<int>(vertices.size());
  if (n == 0) return false;
  std::vector<std::vector<int>> pred(n);
  for (int q = 0; q < n; ++q)
    for (int t : succ[q]) pred[t].push_back(q);
  auto reach_all = [&](const std::vector<std::vector<int>>& adj) {
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      const int q = stack.back();
      stack.pop_back();
      for (int t : adj[q])
        if (!seen[t]) {
          seen[t] = 1;
          ++count;
          stack.push_back(t);
        }
    }
    return count == n;
  };
  return reach_all(succ) && reach_all(pred);
}

std::vector<Word> SftSpec::words(int n) const {
  std::vector<Word> out;
  if (n < 0) return out;
  if (n == 0) return {Word()};
  if (n <= memory) {
    std::set<Word> f;
    for (const auto& v : vertices)
      for (std::size_t i = 0; i + n <= v.size(); ++i) f.insert(v.substr(i, n));
    return {f.begin(), f.end()};
  }
  // vertices are sorted and successors are sorted by their last symbol, so
  // the depth-first walk emits words in lexicographic order
  std::function<void(int, Word&)> walk = [&](int q, Word& w) {
    if (static_cast<int>(w.size()) == n) {
      out.push_back(w);
      return;
    }
    for (int t : succ[q]) {
      w.push_back(vertices[t].back());
      walk(t, w);
      w.pop_back();
    }
  };
  for (int q = 0; q < static_cast<int>(vertices.size()); ++q) {
    Word w = vertices[q];
    walk(q, w);
  }
  return out;
}

SftSpec make_sft(const Alphabet& alphabet, std::vector<Word> forbidden, std::optional<Word> periodic) {
  if (alphabet.size() == 0) throw std::invalid_argument("sft: empty alphabet");
  SftSpec Z;
  Z.alphabet = alphabet;
  std::size_t longest = 1;
  for (const auto& f : forbidden) {
    if (f.empty() || !alphabet.valid(f)) throw std::invalid_argument("sft: invalid forbidden word");
    longest = std::max(longest, f.size());
  }
  Z.forbidden = std::move(forbidden);
  const int K = std::max<int>(1, static_cast<int>(longest) - 1);
  Z.memory = K;
  const int A = static_cast<int>(alphabet.size());
  if (std::pow(static_cast<double>(A), K + 1) > 4e6) throw std::invalid_argument("sft: block graph too large");

  // all admissible K-words
  std::vector<Word> verts;
  std::function<void(Word&)> gen = [&](Word& w) {
    if (static_cast<int>(w.size()) == K) {
      if (!has_forbidden(w, Z.forbidden)) verts.push_back(w);
      return;
    }
    for (int a = 0; a < A; ++a) {
      w.push_back(static_cast<char>(a));
      gen(w);
      w.pop_back();
    }
  };
  Word scratch;
  gen(scratch);

  // trim to the essential graph
  std::set<Word> alive(verts.begin(), verts.end());
  for (bool changed = true; changed;) {
    changed = false;
    std::map<Word, int> indeg, outdeg;
    for (const auto& v : alive)
      for (int a = 0; a < A; ++a) {
        const Word e = v + static_cast<char>(a);
        const Word t = e.substr(1);
        if (!alive.count(t) || has_forbidden(e, Z.forbidden)) continue;
        ++outdeg[v];
        ++indeg[t];
      }
    for (auto it = alive.begin(); it != alive.end();) {
      if (!indeg[*it] || !outdeg[*it]) {
        it = alive.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }
  if (alive.empty()) throw std::invalid_argument("sft: the subshift is empty");
  Z.vertices.assign(alive.begin(), alive.end());
  for (int i = 0; i < static_cast<int>(Z.vertices.size()); ++i) Z.index[Z.vertices[i]] = i;
  Z.succ.resize(Z.vertices.size());
  for (int i = 0; i < static_cast<int>(Z.vertices.size()); ++i)
    for (int a = 0; a < A; ++a) {
      const Word e = Z.vertices[i] + static_cast<char>(a);
      auto it = Z.index.find(e.substr(1));
      if (it != Z.index.end() && !has_forbidden(e, Z.forbidden)) Z.succ[i].push_back(it->second);
    }
  if (!Z.irreducible()) throw std::invalid_argument("sft: the subshift is not irreducible");

  // minimal forbidden word in (length, lex) order
  bool found = false;
  for (int len = 1; len <= K + 1 && !found; ++len) {
    for (const auto& u : Z.words(len - 1)) {
      for (int b = 0; b < A && !found; ++b) {
        const Word x = u + static_cast<char>(b);
        if (!Z.in_language(x) && Z.in_language(std::string_view(x).substr(1))) {
          Z.minimal_forbidden = x;
          found = true;
        }
      }
      if (found) break;
    }
  }
  if (!found) throw std::invalid_argument("sft: the subshift is the full shift, no forbidden word exists");
  Z.k = static_cast<Symbol>(Z.minimal_forbidden[0]);
  Z.a_tail = Z.minimal_forbidden.substr(1);

  auto periodic_ok = [&](const Word& p) {
    const long long r = (K + 1) / static_cast<long long>(p.size()) + 2;
    return Z.in_language(power(p, r));
  };
  if (periodic) {
    if (periodic->empty() || !alphabet.valid(*periodic) || !periodic_ok(*periodic))
      throw std::invalid_argument("sft: the periodic word does not define a point of the subshift");
    Z.periodic = *periodic;
  } else {
    for (int len = 1; len <= static_cast<int>(Z.vertices.size()) + K && Z.periodic.empty(); ++len)
      for (const auto& p : Z.words(len))
        if (periodic_ok(p)) {
          Z.periodic = p;
          break;
        }
    if (Z.periodic.empty()) throw std::invalid_argument("sft: no periodic word found");
  }
  return Z;
}

SftSpec sft_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("sft: expected an object");
  if (!j.contains("alphabet")) throw std::invalid_argument("sft: field 'alphabet' is required");
  if (!j.contains("forbidden")) throw std::invalid_argument("sft: field 'forbidden' is required");
  Alphabet alphabet;
  const auto& ja = j.at("alphabet");
  if (ja.is_string())
    alphabet = Alphabet::from_chars(ja.get<std::string>());
  else if (ja.is_array())
    alphabet = Alphabet(ja.get<std::vector<std::string>>());
  else
    throw std::invalid_argument("sft: field 'alphabet' must be a string or an array");
  std::vector<Word> forbidden;
  if (!j.at("forbidden").is_array()) throw std::invalid_argument("sft: field 'forbidden' must be an array");
  for (const auto& f : j.at("forbidden")) forbidden.push_back(alphabet.parse(f.get<std::string>()));
  std::optional<Word> periodic;
  if (j.contains("periodic")) periodic = alphabet.parse(j.at("periodic").get<std::string>());
  return make_sft(alphabet, std::move(forbidden), periodic);
}

Word bridge(const SftSpec& Z, const Word& x, const Word& y) {
  const int K = Z.memory;
  const int A = static_cast<int>(Z.alphabet.size());
  if (!Z.in_language(x) || !Z.in_language(y)) throw std::invalid_argument("bridge: endpoint not in the language");
  auto clip = [&](const Word& w) { return static_cast<int>(w.size()) > K ? w.substr(w.size() - K) : w; };

  struct Node {
    Word tail;
    bool seen;
    int parent;
    char sym;
  };
  std::vector<Node> nodes{{clip(x), false, -1, 0}};
  std::set<std::pair<Word, bool>> visited{{nodes[0].tail, false}};
  std::deque<int> queue{0};
  // x itself may be shorter than K; track the full prefix until it is not
  while (!queue.empty()) {
    const int id = queue.front();
    queue.pop_front();
    for (int b = 0; b < A; ++b) {
      const Word ext = nodes[id].tail + static_cast<char>(b);
      if (!Z.in_language(ext)) continue;
      const bool seen = nodes[id].seen || b == Z.k;
      const Word tail = clip(ext);
      if (seen && Z.in_language(tail + y)) {
        Word v(1, static_cast<char>(b));
        for (int p = id; nodes[p].parent >= 0; p = nodes[p].parent) v.push_back(nodes[p].sym);
        std::reverse(v.begin(), v.end());
        return v;
      }
      if (!visited.insert({tail, seen}).second) continue;
      nodes.push_back({tail, seen, id, static_cast<char>(b)});
      queue.push_back(static_cast<int>(nodes.size()) - 1);
    }
  }
  throw std::runtime_error("bridge: no connecting word found; the subshift is not irreducible");
}

TheoremABuild build_theorem_a(const SftSpec& Z, double epsilon, int N) {
  if (N < 1) throw std::invalid_argument("theorem-a: N must be >= 1");
  if (!(epsilon > 0 && epsilon < std::log(static_cast<double>(Z.alphabet.size()))))
    throw std::invalid_argument("theorem-a: epsilon must lie in (0, log |alphabet|)");
  if (Z.minimal_forbidden.empty()) throw std::invalid_argument("theorem-a: the subshift is the full shift");

  TheoremABuild out;
  out.epsilon = epsilon;
  out.sft = Z;
  for (int len = 1; static_cast<int>(out.w.size()) < N + 1; ++len)
    for (const auto& w : Z.words(len)) {
      out.w.push_back(w);
      if (static_cast<int>(out.w.size()) == N + 1) break;
    }

  std::map<std::pair<Word, Word>, Word> cache;
  auto v = [&](const Word& x, const Word& y) -> const Word& {
    auto it = cache.find({x, y});
    if (it != cache.end()) return it->second;
    Word b = bridge(Z, x, y);
    out.bridges.push_back({x, y, b});
    return cache.emplace(std::make_pair(x, y), std::move(b)).first->second;
  };
  auto v_cut = [&](const Word& x, const Word& y) {
    const Word& b = v(x, y);
    return b.substr(0, b.find(static_cast<char>(Z.k)) + 1);
  };

  const Word& p = Z.periodic;
  const Word& at = Z.a_tail;
  Word s;
  for (int n = 1; n <= N; ++n) {
    const Word& wn = out.w[n - 1];
    long long m;
    if (n == 1) {
      m = static_cast<long long>(std::floor(1.0 / epsilon)) + 1;
      s = at.empty() ? wn + v(wn, p) + power(p, m) : at + v(at, wn) + wn + v(wn, p) + power(p, m);
    } else {
      m = static_cast<long long>(std::floor(std::max(n / epsilon, static_cast<double>(out.g.back().size())))) + 1;
      if (m > 50'000'000) throw std::runtime_error("theorem-a: generator lengths exceed the memory budget");
      s += v(p, wn) + wn + v(wn, p) + power(p, m);
    }
    out.m.push_back(m);
    out.s.push_back(s);
    out.g.push_back(s + v_cut(p, out.w[n]));
  }

  long double sum = 0;
  for (const auto& g : out.g) sum += std::exp(-static_cast<long double>(epsilon) * g.size());
  out.certificate_sum = static_cast<double>(sum);
  out.certificate_tail = std::exp(-(N + 1.0)) / (1.0 - std::exp(-1.0));
  out.certified = out.certificate_sum + out.certificate_tail < 1.0;
  out.generators = GeneratingSet::from_words(Z.alphabet, out.g);
  out.generators.set_certificate("every generator starts with the tail of the minimal forbidden word and ends with "
                                 "its first symbol, so occurrences of that word mark the block boundaries");
  return out;
}

std::pair<Word, Word> find_markers(const GeneratingSet& G, int horizon) {
  const int A = static_cast<int>(G.alphabet().size());
  auto words = G.truncation(horizon);
  if (words.empty()) throw std::invalid_argument("markers: empty truncation");
  const auto aut = factor_automaton(words, A);
  for (int len = 2; len <= 12; ++len) {
    if (std::pow(static_cast<double>(A), len) > 2e6) break;
    std::optional<Word> u;
    Word w(len, 0);
    for (;;) {
      if (!accepts(aut, w) && primitive(w)) {
        if (!u) {
          u = w;
        } else if ((*u + *u).find(w) == Word::npos) {
          return {*u, w};
        }
      }
      int i = len - 1;
      while (i >= 0 && static_cast<unsigned char>(w[i]) == A - 1) w[i--] = 0;
      if (i < 0) break;
      ++w[i];
    }
  }
  throw std::runtime_error("markers: no two absent primitive words with disjoint orbits found up to length 12");
}

namespace {

// Distinct words of length n read along the flower automaton of `pool`,
// each with a list of whole generators whose concatenation contains it.
std::map<Word, std::vector<int>> covering_witnesses(const std::vector<Word>& pool, int n) {
  std::map<Word, std::vector<int>> found;
  std::unordered_set<std::string> visited;
  std::vector<int> witness;
  Word prefix;
  // state: generator j and position pos of the next symbol; pos == 0 is the hub
  std::function<void(int, int)> walk = [&](int j, int pos) {
    if (static_cast<int>(prefix.size()) == n) {
      found.emplace(prefix, witness);
      return;
    }
    std::string key = prefix;
    key += '\xff';
    key += pos == 0 ? std::string("hub") : std::to_string(j) + ":" + std::to_string(pos);
    if (!visited.insert(key).second) return;
    auto step = [&](int g, int at) {
      prefix.push_back(pool[g][at]);
      const int next = at + 1 == static_cast<int>(pool[g].size()) ? 0 : at + 1;
      walk(g, next);
      prefix.pop_back();
    };
    if (pos == 0) {
      for (int g = 0; g < static_cast<int>(pool.size()); ++g) {
        witness.push_back(g);
        step(g, 0);
        witness.pop_back();
      }
    } else {
      step(j, pos);
    }
  };
  walk(0, 0);
  for (int j = 0; j < static_cast<int>(pool.size()); ++j)
    for (int pos = 1; pos < static_cast<int>(pool[j].size()); ++pos) {
      witness.assign(1, j);
      walk(j, pos);
    }
  return found;
}

int truncation_horizon(const GeneratingSet& G, int want, long double budget) {
  int T = want;
  if (auto ml = G.max_length()) T = std::min(T, *ml);
  auto total = [&](int L) {
    long double s = 0;
    for (int n = 1; n <= L; ++n) s += G.count(n);
    return s;
  };
  while (T > 1 && total(T) > budget) --T;
  return T;
}

GeneratingSet combine(const GeneratingSet& G, const std::vector<Word>& f, const Word& u, const Word& v) {
  const std::string cert = "each added word is bracketed by powers of the marker words '" + G.alphabet().format(u) +
                           "' and '" + G.alphabet().format(v) + "', which do not occur in the base language";
  if (G.finite()) {
    auto words = G.truncation(*G.max_length());
    words.insert(words.end(), f.begin(), f.end());
    auto out = GeneratingSet::from_words(G.alphabet(), words);
    out.set_certificate(cert);
    return out;
  }
  TailBound t = G.tail();
  t.C += static_cast<double>(f.size());
  auto src = std::make_shared<UnionSource>(G.source_ptr(), f, "augmented(" + G.name() + ")");
  return GeneratingSet::family(src, t, cert);
}

}  // namespace

AugmentationBuild build_augmentation(const GeneratingSet& G, double epsilon, int depth, std::vector<int> m_schedule) {
  if (depth < 1) throw std::invalid_argument("augment: depth must be >= 1");
  if (!(epsilon > 0)) throw std::invalid_argument("augment: epsilon must be positive");
  const auto sol = solve_entropy(G);
  if (sol.status != SolveStatus::ok) throw std::invalid_argument("augment: the base characteristic equation is not solved");
  const auto ur = unique_representation_check(G, 12, 12);
  if (!ur.pass) throw std::invalid_argument("augment: the base set is not uniquely decipherable");

  AugmentationBuild out;
  out.base = G;
  out.epsilon = epsilon;
  out.lambda_base = sol.lambda_star;
  out.bound = sol.lambda_star * std::exp(epsilon);
  out.marker_horizon = truncation_horizon(G, 12, 50'000);
  std::tie(out.u, out.v) = find_markers(G, out.marker_horizon);

  Word g1;
  for (int n = 3; n <= 64 && g1.empty(); ++n)
    if (G.count(n) > 0) g1 = G.enumerate(n).front();
  if (g1.empty()) throw std::invalid_argument("augment: no generator of length >= 3 below length 64");

  std::vector<long long> m(depth, 0);
  for (int i = 0; i < depth && i < static_cast<int>(m_schedule.size()); ++i) m[i] = m_schedule[i];
  for (int i = static_cast<int>(m_schedule.size()); i < depth && !m_schedule.empty(); ++i) m[i] = m_schedule.back();

  for (int round = 1; round <= 30; ++round) {
    out.rounds = round;
    out.w.clear();
    out.f.clear();
    out.pool_len.clear();
    auto make_f = [&](int i, const Word& w) {
      const long long r = (1LL << i) * static_cast<long long>(w.size());
      if (r > 20'000'000) throw std::runtime_error("augment: added words exceed the memory budget");
      return power(out.u, r) + w + power(out.v, r);
    };
    Word w = g1;
    while (static_cast<long long>(w.size()) < m[0]) w += g1;
    out.w.push_back(w);
    out.f.push_back(make_f(1, w));
    out.pool_len.push_back(0);
    for (int i = 2; i <= depth; ++i) {
      const int P = truncation_horizon(G, std::max<int>(static_cast<int>(g1.size()), 3 * i), 20'000);
      auto pool = G.truncation(P);
      pool.insert(pool.end(), out.f.begin(), out.f.end());
      out.pool_len.push_back(P);
      for (const auto& [word, witness] : covering_witnesses(pool, i)) {
        if (w.find(word) != Word::npos) continue;
        for (int j : witness) w += pool[j];
      }
      w += g1;
      while (static_cast<long long>(w.size()) < m[i - 1]) w += g1;
      out.w.push_back(w);
      out.f.push_back(make_f(i, w));
    }
    out.m = m;
    out.combined = combine(G, out.f, out.u, out.v);
    const auto aug = solve_entropy(out.combined, 1e-13);
    out.lambda_aug = aug.lambda_star;
    out.certified = aug.status == SolveStatus::ok && out.lambda_aug > out.lambda_base && out.lambda_aug < out.bound;
    if (out.certified) return out;
    for (int i = 0; i < depth; ++i) m[i] = std::max<long long>(2 * m[i], 2 * static_cast<long long>(out.w[i].size()));
  }
  return out;
}

}  // namespace cst
