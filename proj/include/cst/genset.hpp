#pragma once

// Generating sets: explicit word lists or lazily enumerable families with a
// certified exponential bound on the length spectrum.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "cst/words.hpp"

namespace cst {

/// Counts of generators are exact integers but can exceed 2^64 (Dyck), so
/// they travel as long double; values below 2^64 are exact.
using Count = long double;

using Rng = std::mt19937_64;

/// Certifies c(n) <= C * rho^n for all n >= N0.
struct TailBound {
  double C = 1.0;
  double rho = 1.0;
  int N0 = 1;
};

enum class PatternKind { Prefix, Suffix, Infix };

/// Backend of a generating set. Pattern counts have generic implementations
/// on top of enumerate(); families with huge length classes override them
/// with closed-form counting.
class GeneratorSource {
 public:
  virtual ~GeneratorSource() = default;

  virtual const Alphabet& alphabet() const = 0;
  virtual std::string name() const = 0;
  /// Largest generator length for finite sets.
  virtual std::optional<int> max_length() const = 0;
  virtual Count count(int n) const = 0;
  /// Generators of length n in lexicographic order.
  virtual std::vector<Word> enumerate(int n) const = 0;

  virtual bool contains(std::string_view w) const;
  /// Uniform draw among the generators of length n (count(n) > 0).
  virtual Word sample(int n, Rng& rng) const;

  /// Number of generators of length n having `s` as a prefix (|s| <= n).
  virtual Count count_prefix(std::string_view s, int n) const;
  /// Number of generators of length n having `s` as a suffix (|s| <= n).
  virtual Count count_suffix(std::string_view s, int n) const;
  /// Number of pairs (g, l) with |g| = n, 1 <= l and l + |s| < n, g[l, l+|s|) = s.
  virtual Count count_infix(std::string_view s, int n) const;

  /// Sum over lo <= n <= hi of x^n times the prefix/suffix/infix count.
  virtual long double pattern_mass(PatternKind kind, std::string_view s, long double x, int lo,
                                   int hi) const;

  /// Exact value of h(G) when the family knows it.
  virtual std::optional<double> entropy_closed_form() const { return std::nullopt; }
};

enum class GenSetKind { Explicit, Family };

class GeneratingSet {
 public:
  GeneratingSet() = default;

  /// Finite explicit set; words must be nonempty, distinct and valid.
  static GeneratingSet from_words(const Alphabet& alphabet, std::vector<Word> words);
  /// Text convenience: each entry parsed with Alphabet::parse.
  static GeneratingSet from_strings(const Alphabet& alphabet, const std::vector<std::string>& words);
  /// Family kind. The tail bound is mandatory and validated against the
  /// enumerator for N0 <= n <= N0 + 64.
  static GeneratingSet family(std::shared_ptr<const GeneratorSource> source, TailBound tail,
                              std::string certificate = {});

  GenSetKind kind() const { return kind_; }
  const Alphabet& alphabet() const { return source_->alphabet(); }
  const GeneratorSource& source() const { return *source_; }
  std::shared_ptr<const GeneratorSource> source_ptr() const { return source_; }
  std::string name() const { return source_->name(); }

  /// Tail certificate. Explicit sets get the trivial bound C = 0 past their
  /// maximal length.
  const TailBound& tail() const { return tail_; }
  /// Non-empty when unique representation is established for the family.
  const std::string& certificate() const { return certificate_; }
  void set_certificate(std::string cert) { certificate_ = std::move(cert); }

  bool finite() const { return source_->max_length().has_value(); }
  std::optional<int> max_length() const { return source_->max_length(); }

  /// c(n), memoized.
  Count count(int n) const;
  /// c(1..N).
  std::vector<Count> length_spectrum(int N) const;

  /// Generators of length n, memoized. Throws when the class is larger than
  /// `budget`.
  const std::vector<Word>& enumerate(int n, std::size_t budget = 4'000'000) const;
  /// All generators with length <= max_len, ordered by length then lexicographically.
  std::vector<Word> truncation(int max_len, std::size_t budget = 4'000'000) const;

  bool contains(std::string_view w) const { return source_->contains(w); }
  MembershipFn membership() const;

  /// Bound on sum_{n > N} c(n) * x^n for 0 < x < 1/rho (N must be >= N0 - 1);
  /// infinite when it cannot be certified.
  double tail_sum(double x, int N) const;
  /// Bound on sum_{n > N} n * c(n) * x^n.
  double tail_moment(double x, int N) const;

 private:
  struct Cache {
    std::mutex mu;
    std::vector<Count> counts;
    std::map<int, std::vector<Word>> words;
  };

  GenSetKind kind_ = GenSetKind::Explicit;
  std::shared_ptr<const GeneratorSource> source_;
  TailBound tail_;
  std::string certificate_;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

/// Finite word list source; used by explicit sets and as a building block.
class ExplicitSource final : public GeneratorSource {
 public:
  ExplicitSource(Alphabet alphabet, std::vector<Word> words, std::string name = "explicit");

  const Alphabet& alphabet() const override { return alphabet_; }
  std::string name() const override { return name_; }
  std::optional<int> max_length() const override { return max_len_; }
  Count count(int n) const override;
  std::vector<Word> enumerate(int n) const override;
  bool contains(std::string_view w) const override;

  const std::vector<Word>& words() const { return words_; }

 private:
  Alphabet alphabet_;
  std::vector<Word> words_;  // sorted by length, then lexicographically
  std::map<int, std::vector<Word>> by_length_;
  std::string name_;
  int max_len_ = 0;
};

/// Base family plus a finite list of extra words (Dyck G1/G2, augmentations).
class UnionSource final : public GeneratorSource {
 public:
  UnionSource(std::shared_ptr<const GeneratorSource> base, std::vector<Word> extra, std::string name);

  const Alphabet& alphabet() const override { return base_->alphabet(); }
  std::string name() const override { return name_; }
  std::optional<int> max_length() const override;
  Count count(int n) const override;
  std::vector<Word> enumerate(int n) const override;
  bool contains(std::string_view w) const override;
  Word sample(int n, Rng& rng) const override;
  Count count_prefix(std::string_view s, int n) const override;
  Count count_suffix(std::string_view s, int n) const override;
  Count count_infix(std::string_view s, int n) const override;
  long double pattern_mass(PatternKind kind, std::string_view s, long double x, int lo,
                           int hi) const override;
  std::optional<double> entropy_closed_form() const override;

  const GeneratorSource& base() const { return *base_; }
  const ExplicitSource& extra() const { return extra_; }

 private:
  std::shared_ptr<const GeneratorSource> base_;
  ExplicitSource extra_;
  std::string name_;
};

// Pattern counts for a single word; shared by generic implementations.
bool has_prefix(std::string_view g, std::string_view s);
bool has_suffix(std::string_view g, std::string_view s);
/// Offsets l with 1 <= l, l + |s| < |g| where s occurs in g.
int interior_occurrences(std::string_view g, std::string_view s);

// -- unique decipherability -------------------------------------------------

struct UdVerdict {
  bool decipherable = true;
  std::optional<Word> witness;            // word with two parses
  std::vector<Word> parse_a, parse_b;     // the two parses of the witness
  std::size_t code_size = 0;              // size of the truncated code
  int max_gen_len = 0;
};

/// Sardinas-Patterson test on the generators of length <= max_gen_len. The
/// dangling-suffix graph is explored shortest-word-first, so a returned
/// witness is a shortest ambiguous word of the truncated code.
UdVerdict sardinas_patterson(const GeneratingSet& G, int max_gen_len);
UdVerdict sardinas_patterson(const std::vector<Word>& code);

struct UniquenessReport {
  bool pass = false;
  std::string certificate;  // non-empty when the family certificate was used
  int horizon = 0;
  int max_gen_len = 0;
  bool searched = false;
  UdVerdict verdict;
};

/// Finite necessary condition for unique representation: decipherability of
/// the truncation, i.e. no word of length <= horizon (or any length) has two
/// parses. Families carrying a certificate skip the search.
UniquenessReport unique_representation_check(const GeneratingSet& G, int horizon,
                                             int max_gen_len = 64);

}  // namespace cst
