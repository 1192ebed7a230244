#pragma once

// Alphabets, finite words and factorization of words into generator blocks.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace cst {

using Symbol = std::uint8_t;

/// A finite word stored as a byte string of symbol indices (not text).
/// Byte comparison is unsigned, so std::string ordering is the
/// lexicographic order induced by the alphabet order.
using Word = std::string;

using BigCount = boost::multiprecision::cpp_int;

class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> symbols);

  /// One symbol per character of `chars`, in the given order.
  static Alphabet from_chars(std::string_view chars);
  /// Symbols "0", "1", ..., "k-1".
  static Alphabet digits(int k);

  std::size_t size() const { return symbols_.size(); }
  const std::vector<std::string>& symbols() const { return symbols_; }
  const std::string& token(Symbol s) const { return symbols_.at(s); }
  std::optional<Symbol> find(std::string_view token) const;
  Symbol index(std::string_view token) const;

  /// True when every token is a single character.
  bool single_char() const { return single_char_; }

  /// Parses concatenated single-character tokens, or comma-separated tokens
  /// for multi-character alphabets.
  Word parse(std::string_view text) const;
  std::string format(const Word& w) const;
  bool valid(const Word& w) const;

  bool operator==(const Alphabet& other) const { return symbols_ == other.symbols_; }

 private:
  std::vector<std::string> symbols_;
  bool single_char_ = true;
};

/// Start indices of all (possibly overlapping) occurrences of `pattern` in `w`.
std::vector<std::size_t> occurrences(std::string_view w, std::string_view pattern);

struct Factorization {
  std::vector<std::size_t> cut_points;  // 0 = c_0 < c_1 < ... < c_k = |w|
  std::vector<Word> blocks;
};

struct FactorizationList {
  std::vector<Factorization> parses;
  BigCount total;          // number of parses, independent of the listing cap
  bool truncated = false;  // listing stopped at the limit
};

using MembershipFn = std::function<bool(std::string_view)>;

/// All parses of `w` into blocks accepted by `is_generator` of length at most
/// `max_gen_len`, in lexicographic cut-point order. Counting is memoized
/// separately from listing; at most `limit` parses are listed.
FactorizationList factorize(std::string_view w, const MembershipFn& is_generator,
                            std::size_t max_gen_len, std::size_t limit = 1 << 16);

BigCount count_factorizations(std::string_view w, const MembershipFn& is_generator,
                              std::size_t max_gen_len);

}  // namespace cst
