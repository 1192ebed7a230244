#pragma once

// Built-in generating-set families.

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cst/genset.hpp"

namespace cst {

// -- gap sets ------------------------------------------------------------------

/// Finite set of nonnegative integers, optionally united with the progression
/// {start + k*step : k >= 0}.
struct GapSet {
  std::vector<int> values;  // sorted, distinct
  std::optional<int> start;
  int step = 1;

  static GapSet finite(std::vector<int> values);
  static GapSet progression(int start, int step, std::vector<int> extra = {});

  bool infinite() const { return start.has_value(); }
  bool contains(int s) const;
  std::vector<int> members_up_to(int n) const;
  /// Sum of x^s over members s > n (exact geometric closed form).
  double tail(double x, int n) const;
};

/// {0 1^s : s in S} over {0, 1}.
class SGapSource final : public GeneratorSource {
 public:
  explicit SGapSource(GapSet S);
  const Alphabet& alphabet() const override { return alphabet_; }
  std::string name() const override { return "sgap"; }
  std::optional<int> max_length() const override;
  Count count(int n) const override;
  std::vector<Word> enumerate(int n) const override;
  bool contains(std::string_view w) const override;
  const GapSet& gaps() const { return S_; }

 private:
  Alphabet alphabet_ = Alphabet::digits(2);
  GapSet S_;
};

/// {0 i^s : s in S_i, i = 1..d} over {0, ..., d}.
class MultiGapSource final : public GeneratorSource {
 public:
  explicit MultiGapSource(std::vector<GapSet> S);
  const Alphabet& alphabet() const override { return alphabet_; }
  std::string name() const override { return "multigap"; }
  std::optional<int> max_length() const override;
  Count count(int n) const override;
  std::vector<Word> enumerate(int n) const override;
  bool contains(std::string_view w) const override;
  const std::vector<GapSet>& gaps() const { return S_; }

 private:
  Alphabet alphabet_;
  std::vector<GapSet> S_;
};

// -- beta ----------------------------------------------------------------------

struct BetaExpansion {
  double beta = 0;
  std::vector<int> digits;         // b_1 .. b_N
  std::vector<double> remainders;  // r_1 .. r_N, r_n = beta r_{n-1} - b_n from r_0 = 1
  bool terminating = false;        // some r_n = 0 within the depth
  bool eventually_periodic = false;
};

/// Greedy digits of 1 in base beta, computed exactly from the binary value of
/// `beta` and extended on demand.
class BetaDigits {
 public:
  explicit BetaDigits(double beta);
  double beta() const { return beta_; }
  int floor_beta() const { return floor_; }
  /// b_n for n >= 1.
  int digit(int n) const;
  BetaExpansion expansion(int depth) const;

 private:
  struct State;
  double beta_;
  int floor_;
  std::shared_ptr<State> state_;
  void extend(int n) const;
};

/// {b_1..b_j i : i < b_{j+1}} together with the letters i < b_1.
class BetaSource final : public GeneratorSource {
 public:
  explicit BetaSource(double beta);
  const Alphabet& alphabet() const override { return alphabet_; }
  std::string name() const override { return "beta"; }
  std::optional<int> max_length() const override { return std::nullopt; }
  Count count(int n) const override;
  std::vector<Word> enumerate(int n) const override;
  bool contains(std::string_view w) const override;
  std::optional<double> entropy_closed_form() const override { return 0.0; }
  const BetaDigits& digits() const { return digits_; }

 private:
  BetaDigits digits_;
  Alphabet alphabet_;
};

BetaExpansion beta_expansion(double beta, int depth);
/// The expansion to `depth` together with the (infinite, lazily enumerated)
/// generating set.
std::pair<BetaExpansion, GeneratingSet> beta_generators(double beta, int depth);

// -- Dyck ----------------------------------------------------------------------

// Symbol order of the Dyck alphabet: ( ) [ ]
inline constexpr char kDyckOpenParen = 0, kDyckCloseParen = 1, kDyckOpenBracket = 2,
                      kDyckCloseBracket = 3;
Alphabet dyck_alphabet();

struct DyckCounts {
  std::vector<BigCount> d;  // d[n-1] = d_n = |W_n|
};

/// d_1..d_N by the convolution recursion.
DyckCounts dyck_counts(int N);
/// 2^{n-1} (2n)! / ((2n-1) (n!)^2)
BigCount dyck_closed_form(int n);

/// Reading of a Dyck word with a stack: unmatched closers on the left,
/// unmatched openers on the right, or a mismatch.
struct DyckScan {
  bool consistent = true;
  std::string unmatched_close;  // types (0 or 1) of closers unmatched within the word
  std::string open_stack;       // types of openers still open at the end, bottom first
  bool emptied_inside = false;  // stack height returned to 0 strictly inside the word
};
DyckScan dyck_scan(std::string_view w);

/// Canonical generator W = union of W_n (primitive balanced words).
class DyckSource final : public GeneratorSource {
 public:
  DyckSource() = default;
  const Alphabet& alphabet() const override { return alphabet_; }
  std::string name() const override { return "dyck"; }
  std::optional<int> max_length() const override { return std::nullopt; }
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

 private:
  struct Tables;
  std::shared_ptr<const Tables> tables(long double x, int hi) const;
  long double prefix_mass_upto(std::string_view s, long double x, int hi) const;
  long double infix_mass_upto(std::string_view s, long double x, int hi) const;

  Alphabet alphabet_ = dyck_alphabet();
  mutable std::mutex mu_;
  mutable std::vector<std::shared_ptr<const Tables>> tables_;
};

/// Reverse a Dyck word and exchange openers with closers.
Word dyck_mirror(std::string_view w);

// -- examples ------------------------------------------------------------------

/// g_i = 0^{n_i} 1^{n_i}; either an explicit strictly increasing list or
/// n_i = i^power.
class NonGibbsSource final : public GeneratorSource {
 public:
  explicit NonGibbsSource(std::vector<int> n);
  explicit NonGibbsSource(int power);
  const Alphabet& alphabet() const override { return alphabet_; }
  std::string name() const override { return "nongibbs"; }
  std::optional<int> max_length() const override;
  Count count(int n) const override;
  std::vector<Word> enumerate(int n) const override;
  bool contains(std::string_view w) const override;
  /// n_i for i >= 1.
  int block(int i) const;
  /// Number of known blocks (0 for the infinite schedule).
  int finite_blocks() const { return static_cast<int>(list_.size()); }

 private:
  std::optional<int> index_of(int half) const;
  Alphabet alphabet_ = Alphabet::digits(2);
  std::vector<int> list_;
  int power_ = 0;
};

/// G(n) = {v w 4^n : v in {0,1}^n, w in {2,3}^n}, n >= 1.
class ThreeMmeSource final : public GeneratorSource {
 public:
  explicit ThreeMmeSource(std::optional<int> max_block = std::nullopt);
  const Alphabet& alphabet() const override { return alphabet_; }
  std::string name() const override { return "three_mme"; }
  std::optional<int> max_length() const override;
  Count count(int n) const override;
  std::vector<Word> enumerate(int n) const override;
  bool contains(std::string_view w) const override;
  Word sample(int n, Rng& rng) const override;
  Count count_prefix(std::string_view s, int n) const override;
  Count count_suffix(std::string_view s, int n) const override;
  Count count_infix(std::string_view s, int n) const override;
  std::optional<double> entropy_closed_form() const override;

 private:
  /// Generators of length 3k with s placed at offset l: 0 if incompatible,
  /// otherwise the number of free positions left.
  int placed(std::string_view s, int k, int l) const;
  Alphabet alphabet_ = Alphabet::digits(5);
  std::optional<int> max_block_;
};

// -- presets -------------------------------------------------------------------

GeneratingSet sgap(const GapSet& S);
GeneratingSet multigap(const std::vector<GapSet>& S);
GeneratingSet dyck();
GeneratingSet dyck_g1();
GeneratingSet dyck_g2();
/// Explicit canonical Dyck set truncated to W_1..W_{n_max}.
GeneratingSet dyck_generators(int n_max, std::size_t budget = 4'000'000);
GeneratingSet nongibbs(int power = 2);
GeneratingSet nongibbs(std::vector<int> n);
GeneratingSet three_mme();

GapSet gapset_from_json(const nlohmann::json& j);
nlohmann::json gapset_to_json(const GapSet& S);

/// Family by name with JSON parameters; names follow the genset file schema.
GeneratingSet preset(const std::string& name, const nlohmann::json& params = nlohmann::json::object());
std::vector<std::string> preset_names();

}  // namespace cst
