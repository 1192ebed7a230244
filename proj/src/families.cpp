#include "cst/families.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

#include "cst/constructions.hpp"
#include "cst/rng.hpp"

namespace cst {

using nlohmann::json;

// -- gap sets ------------------------------------------------------------------

GapSet GapSet::finite(std::vector<int> values) {
  GapSet S;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (values.empty()) throw std::invalid_argument("gap set must be nonempty");
  if (values.front() < 0) throw std::invalid_argument("gap set members must be nonnegative");
  S.values = std::move(values);
  return S;
}

GapSet GapSet::progression(int start, int step, std::vector<int> extra) {
  if (start < 0 || step < 1) throw std::invalid_argument("progression needs start >= 0 and step >= 1");
  GapSet S;
  std::sort(extra.begin(), extra.end());
  extra.erase(std::unique(extra.begin(), extra.end()), extra.end());
  if (!extra.empty() && extra.front() < 0) throw std::invalid_argument("gap set members must be nonnegative");
  S.start = start;
  S.step = step;
  // members of the progression are kept out of the finite part
  for (int v : extra)
    if (!(v >= start && (v - start) % step == 0)) S.values.push_back(v);
  return S;
}

bool GapSet::contains(int s) const {
  if (s < 0) return false;
  if (start && s >= *start && (s - *start) % step == 0) return true;
  return std::binary_search(values.begin(), values.end(), s);
}

std::vector<int> GapSet::members_up_to(int n) const {
  std::vector<int> out;
  for (int v : values)
    if (v <= n) out.push_back(v);
  if (start)
    for (int v = *start; v <= n; v += step) out.push_back(v);
  std::sort(out.begin(), out.end());
  return out;
}

double GapSet::tail(double x, int n) const {
  double t = 0;
  for (int v : values)
    if (v > n) t += std::pow(x, v);
  if (start) {
    int first = *start;
    if (first <= n) first += ((n - first) / step + 1) * step;
    t += std::pow(x, first) / (1.0 - std::pow(x, step));
  }
  return t;
}

// -- S-gap / multi-gap -----------------------------------------------------------

SGapSource::SGapSource(GapSet S) : S_(std::move(S)) {
  if (S_.values.empty() && !S_.start) throw std::invalid_argument("gap set must be nonempty");
}

std::optional<int> SGapSource::max_length() const {
  if (S_.infinite()) return std::nullopt;
  return S_.values.back() + 1;
}

Count SGapSource::count(int n) const { return S_.contains(n - 1) ? 1 : 0; }

std::vector<Word> SGapSource::enumerate(int n) const {
  if (!S_.contains(n - 1)) return {};
  Word w(static_cast<std::size_t>(n), '\1');
  w[0] = '\0';
  return {w};
}

bool SGapSource::contains(std::string_view w) const {
  if (w.empty() || w[0] != '\0') return false;
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i] != '\1') return false;
  return S_.contains(static_cast<int>(w.size()) - 1);
}

MultiGapSource::MultiGapSource(std::vector<GapSet> S)
    : alphabet_(Alphabet::digits(static_cast<int>(S.size()) + 1)), S_(std::move(S)) {
  if (S_.empty()) throw std::invalid_argument("multigap needs at least one branch");
  for (const auto& s : S_)
    if (s.values.empty() && !s.start) throw std::invalid_argument("gap set must be nonempty");
}

std::optional<int> MultiGapSource::max_length() const {
  int m = 0;
  for (const auto& s : S_) {
    if (s.infinite()) return std::nullopt;
    m = std::max(m, s.values.back() + 1);
  }
  return m;
}

Count MultiGapSource::count(int n) const {
  Count k = 0;
  for (const auto& s : S_) k += s.contains(n - 1);
  return k;
}

std::vector<Word> MultiGapSource::enumerate(int n) const {
  std::vector<Word> out;
  for (std::size_t i = 0; i < S_.size(); ++i) {
    if (!S_[i].contains(n - 1)) continue;
    Word w(static_cast<std::size_t>(n), static_cast<char>(i + 1));
    w[0] = '\0';
    out.push_back(w);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool MultiGapSource::contains(std::string_view w) const {
  if (w.empty() || w[0] != '\0') return false;
  if (w.size() == 1) {
    for (const auto& s : S_)
      if (s.contains(0)) return true;
    return false;
  }
  const char c = w[1];
  if (c == '\0') return false;
  for (std::size_t i = 2; i < w.size(); ++i)
    if (w[i] != c) return false;
  return S_[static_cast<unsigned char>(c) - 1].contains(static_cast<int>(w.size()) - 1);
}

// -- beta ----------------------------------------------------------------------

using boost::multiprecision::cpp_int;

// beta = M / 2^E exactly; r_n = A_n / 2^{E (n+1)}.
struct BetaDigits::State {
  std::mutex mu;
  cpp_int M;
  int E = 0;
  cpp_int A;  // numerator of the current remainder
  std::vector<int> digits;
  std::vector<double> remainders;
  std::optional<int> zero_at;       // first n with r_n = 0
  std::optional<int> period_start;  // index where a remainder repeated
  std::set<std::pair<long, cpp_int>> seen;  // remainders in lowest terms as (exponent, odd numerator)
};

namespace {

// A / 2^bits without forming the rational
double dyadic_to_double(const cpp_int& A, long bits) {
  if (A == 0) return 0;
  const long nb = static_cast<long>(boost::multiprecision::msb(A)) + 1;
  const long drop = std::max(0L, nb - 64);
  return std::ldexp(static_cast<double>(static_cast<unsigned long long>(A >> drop)), static_cast<int>(drop - bits));
}

std::pair<long, cpp_int> dyadic_key(const cpp_int& A, long bits) {
  if (A == 0) return {0, 0};
  const long tz = std::min<long>(static_cast<long>(boost::multiprecision::lsb(A)), bits);
  return {bits - tz, A >> tz};
}

}  // namespace

BetaDigits::BetaDigits(double beta) : beta_(beta), state_(std::make_shared<State>()) {
  if (!(beta > 1.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be a finite real > 1");
  if (std::floor(beta) == beta) throw std::invalid_argument("beta must not be an integer");
  floor_ = static_cast<int>(std::floor(beta));
  int exp2 = 0;
  const double mant = std::frexp(beta, &exp2);  // beta = mant * 2^exp2, mant in [0.5, 1)
  auto& s = *state_;
  s.M = cpp_int(static_cast<long long>(std::ldexp(mant, 53)));
  s.E = 53 - exp2;
  while (s.E > 0 && (s.M & 1) == 0) {
    s.M >>= 1;
    --s.E;
  }
  s.digits.push_back(floor_);
  s.A = s.M - cpp_int(floor_) * (cpp_int(1) << s.E);
  s.remainders.push_back(dyadic_to_double(s.A, s.E));
}

void BetaDigits::extend(int n) const {
  auto& s = *state_;
  while (static_cast<int>(s.digits.size()) < n) {
    const int k = static_cast<int>(s.digits.size());  // r_{k-1} is current
    const long bits = static_cast<long>(s.E) * k;  // r_{k-1} = A / 2^bits
    if (k <= 256 && !s.period_start && !s.seen.insert(dyadic_key(s.A, bits)).second) s.period_start = k - 1;
    const cpp_int num = s.M * s.A;  // beta * r over 2^{bits + E}
    const cpp_int b = num >> (bits + s.E);
    s.digits.push_back(static_cast<int>(b));
    s.A = num - (b << (bits + s.E));
    if (s.A == 0 && !s.zero_at) s.zero_at = k;
    s.remainders.push_back(dyadic_to_double(s.A, bits + s.E));
  }
}

int BetaDigits::digit(int n) const {
  if (n < 1) throw std::invalid_argument("beta digit index must be >= 1");
  std::lock_guard lock(state_->mu);
  extend(n);
  return state_->digits[n - 1];
}

BetaExpansion BetaDigits::expansion(int depth) const {
  if (depth < 1) throw std::invalid_argument("beta expansion depth must be >= 1");
  std::lock_guard lock(state_->mu);
  extend(depth);
  BetaExpansion e;
  e.beta = beta_;
  e.digits.assign(state_->digits.begin(), state_->digits.begin() + depth);
  e.remainders.assign(state_->remainders.begin(), state_->remainders.begin() + depth);
  e.terminating = state_->zero_at && *state_->zero_at < depth;
  e.eventually_periodic =
      e.terminating || (state_->period_start && *state_->period_start < depth);
  return e;
}

BetaSource::BetaSource(double beta) : digits_(beta), alphabet_(Alphabet::digits(digits_.floor_beta() + 1)) {}

Count BetaSource::count(int n) const { return n < 1 ? 0 : digits_.digit(n); }

std::vector<Word> BetaSource::enumerate(int n) const {
  Word prefix;
  for (int j = 1; j < n; ++j) prefix.push_back(static_cast<char>(digits_.digit(j)));
  std::vector<Word> out;
  for (int i = 0; i < digits_.digit(n); ++i) out.push_back(prefix + static_cast<char>(i));
  return out;
}

bool BetaSource::contains(std::string_view w) const {
  const int n = static_cast<int>(w.size());
  if (n == 0) return false;
  for (int j = 1; j < n; ++j)
    if (static_cast<unsigned char>(w[j - 1]) != digits_.digit(j)) return false;
  return static_cast<unsigned char>(w[n - 1]) < digits_.digit(n);
}

BetaExpansion beta_expansion(double beta, int depth) { return BetaDigits(beta).expansion(depth); }

std::pair<BetaExpansion, GeneratingSet> beta_generators(double beta, int depth) {
  auto src = std::make_shared<BetaSource>(beta);
  auto e = src->digits().expansion(depth);
  auto G = GeneratingSet::family(src, TailBound{std::ceil(beta), 1.0, 1},
                                 "beta generators are prefix-free: each is a prefix of the expansion "
                                 "followed by a smaller digit");
  return {std::move(e), std::move(G)};
}

// -- non-Gibbs -------------------------------------------------------------------

NonGibbsSource::NonGibbsSource(std::vector<int> n) : list_(std::move(n)) {
  if (list_.empty()) throw std::invalid_argument("nongibbs: block list must be nonempty");
  for (std::size_t i = 0; i < list_.size(); ++i) {
    if (list_[i] < 1) throw std::invalid_argument("nongibbs: n_i must be positive");
    if (i > 0 && list_[i] <= list_[i - 1]) throw std::invalid_argument("nongibbs: n_i must be strictly increasing");
  }
}

NonGibbsSource::NonGibbsSource(int power) : power_(power) {
  if (power < 1 || power > 6) throw std::invalid_argument("nongibbs: power must be in 1..6");
}

int NonGibbsSource::block(int i) const {
  if (i < 1) throw std::invalid_argument("nongibbs: block index must be >= 1");
  if (!list_.empty()) {
    if (i > static_cast<int>(list_.size())) throw std::out_of_range("nongibbs: block index beyond list");
    return list_[i - 1];
  }
  long long v = 1;
  for (int k = 0; k < power_; ++k) v *= i;
  if (v > (1 << 28)) throw std::out_of_range("nongibbs: block too long");
  return static_cast<int>(v);
}

std::optional<int> NonGibbsSource::index_of(int half) const {
  if (!list_.empty()) {
    auto it = std::lower_bound(list_.begin(), list_.end(), half);
    if (it != list_.end() && *it == half) return static_cast<int>(it - list_.begin()) + 1;
    return std::nullopt;
  }
  const int guess = static_cast<int>(std::llround(std::pow(half, 1.0 / power_)));
  for (int i = std::max(1, guess - 1); i <= guess + 1; ++i)
    if (block(i) == half) return i;
  return std::nullopt;
}

std::optional<int> NonGibbsSource::max_length() const {
  if (list_.empty()) return std::nullopt;
  return 2 * list_.back();
}

Count NonGibbsSource::count(int n) const { return (n % 2 == 0 && n > 0 && index_of(n / 2)) ? 1 : 0; }

std::vector<Word> NonGibbsSource::enumerate(int n) const {
  if (count(n) == 0) return {};
  Word w(static_cast<std::size_t>(n / 2), '\0');
  w.append(static_cast<std::size_t>(n / 2), '\1');
  return {w};
}

bool NonGibbsSource::contains(std::string_view w) const {
  const int n = static_cast<int>(w.size());
  if (n == 0 || n % 2) return false;
  for (int i = 0; i < n; ++i)
    if (w[i] != (i < n / 2 ? '\0' : '\1')) return false;
  return index_of(n / 2).has_value();
}

// -- three MMEs ------------------------------------------------------------------

ThreeMmeSource::ThreeMmeSource(std::optional<int> max_block) : max_block_(max_block) {
  if (max_block && *max_block < 1) throw std::invalid_argument("three_mme: max_block must be >= 1");
}

std::optional<int> ThreeMmeSource::max_length() const {
  if (!max_block_) return std::nullopt;
  return 3 * *max_block_;
}

Count ThreeMmeSource::count(int n) const {
  if (n < 3 || n % 3) return 0;
  if (max_block_ && n / 3 > *max_block_) return 0;
  return std::ldexp(1.0L, 2 * (n / 3));
}

std::vector<Word> ThreeMmeSource::enumerate(int n) const {
  if (count(n) == 0) return {};
  const int k = n / 3;
  if (2 * k > 40) throw std::runtime_error("three_mme: length class too large to enumerate");
  std::vector<Word> out;
  out.reserve(std::size_t(1) << (2 * k));
  for (std::uint64_t bits = 0; bits < (std::uint64_t(1) << (2 * k)); ++bits) {
    Word w(static_cast<std::size_t>(n), '\4');
    // v occupies the high k bits so that the listing is lexicographic
    for (int i = 0; i < k; ++i) {
      w[i] = static_cast<char>((bits >> (2 * k - 1 - i)) & 1);
      w[k + i] = static_cast<char>(2 + ((bits >> (k - 1 - i)) & 1));
    }
    out.push_back(std::move(w));
  }
  return out;
}

bool ThreeMmeSource::contains(std::string_view w) const {
  const int n = static_cast<int>(w.size());
  if (count(n) == 0) return false;
  return placed(w, n / 3, 0) >= 0;
}

int ThreeMmeSource::placed(std::string_view s, int k, int l) const {
  int covered = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const int pos = l + static_cast<int>(i);
    const auto c = static_cast<unsigned char>(s[i]);
    if (pos < k) {
      if (c > 1) return -1;
      ++covered;
    } else if (pos < 2 * k) {
      if (c != 2 && c != 3) return -1;
      ++covered;
    } else if (c != 4) {
      return -1;
    }
  }
  return 2 * k - covered;
}

Word ThreeMmeSource::sample(int n, Rng& rng) const {
  if (count(n) == 0) throw std::logic_error("three_mme: no generator of length " + std::to_string(n));
  const int k = n / 3;
  Word w(static_cast<std::size_t>(n), '\4');
  for (int i = 0; i < k; ++i) {
    w[i] = static_cast<char>(uniform_index(rng, 2));
    w[k + i] = static_cast<char>(2 + uniform_index(rng, 2));
  }
  return w;
}

Count ThreeMmeSource::count_prefix(std::string_view s, int n) const {
  if (count(n) == 0 || static_cast<int>(s.size()) > n) return 0;
  const int free = placed(s, n / 3, 0);
  return free < 0 ? 0 : std::ldexp(1.0L, free);
}

Count ThreeMmeSource::count_suffix(std::string_view s, int n) const {
  if (count(n) == 0 || static_cast<int>(s.size()) > n) return 0;
  const int free = placed(s, n / 3, n - static_cast<int>(s.size()));
  return free < 0 ? 0 : std::ldexp(1.0L, free);
}

Count ThreeMmeSource::count_infix(std::string_view s, int n) const {
  if (count(n) == 0) return 0;
  Count total = 0;
  for (int l = 1; l + static_cast<int>(s.size()) < n; ++l) {
    const int free = placed(s, n / 3, l);
    if (free >= 0) total += std::ldexp(1.0L, free);
  }
  return total;
}

std::optional<double> ThreeMmeSource::entropy_closed_form() const {
  if (max_block_) return 0.0;
  return (2.0 / 3.0) * std::log(2.0);
}

// -- presets -------------------------------------------------------------------

namespace {

const char* kGapCert = "every generator starts with the only occurrence of symbol 0, so parses are unique";

int params_int(const json& p, const char* key, int dflt) {
  if (!p.contains(key)) return dflt;
  if (!p.at(key).is_number_integer()) throw std::invalid_argument(std::string("params.") + key + " must be an integer");
  return p.at(key).get<int>();
}

double params_num(const json& p, const char* key, double dflt) {
  if (!p.contains(key)) return dflt;
  if (!p.at(key).is_number()) throw std::invalid_argument(std::string("params.") + key + " must be a number");
  return p.at(key).get<double>();
}

}  // namespace

GeneratingSet sgap(const GapSet& S) {
  return GeneratingSet::family(std::make_shared<SGapSource>(S), TailBound{1.0, 1.0, 1}, kGapCert);
}

GeneratingSet multigap(const std::vector<GapSet>& S) {
  return GeneratingSet::family(std::make_shared<MultiGapSource>(S),
                               TailBound{static_cast<double>(S.size()), 1.0, 1}, kGapCert);
}

GeneratingSet dyck() {
  return GeneratingSet::family(std::make_shared<DyckSource>(), TailBound{1.0, std::pow(2.0, 1.5), 1},
                               "canonical Dyck generators cannot overlap, so parses are unique");
}

GeneratingSet dyck_g1() {
  auto src = std::make_shared<UnionSource>(std::make_shared<DyckSource>(),
                                           std::vector<Word>{Word(1, kDyckOpenParen), Word(1, kDyckOpenBracket)},
                                           "dyck_g1");
  return GeneratingSet::family(src, TailBound{1.0, std::pow(2.0, 1.5), 1},
                               "Dyck generators do not overlap and lone openers cannot end a "
                               "generator, so parses are unique");
}

GeneratingSet dyck_g2() {
  auto src = std::make_shared<UnionSource>(std::make_shared<DyckSource>(),
                                           std::vector<Word>{Word(1, kDyckCloseParen), Word(1, kDyckCloseBracket)},
                                           "dyck_g2");
  return GeneratingSet::family(src, TailBound{1.0, std::pow(2.0, 1.5), 1},
                               "mirror image of dyck_g1, parses are unique");
}

GeneratingSet dyck_generators(int n_max, std::size_t budget) {
  if (n_max < 1) throw std::invalid_argument("dyck_generators: n_max must be >= 1");
  DyckSource src;
  std::vector<Word> words;
  for (int n = 1; n <= n_max; ++n) {
    if (static_cast<long double>(words.size()) + src.count(2 * n) > static_cast<long double>(budget))
      throw std::runtime_error("dyck_generators: enumeration budget exceeded at n=" + std::to_string(n));
    auto w = src.enumerate(2 * n);
    words.insert(words.end(), w.begin(), w.end());
  }
  auto G = GeneratingSet::from_words(dyck_alphabet(), std::move(words));
  G.set_certificate("canonical Dyck generators cannot overlap, so parses are unique");
  return G;
}

GeneratingSet nongibbs(int power) {
  return GeneratingSet::family(std::make_shared<NonGibbsSource>(power), TailBound{1.0, 1.0, 1},
                               "each generator begins at a 1-to-0 transition, so parses are unique");
}

GeneratingSet nongibbs(std::vector<int> n) {
  return GeneratingSet::family(std::make_shared<NonGibbsSource>(std::move(n)), TailBound{1.0, 1.0, 1},
                               "each generator begins at a 1-to-0 transition, so parses are unique");
}

GeneratingSet three_mme() {
  return GeneratingSet::family(std::make_shared<ThreeMmeSource>(), TailBound{1.0, std::pow(2.0, 2.0 / 3.0), 1},
                               "prefix code: position n of a block-n generator is in {2,3}, of a "
                               "longer one in {0,1}");
}

GapSet gapset_from_json(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "N0" || s == "naturals") return GapSet::progression(0, 1);
    throw std::invalid_argument("gap set string must be \"N0\"");
  }
  if (j.is_array()) return GapSet::finite(j.get<std::vector<int>>());
  if (j.is_object()) {
    std::vector<int> vals = j.value("values", std::vector<int>{});
    if (j.contains("start")) return GapSet::progression(j.at("start").get<int>(), j.value("step", 1), vals);
    return GapSet::finite(vals);
  }
  throw std::invalid_argument("gap set must be an array, an object or \"N0\"");
}

json gapset_to_json(const GapSet& S) {
  if (!S.start) return json(S.values);
  json j = {{"start", *S.start}, {"step", S.step}};
  if (!S.values.empty()) j["values"] = S.values;
  return j;
}

std::vector<std::string> preset_names() {
  return {"sgap", "multigap", "beta", "dyck", "dyck_g1", "dyck_g2", "nongibbs", "three_mme", "theorem_a", "augmented"};
}

GeneratingSet preset(const std::string& name, const json& params) {
  const json& p = params.is_null() ? json::object() : params;
  if (!p.is_object()) throw std::invalid_argument("family params must be a JSON object");
  if (name == "sgap") {
    if (!p.contains("S")) throw std::invalid_argument("sgap: params.S is required");
    return sgap(gapset_from_json(p.at("S")));
  }
  if (name == "multigap") {
    if (!p.contains("S") || !p.at("S").is_array()) throw std::invalid_argument("multigap: params.S must be a list of gap sets");
    std::vector<GapSet> S;
    for (const auto& s : p.at("S")) S.push_back(gapset_from_json(s));
    return multigap(S);
  }
  if (name == "beta") {
    if (!p.contains("beta")) throw std::invalid_argument("beta: params.beta is required");
    return beta_generators(params_num(p, "beta", 0), std::max(1, params_int(p, "depth", 64))).second;
  }
  if (name == "dyck") {
    if (p.contains("n_max")) return dyck_generators(params_int(p, "n_max", 1));
    return dyck();
  }
  if (name == "dyck_g1") return dyck_g1();
  if (name == "dyck_g2") return dyck_g2();
  if (name == "nongibbs") {
    if (p.contains("n")) return nongibbs(p.at("n").get<std::vector<int>>());
    return nongibbs(params_int(p, "power", 2));
  }
  if (name == "three_mme") {
    if (p.contains("max_block"))
      return GeneratingSet::family(std::make_shared<ThreeMmeSource>(params_int(p, "max_block", 1)),
                                   TailBound{1.0, std::pow(2.0, 2.0 / 3.0), 1}, "prefix code");
    return three_mme();
  }
  if (name == "theorem_a") {
    if (!p.contains("sft")) throw std::invalid_argument("theorem_a: params.sft is required");
    auto sft = sft_from_json(p.at("sft"));
    return build_theorem_a(sft, params_num(p, "epsilon", 0.1), params_int(p, "n", 4)).generators;
  }
  if (name == "augmented") {
    if (!p.contains("base")) throw std::invalid_argument("augmented: params.base is required");
    const auto& b = p.at("base");
    auto base = preset(b.at("name").get<std::string>(), b.value("params", json::object()));
    std::vector<int> m = p.value("m", std::vector<int>{});
    return build_augmentation(base, params_num(p, "epsilon", 0.05), params_int(p, "depth", 3), m).combined;
  }
  throw std::invalid_argument("unknown family '" + name + "'");
}

}  // namespace cst
