#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "cst/families.hpp"
#include "cst/rng.hpp"

namespace cst {

namespace {

bool is_opener(char c) { return (static_cast<unsigned char>(c) & 1) == 0; }
char type_of(char c) { return static_cast<char>(static_cast<unsigned char>(c) >> 1); }

BigCount binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigCount r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Paths from height h to 0 in r unit steps that first reach 0 at step r.
BigCount first_passage(int h, int r) {
  if (h == 0) return r == 0 ? 1 : 0;
  if (r < h || (r - h) % 2) return 0;
  return binom(r, (r - h) / 2) * h / r;
}

// first_passage times the free types of the pairs opened and closed on the way
BigCount typed_first_passage(int h, int r) {
  if (r < h || (r - h) % 2) return 0;
  return first_passage(h, r) << ((r - h) / 2);
}

long double log_binom(int n, int k) {
  return std::lgamma(static_cast<long double>(n) + 1) - std::lgamma(static_cast<long double>(k) + 1) -
         std::lgamma(static_cast<long double>(n - k) + 1);
}

// log of typed_first_passage(h, r), h >= 1
long double log_typed_first_passage(int h, int r) {
  return std::log(static_cast<long double>(h) / r) + log_binom(r, (r - h) / 2) +
         ((r - h) / 2) * std::log(2.0L);
}

long double to_ld(const BigCount& v) { return v.convert_to<long double>(); }

}  // namespace

Alphabet dyck_alphabet() { return Alphabet(std::vector<std::string>{"(", ")", "[", "]"}); }

DyckCounts dyck_counts(int N) {
  if (N < 1) throw std::invalid_argument("dyck_counts: N must be >= 1");
  DyckCounts out;
  out.d.reserve(N);
  out.d.push_back(2);
  for (int n = 1; n < N; ++n) {
    BigCount next = 0;
    for (int j = 1; j <= n; ++j) next += out.d[j - 1] * out.d[n - j];
    out.d.push_back(next);
  }
  return out;
}

BigCount dyck_closed_form(int n) {
  if (n < 1) throw std::invalid_argument("dyck_closed_form: n must be >= 1");
  BigCount num = BigCount(1) << (n - 1);
  BigCount fact_2n = 1, fact_n = 1;
  for (int i = 2; i <= 2 * n; ++i) fact_2n *= i;
  for (int i = 2; i <= n; ++i) fact_n *= i;
  return num * fact_2n / ((2 * n - 1) * fact_n * fact_n);
}

DyckScan dyck_scan(std::string_view w) {
  DyckScan s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const char c = w[i];
    if (static_cast<unsigned char>(c) > 3) {
      s.consistent = false;
      return s;
    }
    if (is_opener(c)) {
      s.open_stack.push_back(type_of(c));
    } else if (s.open_stack.empty()) {
      s.unmatched_close.push_back(type_of(c));
    } else if (s.open_stack.back() != type_of(c)) {
      s.consistent = false;
      return s;
    } else {
      s.open_stack.pop_back();
      if (s.open_stack.empty() && i + 1 < w.size()) s.emptied_inside = true;
    }
  }
  return s;
}

Word dyck_mirror(std::string_view w) {
  Word out(w.rbegin(), w.rend());
  for (auto& c : out) c = static_cast<char>(c ^ 1);
  return out;
}

// -- counts ----------------------------------------------------------------------

Count DyckSource::count(int n) const {
  if (n < 2 || n % 2) return 0;
  const int m = n / 2;
  // d_{k+1} = d_k * 4 (2k - 1) / (k + 1), in log space for large k
  if (m <= 60) return to_ld(dyck_closed_form(m));
  long double logd = std::log(2.0L) * (m - 1) + log_binom(2 * m, m) - std::log(2.0L * m - 1);
  return std::exp(logd);
}

bool DyckSource::contains(std::string_view w) const {
  if (w.empty()) return false;
  auto s = dyck_scan(w);
  return s.consistent && s.unmatched_close.empty() && s.open_stack.empty() && !s.emptied_inside;
}

std::vector<Word> DyckSource::enumerate(int n) const {
  std::vector<Word> out;
  if (n < 2 || n % 2) return out;
  Word w;
  std::string stack;
  std::function<void()> rec = [&]() {
    const int pos = static_cast<int>(w.size());
    if (pos == n) {
      out.push_back(w);
      return;
    }
    const int remaining = n - pos;
    for (char c = 0; c < 4; ++c) {
      if (is_opener(c)) {
        if (static_cast<int>(stack.size()) + 1 > remaining - 1) continue;
        if (pos > 0 && stack.empty()) continue;
        w.push_back(c);
        stack.push_back(type_of(c));
        rec();
        stack.pop_back();
        w.pop_back();
      } else {
        if (stack.empty() || stack.back() != type_of(c)) continue;
        if (stack.size() == 1 && remaining > 1) continue;  // would close the outer pair early
        const char t = stack.back();
        w.push_back(c);
        stack.pop_back();
        rec();
        stack.push_back(t);
        w.pop_back();
      }
    }
  };
  rec();
  return out;
}

Word DyckSource::sample(int n, Rng& rng) const {
  if (n < 2 || n % 2) throw std::logic_error("dyck: no generator of length " + std::to_string(n));
  Word w;
  w.reserve(n);
  std::string stack;
  const char outer = static_cast<char>(uniform_index(rng, 2));
  w.push_back(static_cast<char>(2 * outer));
  // uniform Dyck path of length n - 2 for the interior, types uniform
  int h = 0;
  const int steps = n - 2;
  auto log_paths = [](int r, int height) {  // paths height -> 0 in r steps staying >= 0
    const int a = (r - height) / 2;
    return log_binom(r, a) + std::log(static_cast<long double>(height + 1) / (r - a + 1));
  };
  for (int i = 0; i < steps; ++i) {
    const int r = steps - i;
    bool up;
    if (h == 0) {
      up = true;
    } else if (h == r) {
      up = false;
    } else {
      const long double p_up = std::exp(log_paths(r - 1, h + 1) - log_paths(r, h));
      up = uniform01(rng) < p_up;
    }
    if (up) {
      const char t = static_cast<char>(uniform_index(rng, 2));
      stack.push_back(t);
      w.push_back(static_cast<char>(2 * t));
      ++h;
    } else {
      w.push_back(static_cast<char>(2 * stack.back() + 1));
      stack.pop_back();
      --h;
    }
  }
  w.push_back(static_cast<char>(2 * outer + 1));
  return w;
}

Count DyckSource::count_prefix(std::string_view s, int n) const {
  const int len = static_cast<int>(s.size());
  if (len > n || n % 2 || len == 0) return 0;
  auto sc = dyck_scan(s);
  if (!sc.consistent || !sc.unmatched_close.empty() || sc.emptied_inside) return 0;
  const int h = static_cast<int>(sc.open_stack.size());
  if (h == 0) return len == n ? 1 : 0;
  return to_ld(typed_first_passage(h, n - len));
}

Count DyckSource::count_suffix(std::string_view s, int n) const { return count_prefix(dyck_mirror(s), n); }

Count DyckSource::count_infix(std::string_view s, int n) const {
  const int len = static_cast<int>(s.size());
  if (len + 2 > n || n % 2 || len == 0) return 0;
  auto sc = dyck_scan(s);
  if (!sc.consistent) return 0;
  const int u = static_cast<int>(sc.unmatched_close.size());
  const int o = static_cast<int>(sc.open_stack.size());
  BigCount total = 0;
  for (int l = 1; l + len < n; ++l) {
    const int r = n - len - l;
    for (int H = u + 1; H <= l; ++H) {
      if ((l - H) % 2) continue;
      const int hp = H - u + o;
      if (r < hp || (r - hp) % 2) continue;
      // the top u openers of the prefix have forced types
      total += (first_passage(H, l) << ((l + H) / 2 - u)) * typed_first_passage(hp, r);
    }
  }
  return to_ld(total);
}

std::optional<double> DyckSource::entropy_closed_form() const { return 1.5 * std::log(2.0); }

// -- weighted pattern sums ---------------------------------------------------------

// pre[l][H]: typed prefixes of length l ending at height H (staying >= 1), times x^l.
// cum[h][R]: sum over r <= R of typed first passages from h, times x^r.
struct DyckSource::Tables {
  long double x = 0;
  int hi = 0;
  std::vector<long double> pre, cum;
  long double P(int l, int H) const { return pre[static_cast<std::size_t>(l) * (hi + 1) + H]; }
  long double C(int h, int R) const {
    if (R < 0) return 0;
    return cum[static_cast<std::size_t>(h) * (hi + 1) + std::min(R, hi)];
  }
};

std::shared_ptr<const DyckSource::Tables> DyckSource::tables(long double x, int hi) const {
  std::lock_guard lock(mu_);
  for (const auto& t : tables_)
    if (t->x == x && t->hi >= hi) return t;
  auto t = std::make_shared<Tables>();
  t->x = x;
  t->hi = hi;
  const std::size_t W = hi + 1;
  t->pre.assign(W * W, 0.0L);
  t->cum.assign(W * W, 0.0L);
  const long double lx = std::log(x), l2 = std::log(2.0L);
  for (int l = 1; l <= hi; ++l)
    for (int H = 1; H <= l; ++H) {
      if ((l - H) % 2) continue;
      t->pre[l * W + H] = std::exp(log_typed_first_passage(H, l) - ((l - H) / 2) * l2 + ((l + H) / 2) * l2 + l * lx);
    }
  for (int h = 1; h <= hi; ++h) {
    long double acc = 0;
    for (int R = 0; R <= hi; ++R) {
      if (R >= h && (R - h) % 2 == 0) acc += std::exp(log_typed_first_passage(h, R) + R * lx);
      t->cum[h * W + R] = acc;
    }
  }
  if (tables_.size() >= 4) tables_.erase(tables_.begin());
  tables_.push_back(t);
  return t;
}

long double DyckSource::prefix_mass_upto(std::string_view s, long double x, int hi) const {
  const int len = static_cast<int>(s.size());
  if (len == 0 || hi < len) return 0;
  auto sc = dyck_scan(s);
  if (!sc.consistent || !sc.unmatched_close.empty() || sc.emptied_inside) return 0;
  const int h = static_cast<int>(sc.open_stack.size());
  const long double xs = std::pow(x, static_cast<long double>(len));
  if (h == 0) return xs;
  if (h > hi) return 0;
  return xs * tables(x, hi)->C(h, hi - len);
}

long double DyckSource::infix_mass_upto(std::string_view s, long double x, int hi) const {
  const int len = static_cast<int>(s.size());
  if (len == 0 || hi < len + 2) return 0;
  auto sc = dyck_scan(s);
  if (!sc.consistent) return 0;
  const int u = static_cast<int>(sc.unmatched_close.size());
  const int o = static_cast<int>(sc.open_stack.size());
  auto t = tables(x, hi);
  long double total = 0;
  for (int l = 1; l + len < hi; ++l) {
    const int R = hi - len - l;
    for (int H = u + 1; H <= l; ++H) {
      const int hp = H - u + o;
      if ((l - H) % 2 || hp > R) continue;
      total += t->P(l, H) * t->C(hp, R);
    }
  }
  return total * std::pow(x, static_cast<long double>(len)) * std::pow(2.0L, -u);
}

long double DyckSource::pattern_mass(PatternKind kind, std::string_view s, long double x, int lo,
                                     int hi) const {
  if (hi < lo || hi < 1) return 0;
  if (!(x > 0)) return 0;
  switch (kind) {
    case PatternKind::Prefix:
      return prefix_mass_upto(s, x, hi) - (lo > 1 ? prefix_mass_upto(s, x, lo - 1) : 0.0L);
    case PatternKind::Suffix: {
      const Word m = dyck_mirror(s);
      return prefix_mass_upto(m, x, hi) - (lo > 1 ? prefix_mass_upto(m, x, lo - 1) : 0.0L);
    }
    case PatternKind::Infix:
      return infix_mass_upto(s, x, hi) - (lo > 1 ? infix_mass_upto(s, x, lo - 1) : 0.0L);
  }
  return 0;
}

}  // namespace cst
