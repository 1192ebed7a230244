#include "cst/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cst {

namespace {

constexpr int kMaxDepth = 8192;

void require_representation(const GeneratingSet& G, int L) {
  if (!G.certificate().empty()) return;
  auto v = sardinas_patterson(G, G.finite() ? *G.max_length() : L);
  if (!v.decipherable)
    throw std::invalid_argument("unique representation fails: '" + G.alphabet().format(*v.witness) +
                                "' has two parses");
}

GBernoulliMeasure build(const GeneratingSet& G, const WeightedPotential& phi, double lambda, std::string source) {
  GBernoulliMeasure mu;
  mu.G = G;
  mu.phi = phi;
  mu.lambda = lambda;
  mu.source = std::move(source);
  mu.K = phi.finite_support ? 0.0L : std::exp(static_cast<long double>(phi.offset));
  mu.x = std::exp(static_cast<long double>(phi.slope)) / lambda;
  for (const auto& [g, v] : phi.overrides)
    if (!G.contains(g)) throw std::invalid_argument("probability given for a word that is not a generator");

  int N;
  if (G.finite()) {
    N = *G.max_length();
  } else if (mu.K == 0) {
    N = 0;
    for (const auto& [g, v] : phi.overrides) N = std::max(N, static_cast<int>(g.size()));
  } else {
    N = std::max(32, G.tail().N0);
    while (mu.moment_tail_beyond(N) > 1e-15 && N < kMaxDepth) N = std::min(2 * N, kMaxDepth);
    if (!std::isfinite(mu.moment_tail_beyond(N)))
      throw std::domain_error(
          "c = sum |g| p_g is not certified finite (summability of |g| e^{-|g| h} fails at the "
          "available tail bound)");
  }
  for (const auto& [g, v] : phi.overrides) N = std::max(N, static_cast<int>(g.size()));
  mu.depth = N;

  long double mass = 0, moment = 0, xn = 1;
  for (int n = 1; n <= N; ++n) {
    xn *= mu.x;
    if (mu.K == 0) continue;
    const Count k = G.count(n);
    if (k == 0) continue;
    mass += k * mu.K * xn;
    moment += n * k * mu.K * xn;
  }
  for (const auto& [g, v] : phi.overrides) {
    const int n = static_cast<int>(g.size());
    const long double delta = std::exp(static_cast<long double>(v)) * std::pow(1.0L / lambda, n) - mu.length_weight(n);
    mass += delta;
    moment += n * delta;
  }
  mu.mass = static_cast<double>(mass);
  mu.c = static_cast<double>(moment);
  mu.mass_tail = mu.mass_tail_beyond(N);
  mu.c_tail = mu.moment_tail_beyond(N);
  if (!(mu.c > 0) || !std::isfinite(mu.c)) throw std::domain_error("normalizer c is not finite and positive");
  return mu;
}

}  // namespace

long double GBernoulliMeasure::length_weight(int n) const {
  if (K == 0) return 0;
  return K * std::pow(x, static_cast<long double>(n));
}

double GBernoulliMeasure::p(const Word& g) const {
  auto it = phi.overrides.find(g);
  if (it != phi.overrides.end()) return std::exp(it->second) * std::pow(lambda, -static_cast<double>(g.size()));
  if (!G.contains(g)) throw std::invalid_argument("'" + G.alphabet().format(g) + "' is not a generator");
  return static_cast<double>(length_weight(static_cast<int>(g.size())));
}

double GBernoulliMeasure::mass_tail_beyond(int L) const {
  double extra = 0;
  for (const auto& [g, v] : phi.overrides)
    if (static_cast<int>(g.size()) > L) extra += std::exp(v) * std::pow(lambda, -static_cast<double>(g.size()));
  if (K == 0) return extra;
  const int N0 = G.tail().N0;
  long double exact = 0;
  for (int n = L + 1; n < N0; ++n) exact += G.count(n) * length_weight(n);
  return extra + static_cast<double>(exact + K * G.tail_sum(static_cast<double>(x), std::max(L, N0 - 1)));
}

double GBernoulliMeasure::moment_tail_beyond(int L) const {
  double extra = 0;
  for (const auto& [g, v] : phi.overrides)
    if (static_cast<int>(g.size()) > L)
      extra += g.size() * std::exp(v) * std::pow(lambda, -static_cast<double>(g.size()));
  if (K == 0) return extra;
  const int N0 = G.tail().N0;
  long double exact = 0;
  for (int n = L + 1; n < N0; ++n) exact += n * G.count(n) * length_weight(n);
  return extra + static_cast<double>(exact + K * G.tail_moment(static_cast<double>(x), std::max(L, N0 - 1)));
}

GBernoulliMeasure mme(const GeneratingSet& G, const CharacteristicSolution& sol) {
  if (sol.status == SolveStatus::no_root) throw std::invalid_argument("mme: the characteristic equation has no root");
  auto mu = build(G, WeightedPotential::zero(), sol.lambda_star, "mme");
  const double slack = std::max(1e-9, 10 * sol.residual);
  if (std::abs(mu.mass - 1.0) > mu.mass_tail + slack)
    throw std::domain_error("mme: sum of p_g differs from 1 by " + std::to_string(mu.mass - 1.0));
  return mu;
}

GBernoulliMeasure equilibrium(const GeneratingSet& G, const WeightedPotential& phi, const CharacteristicSolution& sol) {
  if (sol.status == SolveStatus::no_root) throw std::invalid_argument("equilibrium: the pressure equation has no root");
  return build(G, phi, sol.lambda_star, "pressure");
}

GBernoulliMeasure custom_measure(const GeneratingSet& G, const std::map<Word, double>& p) {
  WeightedPotential phi;
  phi.finite_support = true;
  double total = 0;
  for (const auto& [g, v] : p) {
    if (!(v > 0)) throw std::invalid_argument("custom measure: probabilities must be positive");
    phi.overrides[g] = std::log(v);
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("custom measure: probabilities must sum to 1");
  return build(G, phi, 1.0, "custom");
}

double g_cylinder(const GBernoulliMeasure& mu, const std::vector<Word>& gs) {
  long double v = 1.0L / mu.c;
  for (const auto& g : gs) v *= mu.p(g);
  return static_cast<double>(v);
}

CylinderEstimate word_cylinder(const GBernoulliMeasure& mu, const Word& w, int L) {
  if (L < 1) throw std::invalid_argument("word_cylinder: cap must be >= 1");
  if (w.empty()) {
    CylinderEstimate whole;
    whole.value = 1;
    whole.cutoff = L;
    return whole;
  }
  if (!mu.G.alphabet().valid(w)) throw std::invalid_argument("word_cylinder: word uses symbols outside the alphabet");
  require_representation(mu.G, L);
  if (auto ml = mu.G.max_length()) L = std::min(L, *ml);

  const auto& src = mu.G.source();
  const int m = static_cast<int>(w.size());
  const std::string_view ws(w);
  long long terms = 0;

  auto base = [&](PatternKind kind, std::string_view s, int lo, int hi) -> long double {
    if (mu.K == 0 || hi < lo) return 0;
    const long double v = mu.K * src.pattern_mass(kind, s, mu.x, lo, hi);
    if (v != 0) ++terms;
    return v;
  };
  struct Override {
    Word g;
    long double delta;
  };
  std::vector<Override> over;
  for (const auto& [g, v] : mu.phi.overrides) {
    const int n = static_cast<int>(g.size());
    if (n > L) continue;
    over.push_back({g, std::exp(static_cast<long double>(v)) * std::pow(1.0L / mu.lambda, n) - mu.length_weight(n)});
  }

  // R[j]: probability that the blocks from a boundary at j reproduce w[j, m)
  std::vector<long double> R(m + 1, 0);
  R[m] = 1;
  for (int j = m - 1; j >= 1; --j) {
    long double r = 0;
    for (int t = 1; t <= std::min(L, m - j); ++t) {
      if (R[j + t] == 0) continue;
      const Word g = w.substr(j, t);
      if (!mu.G.contains(g)) continue;
      r += mu.p(g) * R[j + t];
      ++terms;
    }
    const std::string_view u = ws.substr(j);
    r += base(PatternKind::Prefix, u, m - j + 1, L);
    for (const auto& o : over)
      if (o.g.size() > u.size() && has_prefix(o.g, u)) r += o.delta;
    R[j] = r;
  }

  long double total = 0;
  for (int j = 1; j <= m; ++j) {
    if (R[j] == 0) continue;
    const std::string_view head = ws.substr(0, j);
    long double S = base(PatternKind::Suffix, head, j, L);
    for (const auto& o : over)
      if (has_suffix(o.g, head)) S += o.delta;
    total += S * R[j];
  }
  total += base(PatternKind::Prefix, ws, m + 1, L) + base(PatternKind::Infix, ws, m + 2, L);
  for (const auto& o : over) {
    if (static_cast<int>(o.g.size()) > m && has_prefix(o.g, ws)) total += o.delta;
    total += o.delta * interior_occurrences(o.g, ws);
  }

  CylinderEstimate est;
  est.cutoff = L;
  est.covers_enumerated = terms;
  est.value = std::clamp(static_cast<double>(total / mu.c), 0.0, 1.0);
  const double t = m * mu.moment_tail_beyond(L) / mu.c;
  est.tail_error = std::max(0.0, std::min(t, 1.0 - est.value));
  return est;
}

int default_cutoff(const GBernoulliMeasure& mu, double target, int max_cap) {
  if (auto ml = mu.G.max_length()) return *ml;
  int L = 8;
  while (L < max_cap && !(mu.moment_tail_beyond(L) / mu.c < target)) L = std::min(2 * L, max_cap);
  int lo = L / 2;
  while (lo + 1 < L) {
    const int mid = (lo + L) / 2;
    if (mu.moment_tail_beyond(mid) / mu.c < target)
      L = mid;
    else
      lo = mid;
  }
  return L;
}

MeasureEntropy measure_entropy(const GBernoulliMeasure& mu) {
  const int N = mu.depth;
  long double H = 0, xn = 1;
  const long double logK = mu.K > 0 ? std::log(mu.K) : 0, logx = std::log(mu.x);
  for (int n = 1; n <= N; ++n) {
    xn *= mu.x;
    if (mu.K == 0) continue;
    const Count k = mu.G.count(n);
    if (k == 0) continue;
    H -= k * mu.K * xn * (logK + n * logx);
  }
  for (const auto& [g, v] : mu.phi.overrides) {
    const int n = static_cast<int>(g.size());
    const long double p = std::exp(static_cast<long double>(v)) * std::pow(1.0L / mu.lambda, n);
    H -= p * std::log(p);
    const long double q = mu.length_weight(n);
    if (q > 0) H += q * std::log(q);
  }
  MeasureEntropy out;
  out.induced = static_cast<double>(H);
  if (mu.K > 0) {
    out.tail = static_cast<double>(std::abs(logK) * mu.mass_tail_beyond(N) + std::abs(logx) * mu.moment_tail_beyond(N));
    if (!std::isfinite(out.tail)) throw std::domain_error("entropy series is not certified convergent");
  }
  out.h = out.induced / mu.c;
  return out;
}

SeriesValue partition_sum(const GBernoulliMeasure& mu, int N) {
  long double s = 0;
  for (int n = 1; n <= N; ++n) {
    const Count k = mu.G.count(n);
    if (k != 0) s += n * k * mu.length_weight(n);
  }
  for (const auto& [g, v] : mu.phi.overrides) {
    const int n = static_cast<int>(g.size());
    if (n > N) continue;
    s += n * (std::exp(static_cast<long double>(v)) * std::pow(1.0L / mu.lambda, n) - mu.length_weight(n));
  }
  SeriesValue out;
  out.value = static_cast<double>(s / mu.c);
  out.tail = mu.moment_tail_beyond(N) / mu.c;
  out.depth = N;
  return out;
}

GibbsReport gibbs_scan(const GBernoulliMeasure& mu, const std::vector<Word>& words, double h, int L) {
  if (words.empty()) throw std::invalid_argument("gibbs_scan: word list is empty");
  GibbsReport rep;
  rep.inf_ratio = std::numeric_limits<double>::infinity();
  rep.sup_ratio = 0;
  for (const auto& w : words) {
    auto est = word_cylinder(mu, w, L);
    const double scale = std::exp(static_cast<double>(w.size()) * h);
    rep.words.push_back(w);
    rep.ratios.push_back(est.value * scale);
    rep.tail_errors.push_back(est.tail_error * scale);
    rep.inf_ratio = std::min(rep.inf_ratio, rep.ratios.back());
    rep.sup_ratio = std::max(rep.sup_ratio, rep.ratios.back());
  }
  return rep;
}

}  // namespace cst
