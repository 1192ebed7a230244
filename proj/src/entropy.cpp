#include "cst/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cst/kernels.hpp"

namespace cst {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::ok: return "ok";
    case SolveStatus::degenerate: return "degenerate";
    case SolveStatus::no_root: return "no_root";
  }
  return "unknown";
}

SeriesValue characteristic_fn(const GeneratingSet& G, double lambda, int N) {
  if (N < 1) throw std::invalid_argument("characteristic_fn: N must be >= 1");
  if (!(lambda > 0)) throw std::invalid_argument("characteristic_fn: lambda must be positive");
  if (!G.finite() && !(lambda > G.tail().rho))
    throw std::domain_error("characteristic series diverges: lambda must exceed rho = " +
                            std::to_string(G.tail().rho));
  SeriesValue out;
  out.depth = N;
  const long double y = 1.0L / lambda;
  long double yn = 1, sum = 0;
  for (int n = 1; n <= N; ++n) {
    yn *= y;
    const Count c = G.count(n);
    if (c != 0) sum += c * yn;
  }
  out.value = static_cast<double>(sum);
  out.tail = G.tail_sum(1.0 / lambda, std::max(N, G.tail().N0 - 1));
  if (N < G.tail().N0 - 1) {
    // terms between N and N0 are not covered by the bound: add them exactly
    long double extra = 0, ym = std::pow(y, static_cast<long double>(N));
    for (int n = N + 1; n < G.tail().N0; ++n) {
      ym *= y;
      extra += G.count(n) * ym;
    }
    out.tail += static_cast<double>(extra);
  }
  return out;
}

WeightedPotential WeightedPotential::length(double t) {
  WeightedPotential p;
  p.slope = -t;
  return p;
}

double WeightedPotential::operator()(const Word& g) const {
  auto it = overrides.find(g);
  if (it != overrides.end()) return it->second;
  if (finite_support) return -std::numeric_limits<double>::infinity();
  return offset + slope * static_cast<double>(g.size());
}

namespace {

constexpr int kMaxDepth = 8192;

// sum_g e^{Phi(g)} lambda^{-|g|} with automatic depth.
class WeightedSeries {
 public:
  WeightedSeries(const GeneratingSet& G, const WeightedPotential& phi, double tol)
      : G_(G), phi_(phi), tol_(tol) {
    K_ = std::exp(static_cast<long double>(phi.offset));
    b_ = phi.slope;
    int max_override = 0;
    for (const auto& [g, v] : phi.overrides) {
      if (!G.contains(g)) throw std::invalid_argument("potential override for a word that is not a generator");
      const int n = static_cast<int>(g.size());
      max_override = std::max(max_override, n);
      const long double base = phi.finite_support ? 0.0L : K_ * std::exp(static_cast<long double>(b_) * n);
      corr_.emplace_back(n, std::exp(static_cast<long double>(v)) - base);
    }
    if (phi.finite_support) {
      if (phi.overrides.empty()) throw std::invalid_argument("finite-support potential without generators");
      exact_ = true;
      exact_depth_ = max_override;
      rho_eff_ = 0;
    } else if (G.finite()) {
      exact_ = true;
      exact_depth_ = std::max(*G.max_length(), max_override);
      rho_eff_ = 0;
    } else {
      exact_ = false;
      rho_eff_ = G.tail().rho * std::exp(b_);
      min_depth_ = std::max({32, G.tail().N0 - 1, max_override});
    }
  }

  bool exact() const { return exact_; }
  double rho_eff() const { return rho_eff_; }

  SeriesValue eval(double lambda) {
    SeriesValue out;
    const long double y = std::exp(static_cast<long double>(b_)) / lambda;
    int N;
    long double tail = 0;
    if (exact_) {
      N = exact_depth_;
    } else {
      N = min_depth_;
      while (true) {
        tail = K_ * static_cast<long double>(G_.tail_sum(static_cast<double>(y), N));
        if (tail < tol_ / 10 || N >= kMaxDepth) break;
        N = std::min(2 * N, kMaxDepth);
      }
    }
    long double sum = 0;
    if (!phi_.finite_support) {
      grow(N);
      long double yn = 1;
      for (int n = 1; n <= N; ++n) {
        yn *= y;
        if (spectrum_[n - 1] != 0) sum += spectrum_[n - 1] * yn;
      }
      sum *= K_;
    }
    for (const auto& [n, delta] : corr_) sum += delta * std::pow(1.0L / lambda, static_cast<long double>(n));
    out.value = static_cast<double>(sum);
    out.tail = std::isfinite(static_cast<double>(tail)) ? static_cast<double>(tail)
                                                       : std::numeric_limits<double>::infinity();
    out.depth = N;
    return out;
  }

 private:
  void grow(int N) {
    while (static_cast<int>(spectrum_.size()) < N) spectrum_.push_back(G_.count(static_cast<int>(spectrum_.size()) + 1));
  }

  const GeneratingSet& G_;
  const WeightedPotential& phi_;
  double tol_;
  long double K_ = 1;
  double b_ = 0;
  bool exact_ = false;
  int exact_depth_ = 0;
  int min_depth_ = 32;
  double rho_eff_ = 1;
  std::vector<long double> spectrum_;
  std::vector<std::pair<int, long double>> corr_;
};

double residual_of(const SeriesValue& v) {
  return std::max(std::abs(v.value - 1.0), std::abs(v.value + v.tail - 1.0));
}

}  // namespace

CharacteristicSolution solve_pressure(const GeneratingSet& G, const WeightedPotential& phi, double tol) {
  if (!(tol > 0) || tol >= 1) throw std::invalid_argument("tolerance must lie in (0, 1)");
  WeightedSeries S(G, phi, tol);
  CharacteristicSolution sol;
  sol.tol = tol;

  double lo, hi;
  bool certified = false;
  if (S.exact()) {
    const auto one = S.eval(1.0);
    if (std::abs(one.value - 1.0) <= 4 * std::numeric_limits<double>::epsilon()) {
      sol.status = phi.is_zero() ? SolveStatus::degenerate : SolveStatus::ok;
      sol.lambda_star = sol.lo = sol.hi = 1.0;
      sol.h_top = 0.0;
      sol.depth = one.depth;
      sol.residual = std::abs(one.value - 1.0);
      sol.note = "series equals 1 at lambda = 1";
      return sol;
    }
    if (one.value > 1) {
      lo = 1.0;
      hi = 2.0;
      while (S.eval(hi).value >= 1) {
        hi *= 2;
        if (hi > 1e300) throw std::domain_error("weighted series does not drop below 1");
      }
    } else {
      hi = 1.0;
      lo = 0.5;
      while (S.eval(lo).value < 1) {
        hi = lo;
        lo /= 2;
        if (lo < 1e-300) throw std::domain_error("weighted series never reaches 1");
      }
    }
    certified = true;
  } else {
    const double floor = S.rho_eff() >= 1 ? S.rho_eff() + 1e-9 : (S.rho_eff() > 0 ? S.rho_eff() * (1 + 1e-9) : 1e-9);
    lo = std::max(floor, S.rho_eff() >= 1 ? 1.0 + 1e-9 : floor);
    const auto at_lo = S.eval(lo);
    certified = at_lo.value >= 1;
    hi = lo + 1;
    while (true) {
      const auto v = S.eval(hi);
      if (v.value + v.tail < 1) break;
      hi = lo + 2 * (hi - lo);
      if (hi > 1e300) throw std::domain_error("weighted series diverges: no upper bracket");
    }
  }

  double last_residual = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < 2000; ++it) {
    if (hi - lo <= tol * lo && last_residual <= tol) break;
    const double mid = lo + (hi - lo) / 2;
    if (!(mid > lo && mid < hi)) break;
    const auto v = S.eval(mid);
    if (v.value >= 1) {
      lo = mid;
      certified = true;
    } else if (v.value + v.tail < 1) {
      hi = mid;
    } else if (v.value + v.tail / 2 >= 1) {
      lo = mid;
    } else {
      hi = mid;
    }
    last_residual = residual_of(v);
  }
  sol.iterations = it;
  sol.lo = lo;
  sol.hi = hi;
  sol.lambda_star = lo + (hi - lo) / 2;
  const auto fin = S.eval(sol.lambda_star);
  sol.depth = fin.depth;
  sol.residual = residual_of(fin);
  if (!certified) {
    sol.status = SolveStatus::no_root;
    sol.h_top = std::numeric_limits<double>::quiet_NaN();
    sol.note = "series stays below 1 above rho_eff; sup bound near the floor is " +
               std::to_string(fin.value + fin.tail);
    return sol;
  }
  sol.status = SolveStatus::ok;
  sol.h_top = std::log(sol.lambda_star);
  if (sol.residual > tol) sol.note = "residual above tol at floating-point resolution";
  return sol;
}

CharacteristicSolution solve_entropy(const GeneratingSet& G, double tol) {
  return solve_pressure(G, WeightedPotential::zero(), tol);
}

FiniteRoot solve_finite_series(const std::vector<long double>& coeff, double tol) {
  FiniteRoot out;
  auto f = [&](long double lambda) {
    long double y = 1.0L / lambda, yn = 1, s = 0;
    for (long double c : coeff) {
      yn *= y;
      s += c * yn;
    }
    return s;
  };
  long double total = 0;
  for (long double c : coeff) total += c;
  if (total == 1) {
    out.status = SolveStatus::degenerate;
    out.lambda = 1;
    return out;
  }
  if (total < 1) {
    out.status = SolveStatus::no_root;
    out.lambda = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  long double lo = 1, hi = 2;
  while (f(hi) >= 1) hi *= 2;
  int it = 0;
  while (hi - lo > tol * lo && it < 400) {
    const long double mid = lo + (hi - lo) / 2;
    if (f(mid) >= 1)
      lo = mid;
    else
      hi = mid;
    ++it;
  }
  out.iterations = it;
  out.lambda = static_cast<double>(lo + (hi - lo) / 2);
  return out;
}

SeriesValue sgraph_char_value(const SGraphSpec& spec, double x, int N) {
  if (!(x > 0 && x < 1)) throw std::invalid_argument("sgraph_char_value: x must lie in (0, 1)");
  if (spec.r < 0) throw std::invalid_argument("sgraph_char_value: r must be >= 0");
  long double inner = 0, tail = 0;
  for (const auto& S : spec.S) {
    for (int s : S.members_up_to(N)) inner += std::pow(static_cast<long double>(x), s);
    tail += S.tail(x, N);
  }
  SeriesValue out;
  out.value = static_cast<double>(1.0L - spec.r * static_cast<long double>(x) - x * inner);
  out.tail = static_cast<double>(x * tail);
  out.depth = N;
  return out;
}

std::vector<SoficStep> sofic_approx_entropies(const GeneratingSet& G, int m_max, double tol) {
  if (m_max < 1) throw std::invalid_argument("sofic_approx_entropies: m_max must be >= 1");
  std::vector<SoficStep> out;
  std::vector<long double> coeff;
  long long m = 0;
  for (int n = 1; m < m_max; ++n) {
    if (auto ml = G.max_length(); ml && n > *ml) break;
    if (n > 1'000'000) throw std::runtime_error("sofic_approx_entropies: generators too sparse");
    const Count c = G.count(n);
    coeff.push_back(0);
    for (Count i = 0; i < c && m < m_max; i += 1) {
      coeff.back() += 1;
      ++m;
      auto r = solve_finite_series(coeff, tol);
      out.push_back(SoficStep{m, n, r.status, r.lambda});
    }
  }
  return out;
}

std::vector<SoficStep> sofic_by_length(const GeneratingSet& G, int L_max, double tol, bool parallel) {
  if (L_max < 1) throw std::invalid_argument("sofic_by_length: L_max must be >= 1");
  std::vector<long double> coeff;
  for (int n = 1; n <= L_max; ++n) coeff.push_back(G.count(n));
  auto roots = parallel ? kernels::prefix_roots_omp(coeff, tol) : kernels::prefix_roots_serial(coeff, tol);
  std::vector<SoficStep> out;
  long double m = 0;
  for (int L = 1; L <= L_max; ++L) {
    m += coeff[L - 1];
    if (m == 0) continue;
    out.push_back(SoficStep{static_cast<long long>(std::min<long double>(m, 9.2e18L)), L, roots[L - 1].status,
                            roots[L - 1].lambda});
  }
  return out;
}

GensetEntropy genset_entropy(const GeneratingSet& G, int N) {
  if (N < 1) throw std::invalid_argument("genset_entropy: N must be >= 1");
  GensetEntropy out;
  out.N = N;
  out.window_lo = std::max(1, (3 * N) / 4);
  out.closed_form = G.source().entropy_closed_form();
  std::vector<double> xs, ys;
  for (int n = out.window_lo; n <= N; ++n) {
    const Count c = G.count(n);
    if (c <= 0) continue;
    const double lc = static_cast<double>(std::log(c));
    xs.push_back(n);
    ys.push_back(lc);
    out.ratio_estimate = std::max(out.ratio_estimate, lc / n);
  }
  if (xs.size() >= 2) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= xs.size();
    my /= xs.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    out.slope_estimate = std::max(0.0, sxy / sxx);
  }
  return out;
}

}  // namespace cst
