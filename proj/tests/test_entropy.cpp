#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <random>
#include <set>

#include "cst/entropy.hpp"
#include "cst/families.hpp"
#include "cst/kernels.hpp"
#include "support.hpp"

using namespace cst;
using oracle::digits;

namespace {

const double kGolden = (1 + std::sqrt(5.0)) / 2;

GeneratingSet explicit_set(std::initializer_list<const char*> words) {
  std::vector<Word> ws;
  for (const char* w : words) ws.push_back(digits(w));
  return GeneratingSet::from_words(Alphabet::digits(2), ws);
}

}  // namespace

TEST_CASE("characteristic function examples") {
  const auto v = characteristic_fn(dyck_g1(), 3.0, 400);
  CHECK(std::abs(v.value - 1) <= v.tail + 1e-12);
  CHECK(v.tail < 1e-6);

  const auto f = characteristic_fn(explicit_set({"0", "01"}), kGolden, 10);
  CHECK(f.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.tail == 0);

  CHECK_THROWS_AS(characteristic_fn(dyck(), 2.5, 50), std::domain_error);
}

TEST_CASE("characteristic function is strictly decreasing above rho") {
  for (const auto& G : {three_mme(), dyck_g1(), sgap(GapSet::finite({0, 1}))}) {
    double prev = INFINITY;
    for (double lambda = std::max(1.0, G.tail().rho) + 0.05; lambda < 6; lambda += 0.05) {
      const double v = characteristic_fn(G, lambda, 200).value;
      CHECK(v < prev);
      prev = v;
    }
  }
}

TEST_CASE("entropy solves") {
  const auto t = solve_entropy(three_mme(), 1e-12);
  CHECK(t.status == SolveStatus::ok);
  CHECK(std::abs(t.lambda_star - 2) < 1e-10);
  CHECK(t.lo <= t.lambda_star);
  CHECK(t.lambda_star <= t.hi);

  const auto all = solve_entropy(sgap(GapSet::progression(0, 1)));
  CHECK(std::abs(all.lambda_star - 2) < 1e-10);

  Eigen::MatrixXd golden(2, 2);
  golden << 1, 1, 1, 0;
  const auto gm = solve_entropy(sgap(GapSet::finite({0, 1})));
  CHECK(std::abs(gm.lambda_star - oracle::spectral_radius(golden)) < 1e-10);

  const auto d = solve_entropy(dyck_g1());
  CHECK(std::abs(d.lambda_star - 3) < 1e-9);

  CHECK(solve_entropy(dyck()).status == SolveStatus::no_root);
}

TEST_CASE("bracket is sound") {
  for (const auto& G : {three_mme(), dyck_g1(), sgap(GapSet::finite({0, 1, 3})), explicit_set({"0", "01", "110"})}) {
    const auto s = solve_entropy(G, 1e-12);
    REQUIRE(s.status == SolveStatus::ok);
    const auto lo = characteristic_fn(G, s.lo, s.depth);
    const auto hi = characteristic_fn(G, s.hi, s.depth);
    CHECK(lo.value + lo.tail >= 1);
    CHECK(hi.value <= 1 + hi.tail);
    CHECK(s.hi - s.lo <= 1e-12 * s.hi * 2);
    const auto mid = characteristic_fn(G, s.lambda_star, s.depth);
    CHECK(std::abs(mid.value - 1) <= s.residual + mid.tail + 1e-15);
  }
}

TEST_CASE("degenerate entropy") {
  const auto s = solve_entropy(explicit_set({"0"}));
  CHECK(s.status == SolveStatus::degenerate);
  CHECK(s.h_top == 0);
  CHECK(s.lambda_star == 1);
}

TEST_CASE("pressure") {
  const auto zero = solve_pressure(three_mme(), WeightedPotential::zero());
  CHECK(std::abs(zero.h_top - std::log(2.0)) < 1e-10);

  const double t = 0.1;
  const auto p = solve_pressure(dyck_g1(), WeightedPotential::length(t));
  CHECK(std::abs(p.h_top - (std::log(3.0) - t)) < 1e-9);

  WeightedPotential q;
  q.finite_support = true;
  q.overrides[digits("0")] = std::log(0.25);
  q.overrides[digits("01")] = std::log(0.75);
  const auto fin = solve_pressure(explicit_set({"0", "01", "10"}), q);
  CHECK(std::abs(fin.lambda_star - 1) < 1e-10);
  CHECK(std::abs(fin.h_top) < 1e-10);
}

TEST_CASE("zero potential reproduces the entropy solve bit for bit") {
  for (const auto& G : {three_mme(), dyck_g1(), sgap(GapSet::finite({0, 2, 5})), explicit_set({"0", "01"})}) {
    const auto a = solve_entropy(G, 1e-11);
    const auto b = solve_pressure(G, WeightedPotential::zero(), 1e-11);
    CHECK(std::memcmp(&a.lambda_star, &b.lambda_star, sizeof(double)) == 0);
    CHECK(a.depth == b.depth);
    CHECK(a.iterations == b.iterations);
  }
}

TEST_CASE("S-graph value equals the dense determinant") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    SGraphSpec spec;
    std::vector<std::vector<int>> members;
    const int d = static_cast<int>(rng() % 4);
    spec.r = static_cast<int>(rng() % 3);
    for (int i = 0; i < d; ++i) {
      std::set<int> s;
      const int k = 1 + static_cast<int>(rng() % 5);
      while (static_cast<int>(s.size()) < k) s.insert(static_cast<int>(rng() % 8));
      members.emplace_back(s.begin(), s.end());
      spec.S.push_back(GapSet::finite(members.back()));
    }
    for (double x : {0.1, 0.2, 0.3}) {
      const auto v = sgraph_char_value(spec, x, 20);
      CHECK(std::abs(v.value - oracle::sgraph_determinant(members, spec.r, x)) < 1e-10);
    }
  }
  SGraphSpec full{{}, 2};
  CHECK(sgraph_char_value(full, 0.5, 10).value == doctest::Approx(0.0));
}

TEST_CASE("S-graph tails for progressions") {
  SGraphSpec spec{{GapSet::progression(1, 2)}, 1};
  const auto v = sgraph_char_value(spec, 0.3, 5);
  // members 1, 3, 5, ...: sigma = x / (1 - x^2)
  const double exact = 1 - 0.3 - 0.3 * (0.3 / (1 - 0.09));
  CHECK(std::abs(v.value - exact) <= v.tail + 1e-15);
  CHECK(v.tail > 0);
}

TEST_CASE("sofic chain is monotone and stays below the root") {
  for (const auto& G : {three_mme(), dyck_g1(), sgap(GapSet::progression(0, 1))}) {
    const auto star = solve_entropy(G).lambda_star;
    const auto chain = sofic_by_length(G, 24);
    for (std::size_t i = 1; i < chain.size(); ++i) CHECK(chain[i].lambda >= chain[i - 1].lambda);
    for (const auto& s : chain) CHECK(s.lambda <= star + 1e-12);
  }
  const auto steps = sofic_approx_entropies(explicit_set({"01"}), 1);
  REQUIRE(steps.size() == 1);
  CHECK(steps[0].lambda == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sofic steps by generator count") {
  const auto G = sgap(GapSet::progression(0, 1));
  const auto steps = sofic_approx_entropies(G, 6);
  REQUIRE(steps.size() == 6);
  // {0}, {0, 01}, {0, 01, 011}: roots of sum_{s < m} x^{s+1} = 1
  CHECK(steps[0].lambda == doctest::Approx(1.0));
  CHECK(steps[1].lambda == doctest::Approx(kGolden).epsilon(1e-12));
  for (std::size_t i = 1; i < steps.size(); ++i) CHECK(steps[i].lambda >= steps[i - 1].lambda);
}

TEST_CASE("prefix root kernels agree") {
  std::vector<long double> coeff;
  for (int n = 1; n <= 60; ++n) coeff.push_back(static_cast<long double>(three_mme().count(n)));
  const auto a = kernels::prefix_roots_serial(coeff, 1e-13);
  const auto b = kernels::prefix_roots_omp(coeff, 1e-13);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].status == b[i].status);
    CHECK((a[i].lambda == b[i].lambda || (std::isnan(a[i].lambda) && std::isnan(b[i].lambda))));
  }
}

TEST_CASE("growth of the length spectrum") {
  const auto d = genset_entropy(dyck(), 400);
  CHECK(std::abs(d.slope_estimate - 1.5 * std::log(2.0)) < 1e-2);
  REQUIRE(d.closed_form);
  CHECK(*d.closed_form == doctest::Approx(1.5 * std::log(2.0)));
  // the ratio (log c(n))/n carries a -(3/4) log(n)/n correction at this depth
  CHECK(d.ratio_estimate < 1.5 * std::log(2.0));
  CHECK(d.ratio_estimate > 1.5 * std::log(2.0) - 0.03);

  CHECK(genset_entropy(explicit_set({"0", "01"}), 50).ratio_estimate == 0);
  const auto beta = beta_generators(2.5, 64).second;
  CHECK(std::abs(genset_entropy(beta, 200).slope_estimate) < 1e-2);
  CHECK(std::abs(genset_entropy(beta, 200).ratio_estimate) < 1e-2);
}
