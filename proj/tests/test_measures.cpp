#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "cst/families.hpp"
#include "cst/measures.hpp"
#include "cst/sampler.hpp"
#include "support.hpp"

using namespace cst;
using oracle::digits;

namespace {

GeneratingSet explicit_set(std::initializer_list<const char*> words) {
  std::vector<Word> ws;
  for (const char* w : words) ws.push_back(digits(w));
  return GeneratingSet::from_words(Alphabet::digits(2), ws);
}

GBernoulliMeasure mme_of(const GeneratingSet& G) { return mme(G, solve_entropy(G)); }

}  // namespace

TEST_CASE("normalizers") {
  const auto t = mme_of(three_mme());
  CHECK(std::abs(t.c - 6) < 1e-9);
  CHECK(std::abs(g_cylinder(t, {}) - 1.0 / 6) < 1e-9);

  const auto d = mme_of(dyck_g1());
  CHECK(std::abs(d.c - 2) < 1e-8);
  CHECK(std::abs(g_cylinder(d, {dyck_alphabet().parse("()")}) - 1.0 / 18) < 1e-9);

  const auto b = mme_of(beta_generators(2.5, 64).second);
  CHECK(std::isfinite(b.c));
  double direct = 0;
  for (int n = 1; n <= 200; ++n) direct += n * static_cast<double>(b.G.count(n)) * std::pow(2.5, -n);
  CHECK(std::abs(b.c - direct) <= b.c_tail + 1e-12);
  CHECK(std::abs(b.mass - 1) <= b.mass_tail + 1e-8);
}

TEST_CASE("summing one-block G-cylinders gives 1/c") {
  const auto G = explicit_set({"0", "01", "011", "10"});
  const auto mu = mme_of(G);
  double s = 0;
  for (const auto& g : G.truncation(3)) s += g_cylinder(mu, {g});
  CHECK(s == doctest::Approx(1 / mu.c).epsilon(1e-12));
  CHECK_THROWS(g_cylinder(mu, {digits("11")}));
}

TEST_CASE("G-cylinder product law") {
  const auto mu = mme_of(three_mme());
  const auto& G = mu.G;
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Word> a, b;
    for (int i = 0, n = static_cast<int>(rng() % 4); i < n; ++i) a.push_back(G.source().sample(3 * (1 + rng() % 3), rng));
    for (int i = 0, n = static_cast<int>(rng() % 4); i < n; ++i) b.push_back(G.source().sample(3 * (1 + rng() % 3), rng));
    auto ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    CHECK(g_cylinder(mu, ab) * mu.c == doctest::Approx(g_cylinder(mu, a) * mu.c * g_cylinder(mu, b) * mu.c).epsilon(1e-12));
  }
}

TEST_CASE("custom measures") {
  const auto G = explicit_set({"0", "01", "10"});
  const auto mu = custom_measure(G, {{digits("0"), 0.5}, {digits("01"), 0.5}});
  CHECK(mu.c == doctest::Approx(1.5));
  CHECK(mu.p(digits("10")) == 0);
  CHECK_THROWS(custom_measure(G, {{digits("0"), 0.5}, {digits("01"), 0.4}}));
  CHECK_THROWS(custom_measure(G, {{digits("11"), 1.0}}));
}

TEST_CASE("word cylinders on the full 2-shift") {
  const auto mu = mme_of(explicit_set({"0", "1"}));
  CHECK(mu.c == doctest::Approx(1.0));
  const auto e = word_cylinder(mu, digits("01"), 8);
  CHECK(std::abs(e.value - 0.25) < 1e-11);
  CHECK(e.tail_error == 0);
  CHECK(e.sequential_only);
}

TEST_CASE("word cylinders need a verified representation") {
  const auto mu = custom_measure(explicit_set({"0", "00"}), {{digits("0"), 1.0}});
  CHECK_THROWS(word_cylinder(mu, digits("0"), 4));
}

TEST_CASE("nongibbs cylinders follow the closed form") {
  const auto G = nongibbs(2);
  const auto sol = solve_entropy(G);
  const auto mu = mme(G, sol);
  const double h = sol.h_top;
  for (int i = 1; i <= 4; ++i) {
    const int ni = i * i;
    const Word w = Word(ni + 1, 0) + Word(ni + 1, 1);
    double expect = 0;
    for (int j = i + 1; j <= 60; ++j) expect += std::exp(-2.0 * j * j * h);
    expect /= mu.c;
    const auto e = word_cylinder(mu, w, 2 * 36);
    CAPTURE(i);
    CHECK(std::abs(e.value - expect) <= e.tail_error + 1e-12 * expect + 1e-300);
  }
}

TEST_CASE("measure entropy") {
  const auto t = measure_entropy(mme_of(three_mme()));
  CHECK(std::abs(t.induced - 6 * std::log(2.0)) < 1e-8);
  CHECK(std::abs(t.h - std::log(2.0)) < 1e-9);

  CHECK(std::abs(measure_entropy(mme_of(explicit_set({"0", "1"}))).h - std::log(2.0)) < 1e-12);
  CHECK(std::abs(measure_entropy(mme_of(dyck_g1())).h - std::log(3.0)) < 1e-8);
}

TEST_CASE("entropy of the maximal measure equals the solved entropy") {
  std::vector<GeneratingSet> families{three_mme(), dyck_g1(), dyck_g2(), sgap(GapSet::finite({0, 1})),
                                      sgap(GapSet::progression(0, 1)), beta_generators(2.5, 64).second,
                                      nongibbs(2), multigap({GapSet::finite({1, 2}), GapSet::progression(0, 2)})};
  for (const auto& G : families) {
    CAPTURE(G.name());
    const auto sol = solve_entropy(G);
    REQUIRE(sol.status == SolveStatus::ok);
    CHECK(std::abs(measure_entropy(mme(G, sol)).h - sol.h_top) < 1e-9);
  }
}

TEST_CASE("partition identity") {
  for (const auto& G : {three_mme(), dyck_g1(), sgap(GapSet::progression(0, 1))}) {
    const auto mu = mme_of(G);
    const auto s = partition_sum(mu, 300);
    CHECK(std::abs(s.value - 1) <= s.tail + 1e-9);
  }
}

TEST_CASE("cylinder tails shrink with the cap") {
  const auto mu = mme_of(dyck_g1());
  const auto a = dyck_alphabet();
  for (const char* s : {"(", "()", ")(", "[(])"}) {
    double prev = INFINITY;
    for (int L = 8; L <= 256; L *= 2) {
      const auto e = word_cylinder(mu, a.parse(s), L);
      CHECK(e.tail_error <= prev);
      prev = e.tail_error;
    }
  }
}

TEST_CASE("cylinder values are consistent under extension") {
  const auto mu = mme_of(dyck_g1());
  const int L = default_cutoff(mu);
  const int k = static_cast<int>(mu.G.alphabet().size());
  for (int n = 0; n <= 3; ++n)
    oracle::for_each_word(k, n, [&](const Word& w) {
      const auto base = word_cylinder(mu, w, L);
      double sum = 0, tails = base.tail_error;
      for (int a = 0; a < k; ++a) {
        const auto e = word_cylinder(mu, w + static_cast<char>(a), L);
        sum += e.value;
        tails += e.tail_error;
      }
      CHECK(std::abs(sum - base.value) <= tails + 1e-12);
    });
  const auto mu3 = mme_of(sgap(GapSet::finite({0, 1, 3})));
  for (int n = 0; n <= 6; ++n)
    oracle::for_each_word(2, n, [&](const Word& w) {
      const auto base = word_cylinder(mu3, w, 16);
      const auto e0 = word_cylinder(mu3, w + '\0', 16);
      const auto e1 = word_cylinder(mu3, w + '\1', 16);
      CHECK(std::abs(e0.value + e1.value - base.value) <= base.tail_error + e0.tail_error + e1.tail_error + 1e-12);
    });
}

TEST_CASE("Gibbs scans") {
  const auto full = mme_of(explicit_set({"0", "1"}));
  std::vector<Word> words;
  for (int n = 1; n <= 6; ++n) oracle::for_each_word(2, n, [&](const Word& w) { words.push_back(w); });
  const auto r = gibbs_scan(full, words, std::log(2.0), 8);
  for (double v : r.ratios) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.inf_ratio == doctest::Approx(1.0));
  CHECK(r.sup_ratio == doctest::Approx(1.0));

  const auto G = nongibbs(2);
  const auto sol = solve_entropy(G);
  const auto mu = mme(G, sol);
  std::vector<Word> ws;
  for (int i = 1; i <= 6; ++i) ws.push_back(Word(i * i + 1, 0) + Word(i * i + 1, 1));
  const auto ng = gibbs_scan(mu, ws, sol.h_top, 2 * 49);
  for (std::size_t i = 1; i < ng.ratios.size(); ++i) CHECK(ng.ratios[i] < ng.ratios[i - 1]);

  const auto t = mme_of(three_mme());
  WindowSampler sampler(t);
  auto rng = make_stream(8);
  std::vector<Word> adm;
  for (int i = 0; i < 20; ++i) adm.push_back(sampler.sample(3 + i % 7, rng).word);
  const auto tr = gibbs_scan(t, adm, std::log(2.0), 60);
  CHECK(tr.inf_ratio > 0);
  CHECK(std::isfinite(tr.sup_ratio));
}
