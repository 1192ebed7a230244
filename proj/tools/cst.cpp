// cst: command-line front end. One JSON document on stdout per run.

#include <cmath>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cst/constructions.hpp"
#include "cst/entropy.hpp"
#include "cst/families.hpp"
#include "cst/io.hpp"
#include "cst/measures.hpp"
#include "cst/sampler.hpp"
#include "cst/sofic.hpp"

using nlohmann::json;
using namespace cst;

namespace {

struct SourceOpts {
  std::string genset, family, params;
};

void add_source(CLI::App* cmd, SourceOpts& s) {
  auto* g = cmd->add_option("--genset", s.genset, "generating-set JSON file");
  auto* f = cmd->add_option("--family", s.family, "built-in family name");
  g->excludes(f);
  cmd->add_option("--params", s.params, "family parameters as a JSON object");
}

GeneratingSet load_source(const SourceOpts& s) {
  if (!s.genset.empty()) return load_genset(s.genset);
  if (s.family.empty()) throw InputError("one of --genset or --family is required");
  json p = json::object();
  if (!s.params.empty()) {
    try {
      p = json::parse(s.params);
    } catch (const json::parse_error& e) {
      throw InputError(std::string("--params is not valid JSON: ") + e.what());
    }
  }
  try {
    return preset(s.family, p);
  } catch (const json::exception& e) {
    throw InputError(std::string("--params: ") + e.what());
  }
}

json solution_json(const CharacteristicSolution& s) {
  return {{"status", to_string(s.status)}, {"lambda_star", s.lambda_star}, {"h_top", s.h_top},
          {"bracket", {s.lo, s.hi}},       {"depth", s.depth},             {"residual", s.residual},
          {"tol", s.tol},                  {"iterations", s.iterations},   {"note", s.note}};
}

std::vector<Word> words_up_to(const Alphabet& a, int len, std::size_t budget) {
  std::vector<Word> out, layer{Word()};
  for (int n = 1; n <= len; ++n) {
    std::vector<Word> next;
    for (const auto& w : layer)
      for (std::size_t s = 0; s < a.size(); ++s) next.push_back(w + static_cast<char>(s));
    if (out.size() + next.size() > budget) throw InputError("--len: too many words to scan");
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

std::vector<Word> first_generators(const GeneratingSet& G, long long m) {
  std::vector<Word> out;
  for (int n = 1; static_cast<long long>(out.size()) < m; ++n) {
    if (auto ml = G.max_length(); ml && n > *ml) break;
    if (n > 4096) throw InputError("--m: generators too sparse");
    for (const auto& g : G.enumerate(n)) {
      if (static_cast<long long>(out.size()) == m) break;
      out.push_back(g);
    }
  }
  return out;
}

std::string big(const BigCount& v) { return v.str(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coded shift toolkit"};
  app.require_subcommand(1);
  std::vector<std::string> diagnostics;
  std::function<json()> run;

  double tol = 1e-12;
  SourceOpts src;

  auto* entropy = app.add_subcommand("entropy", "solve the characteristic equation");
  add_source(entropy, src);
  entropy->add_option("--tol", tol);
  entropy->callback([&] {
    run = [&] {
      auto G = load_source(src);
      auto s = solve_entropy(G, tol);
      json j = solution_json(s);
      j["genset"] = G.name();
      return j;
    };
  });

  double offset = 0, slope = 0;
  std::optional<double> t_param;
  auto* pressure = app.add_subcommand("pressure", "pressure of Phi(g) = offset + slope |g|");
  add_source(pressure, src);
  pressure->add_option("--tol", tol);
  pressure->add_option("--offset", offset);
  pressure->add_option("--slope", slope);
  pressure->add_option("--t", t_param, "Phi(g) = -t |g|");
  pressure->callback([&] {
    run = [&] {
      auto G = load_source(src);
      WeightedPotential phi;
      phi.offset = offset;
      phi.slope = t_param ? -*t_param : slope;
      auto s = solve_pressure(G, phi, tol);
      json j = solution_json(s);
      j["pressure"] = s.h_top;
      j["potential"] = {{"offset", phi.offset}, {"slope", phi.slope}};
      j["genset"] = G.name();
      return j;
    };
  });

  auto* mme_cmd = app.add_subcommand("mme", "measure of maximal entropy");
  add_source(mme_cmd, src);
  mme_cmd->add_option("--tol", tol);
  mme_cmd->callback([&] {
    run = [&] {
      auto G = load_source(src);
      auto s = solve_entropy(G, tol);
      auto mu = mme(G, s);
      auto e = measure_entropy(mu);
      return json{{"genset", G.name()},       {"lambda_star", mu.lambda},   {"h_top", s.h_top},
                  {"c", mu.c},                {"c_tail", mu.c_tail},        {"mu_E", 1.0 / mu.c},
                  {"mass", mu.mass},          {"mass_tail", mu.mass_tail},  {"induced_entropy", e.induced},
                  {"h", e.h},                 {"entropy_tail", e.tail},     {"depth", mu.depth},
                  {"tol", tol}};
    };
  });

  std::vector<std::string> words;
  std::string gens;
  int cap = 0;
  auto* cylinder = app.add_subcommand("cylinder", "mass of [w] or of a G-cylinder under the MME");
  add_source(cylinder, src);
  cylinder->add_option("--word", words, "word w");
  cylinder->add_option("--gens", gens, "comma-separated generators for a G-cylinder");
  cylinder->add_option("--cap", cap, "generator-length cap (0 = automatic)");
  cylinder->add_option("--tol", tol);
  cylinder->callback([&] {
    run = [&] {
      auto G = load_source(src);
      auto mu = mme(G, solve_entropy(G, tol));
      json j{{"genset", G.name()}, {"lambda_star", mu.lambda}, {"c", mu.c}};
      const bool want_g = cylinder->count("--gens") > 0;
      if (want_g) {
        std::vector<Word> gs;
        std::stringstream ss(gens);
        for (std::string tok; std::getline(ss, tok, ',');) gs.push_back(G.alphabet().parse(tok));
        j["g_cylinder"] = g_cylinder(mu, gs);
      }
      if (words.size() > 1) throw InputError("--word: give one word");
      if (!words.empty()) {
        const int L = cap > 0 ? cap : default_cutoff(mu);
        auto est = word_cylinder(mu, G.alphabet().parse(words[0]), L);
        j["word"] = words[0];
        j["value"] = est.value;
        j["tail_error"] = est.tail_error;
        j["cutoff"] = est.cutoff;
        j["covers_enumerated"] = est.covers_enumerated;
        j["sequential_only"] = est.sequential_only;
      }
      if (!want_g && words.empty()) throw InputError("one of --word or --gens is required");
      return j;
    };
  });

  int len = 0;
  std::optional<double> h_param;
  auto* gibbs = app.add_subcommand("gibbs", "ratios mu([w]) e^{|w| h}");
  add_source(gibbs, src);
  gibbs->add_option("--word", words, "words to scan (repeatable)");
  gibbs->add_option("--len", len, "scan every word up to this length with positive mass");
  gibbs->add_option("--entropy", h_param, "entropy constant (default h_top)");
  gibbs->add_option("--cap", cap);
  gibbs->add_option("--tol", tol);
  gibbs->callback([&] {
    run = [&] {
      auto G = load_source(src);
      auto s = solve_entropy(G, tol);
      auto mu = mme(G, s);
      const int L = cap > 0 ? cap : default_cutoff(mu);
      std::vector<Word> scan;
      for (const auto& w : words) scan.push_back(G.alphabet().parse(w));
      if (len > 0)
        for (const auto& w : words_up_to(G.alphabet(), len, 20000))
          if (word_cylinder(mu, w, L).value > 0) scan.push_back(w);
      const double h = h_param ? *h_param : s.h_top;
      auto rep = gibbs_scan(mu, scan, h, L);
      json ratios = json::array();
      for (std::size_t i = 0; i < rep.words.size(); ++i)
        ratios.push_back({{"word", G.alphabet().format(rep.words[i])}, {"ratio", rep.ratios[i]},
                          {"tail_error", rep.tail_errors[i]}});
      return json{{"genset", G.name()}, {"h", h},         {"cutoff", L},
                  {"ratios", ratios},   {"inf_ratio", rep.inf_ratio}, {"sup_ratio", rep.sup_ratio}};
    };
  });

  std::uint64_t seed = 0;
  long long count = 1;
  int block_n = 0;
  auto* sample = app.add_subcommand("sample", "stationary windows from the MME");
  add_source(sample, src);
  sample->add_option("--len", len, "window length");
  sample->add_option("--seed", seed);
  sample->add_option("--count", count, "number of windows or block samples");
  sample->add_option("--block-n", block_n, "count n-blocks at coordinate 0 instead of printing windows");
  sample->add_option("--tol", tol);
  sample->callback([&] {
    run = [&] {
      auto G = load_source(src);
      auto mu = mme(G, solve_entropy(G, tol));
      if (count < 1) throw InputError("--count must be >= 1");
      if (block_n > 0) {
        auto bc = block_counts(mu, block_n, count, seed);
        json counts = json::object();
        for (const auto& [w, k] : bc.counts) counts[G.alphabet().format(w)] = k;
        return json{{"genset", G.name()},         {"seed", seed},    {"n", bc.n},
                    {"samples", bc.samples},      {"cap", bc.cap},   {"counts", counts},
                    {"plugin_entropy", plugin_entropy(bc)}};
      }
      if (len < 1) throw InputError("--len must be >= 1");
      if (count > 100000) throw InputError("--count: at most 100000 windows are printed");
      WindowSampler sampler(mu);
      auto rng = make_stream(seed, 0);
      json windows = json::array();
      for (long long i = 0; i < count; ++i) {
        auto s = sampler.sample(len, rng);
        windows.push_back({{"word", G.alphabet().format(s.word)},
                           {"origin_block", G.alphabet().format(s.origin_block)},
                           {"offset", s.offset}});
      }
      return json{{"genset", G.name()}, {"seed", seed}, {"len", len}, {"cap", sampler.cap()},
                  {"shortfall", sampler.shortfall()}, {"windows", windows}};
    };
  });

  int max_gen_len = 12;
  int horizon = 0;
  auto* ud = app.add_subcommand("ud-check", "unique decipherability of the truncated set");
  add_source(ud, src);
  ud->add_option("--max-gen-len", max_gen_len);
  ud->add_option("--horizon", horizon, "also report the family certificate for this horizon");
  ud->callback([&] {
    run = [&] {
      auto G = load_source(src);
      auto v = sardinas_patterson(G, max_gen_len);
      auto fmt = [&](const std::vector<Word>& p) {
        json a = json::array();
        for (const auto& g : p) a.push_back(G.alphabet().format(g));
        return a;
      };
      json j{{"genset", G.name()},
             {"decipherable", v.decipherable},
             {"max_gen_len", v.max_gen_len},
             {"code_size", v.code_size},
             {"certificate", G.certificate()}};
      j["witness"] = v.witness ? json(G.alphabet().format(*v.witness)) : json(nullptr);
      j["parse_a"] = fmt(v.parse_a);
      j["parse_b"] = fmt(v.parse_b);
      if (horizon > 0) j["horizon"] = horizon;
      return j;
    };
  });

  bool list = false;
  int n_terms = 20, list_depth = 0;
  auto* family = app.add_subcommand("family", "describe a generating set");
  add_source(family, src);
  family->add_flag("--list", list, "list built-in families");
  family->add_option("--n", n_terms, "number of spectrum terms");
  family->add_option("--depth", list_depth, "list the generators of length <= depth");
  family->callback([&] {
    run = [&] {
      if (list) return json{{"families", preset_names()}};
      auto G = load_source(src);
      json counts = json::array();
      for (int n = 1; n <= n_terms; ++n) counts.push_back(static_cast<double>(G.count(n)));
      auto ge = genset_entropy(G, n_terms);
      json j = genset_to_json(G);
      j["name"] = G.name();
      j["finite"] = G.finite();
      j["tail"] = {{"C", G.tail().C}, {"rho", G.tail().rho}, {"N0", G.tail().N0}};
      j["counts"] = counts;
      j["entropy_ratio_estimate"] = ge.ratio_estimate;
      j["entropy_slope_estimate"] = ge.slope_estimate;
      j["entropy_window"] = {ge.window_lo, ge.N};
      j["entropy_closed_form"] = ge.closed_form ? json(*ge.closed_form) : json(nullptr);
      if (G.kind() == GenSetKind::Family) j.erase("kind");
      if (list_depth > 0) {
        json words = json::array();
        for (const auto& g : G.truncation(list_depth, 100000)) words.push_back(G.alphabet().format(g));
        j["depth"] = list_depth;
        j["generators"] = words;
      }
      return j;
    };
  });

  std::string sft_file;
  double epsilon = 0.1, aug_epsilon = 0.05;
  int n_gen = 4, depth = 3;
  std::vector<int> m_sched;
  auto* construct = app.add_subcommand("construct", "generator constructions");
  construct->require_subcommand(1);
  auto* thm = construct->add_subcommand("theorem-a", "small sequential entropy over an SFT");
  thm->add_option("--sft", sft_file, "SFT JSON file")->required();
  thm->add_option("--epsilon", epsilon);
  thm->add_option("--n", n_gen);
  thm->callback([&] {
    run = [&] {
      auto Z = sft_from_json(load_json(sft_file));
      auto b = build_theorem_a(Z, epsilon, n_gen);
      const auto& A = Z.alphabet;
      auto list_of = [&](const std::vector<Word>& ws) {
        json a = json::array();
        for (const auto& w : ws) a.push_back(A.format(w));
        return a;
      };
      json bridges = json::array();
      for (const auto& br : b.bridges)
        bridges.push_back({{"from", A.format(br.from)}, {"to", A.format(br.to)}, {"word", A.format(br.word)}});
      json lengths = json::array();
      for (const auto& g : b.g) lengths.push_back(g.size());
      return json{{"epsilon", b.epsilon},
                  {"alphabet", alphabet_to_json(A)},
                  {"forbidden", list_of(Z.forbidden)},
                  {"a", A.format(Z.minimal_forbidden)},
                  {"k", A.token(Z.k)},
                  {"a_tail", A.format(Z.a_tail)},
                  {"p", A.format(Z.periodic)},
                  {"m", b.m},
                  {"w", list_of(b.w)},
                  {"g", list_of(b.g)},
                  {"lengths", lengths},
                  {"bridges", bridges},
                  {"certificate_sum", b.certificate_sum},
                  {"certificate_tail", b.certificate_tail},
                  {"certified", b.certified}};
    };
  });
  auto* aug = construct->add_subcommand("augment", "augment a generating set by marker words");
  add_source(aug, src);
  aug->add_option("--epsilon", aug_epsilon);
  aug->add_option("--depth", depth);
  aug->add_option("--m", m_sched, "lower bounds m_i on |w(i)|");
  aug->callback([&] {
    run = [&] {
      auto G = load_source(src);
      auto b = build_augmentation(G, aug_epsilon, depth, m_sched);
      const auto& A = G.alphabet();
      json w = json::array(), f = json::array(), flen = json::array();
      for (const auto& x : b.w) w.push_back(A.format(x));
      for (const auto& x : b.f) {
        f.push_back(A.format(x));
        flen.push_back(x.size());
      }
      return json{{"base", G.name()},          {"epsilon", b.epsilon},       {"u", A.format(b.u)},
                  {"v", A.format(b.v)},        {"marker_horizon", b.marker_horizon},
                  {"w", w},                    {"f", f},                     {"f_lengths", flen},
                  {"m", b.m},                  {"pool_len", b.pool_len},     {"lambda_base", b.lambda_base},
                  {"lambda_aug", b.lambda_aug}, {"bound", b.bound},          {"certified", b.certified},
                  {"rounds", b.rounds}};
    };
  });

  long long m_count = 8;
  int n_len = 30;
  auto* language = app.add_subcommand("language", "factor-language counts of the first m generators");
  add_source(language, src);
  language->add_option("--m", m_count);
  language->add_option("--n", n_len);
  language->callback([&] {
    run = [&] {
      auto G = load_source(src);
      auto gm = first_generators(G, m_count);
      auto A = factor_automaton(gm, static_cast<int>(G.alphabet().size()));
      auto counts = language_counts(A, n_len);
      std::vector<long double> coeff;
      for (const auto& g : gm) {
        if (coeff.size() < g.size()) coeff.resize(g.size(), 0);
        coeff[g.size() - 1] += 1;
      }
      auto root = solve_finite_series(coeff, 1e-13);
      json jc = json::array(), slopes = json::array();
      for (int n = 0; n <= n_len; ++n) {
        jc.push_back(big(counts[n]));
        if (n >= 1) slopes.push_back(log_count(counts[n]) - log_count(counts[n - 1]));
      }
      json gens_j = json::array();
      for (const auto& g : gm) gens_j.push_back(G.alphabet().format(g));
      return json{{"genset", G.name()},
                  {"m", gm.size()},
                  {"generators", gens_j},
                  {"nfa_states", A.nfa_states},
                  {"dfa_states", A.states()},
                  {"counts", jc},
                  {"slopes", slopes},
                  {"lambda_m", root.lambda},
                  {"log_lambda_m", std::log(root.lambda)}};
    };
  });

  int max_len = 0;
  auto* sofic = app.add_subcommand("sofic", "entropies of the sofic approximations");
  add_source(sofic, src);
  sofic->add_option("--m", m_count, "largest number of generators");
  sofic->add_option("--max-len", max_len, "report one step per generator length up to this value");
  sofic->add_option("--tol", tol);
  sofic->callback([&] {
    run = [&] {
      auto G = load_source(src);
      auto steps = max_len > 0 ? sofic_by_length(G, max_len, tol) : sofic_approx_entropies(G, static_cast<int>(m_count), tol);
      json out = json::array();
      for (const auto& s : steps)
        out.push_back({{"m", s.m}, {"max_len", s.max_len}, {"status", to_string(s.status)}, {"lambda", s.lambda}});
      json j{{"genset", G.name()}, {"steps", out}, {"tol", tol}};
      try {
        j["lambda_star"] = solve_entropy(G, tol).lambda_star;
      } catch (const std::exception& e) {
        diagnostics.push_back(std::string("lambda_star unavailable: ") + e.what());
      }
      return j;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  json result;
  int code = 0;
  try {
    result = {{"status", "ok"}, {"payload", run()}};
  } catch (const std::exception& e) {
    result = {{"status", "error"}, {"payload", json::object()}, {"error", e.what()}};
    diagnostics.push_back(e.what());
    std::cerr << "error: " << e.what() << "\n";
    code = 3;
  }
  result["diagnostics"] = diagnostics;
  std::cout << dump(result) << "\n";
  return code;
}
