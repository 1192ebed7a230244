#include "cst/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cst/families.hpp"

namespace cst {

using nlohmann::json;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

Alphabet alphabet_from_json(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s.empty()) throw InputError("field 'alphabet' is empty");
    return Alphabet::from_chars(s);
  }
  if (j.is_array()) {
    std::vector<std::string> symbols;
    for (const auto& t : j) {
      if (!t.is_string()) throw InputError("field 'alphabet' must contain strings");
      symbols.push_back(t.get<std::string>());
    }
    if (symbols.empty()) throw InputError("field 'alphabet' is empty");
    return Alphabet(symbols);
  }
  throw InputError("field 'alphabet' must be a string or an array of strings");
}

json alphabet_to_json(const Alphabet& a) {
  if (a.single_char()) {
    std::string s;
    for (const auto& t : a.symbols()) s += t;
    return s;
  }
  return a.symbols();
}

GeneratingSet genset_from_json(const json& j) {
  if (!j.is_object()) throw InputError("generating set must be a JSON object");
  const std::string kind = j.value("kind", j.contains("family") ? "family" : "explicit");
  if (kind == "family") {
    if (!j.contains("family") || !j.at("family").is_object()) throw InputError("field 'family' is required");
    const auto& f = j.at("family");
    if (!f.contains("name") || !f.at("name").is_string()) throw InputError("field 'family.name' is required");
    try {
      auto G = preset(f.at("name").get<std::string>(), f.value("params", json::object()));
      if (j.contains("alphabet") && !(alphabet_from_json(j.at("alphabet")) == G.alphabet()))
        throw InputError("field 'alphabet' does not match the family alphabet");
      return G;
    } catch (const json::exception& e) {
      throw InputError(std::string("field 'family.params': ") + e.what());
    }
  }
  if (kind != "explicit") throw InputError("field 'kind' must be 'explicit' or 'family'");
  if (!j.contains("alphabet")) throw InputError("field 'alphabet' is required");
  if (!j.contains("words") || !j.at("words").is_array()) throw InputError("field 'words' must be an array");
  const Alphabet a = alphabet_from_json(j.at("alphabet"));
  std::vector<Word> words;
  for (const auto& w : j.at("words")) {
    if (!w.is_string()) throw InputError("field 'words' must contain strings");
    try {
      words.push_back(a.parse(w.get<std::string>()));
    } catch (const std::exception& e) {
      throw InputError("field 'words': " + std::string(e.what()));
    }
  }
  try {
    auto G = GeneratingSet::from_words(a, words);
    if (j.contains("certificate")) G.set_certificate(j.at("certificate").get<std::string>());
    return G;
  } catch (const std::invalid_argument& e) {
    throw InputError("field 'words': " + std::string(e.what()));
  }
}

GeneratingSet load_genset(const std::string& path) {
  const auto j = load_json(path);
  try {
    return genset_from_json(j);
  } catch (const InputError& e) {
    throw InputError("'" + path + "': " + e.what());
  }
}

json genset_to_json(const GeneratingSet& G) {
  json j;
  j["alphabet"] = alphabet_to_json(G.alphabet());
  if (G.kind() == GenSetKind::Explicit) {
    j["kind"] = "explicit";
    json words = json::array();
    for (const auto& w : G.truncation(*G.max_length())) words.push_back(G.alphabet().format(w));
    j["words"] = words;
  } else {
    j["kind"] = "family";
    j["family"] = {{"name", G.name()}};
    j["tail"] = {{"C", G.tail().C}, {"rho", G.tail().rho}, {"N0", G.tail().N0}};
  }
  if (!G.certificate().empty()) j["certificate"] = G.certificate();
  return j;
}

namespace {

void write(std::ostringstream& out, const json& j, int indent, int level) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent) * (level + 1), ' ') : "";
  const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent) * level, ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  const char* sep = indent > 0 ? ": " : ":";
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << '{' << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out << ',' << nl;
        first = false;
        out << pad << json(it.key()).dump() << sep;
        write(out, it.value(), indent, level + 1);
      }
      out << nl << close_pad << '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      out << '[' << nl;
      bool first = true;
      for (const auto& v : j) {
        if (!first) out << ',' << nl;
        first = false;
        out << pad;
        write(out, v, indent, level + 1);
      }
      out << nl << close_pad << ']';
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out << "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      std::string s = buf;
      if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
      out << s;
      return;
    }
    default:
      out << j.dump();
  }
}

}  // namespace

std::string dump(const json& j, int indent) {
  std::ostringstream out;
  write(out, j, indent, 0);
  return out.str();
}

}  // namespace cst
