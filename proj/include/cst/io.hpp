#pragma once

// JSON input and output: generating-set files and a fixed number format.

#include <stdexcept>
#include <string>

#include "json.hpp"

#include "cst/genset.hpp"

namespace cst {

/// Input problems: missing files, malformed JSON, bad or missing fields.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json load_json(const std::string& path);

/// {"alphabet": "01" | [...], "kind": "explicit", "words": [...]}
/// {"kind": "family", "family": {"name": ..., "params": {...}}}
GeneratingSet genset_from_json(const nlohmann::json& j);
GeneratingSet load_genset(const std::string& path);
/// Explicit sets list their words; families give name, tail bound and certificate.
nlohmann::json genset_to_json(const GeneratingSet& G);

Alphabet alphabet_from_json(const nlohmann::json& j);
nlohmann::json alphabet_to_json(const Alphabet& a);

/// Serializes with every floating value printed as %.17g; NaN and infinities become null.
std::string dump(const nlohmann::json& j, int indent = 2);

}  // namespace cst
