#pragma once

#include <memory>
#include <string>

#include "json.hpp"
#include "superdelta/superalgebra.hpp"

namespace superdelta {

using Json = nlohmann::ordered_json;

Json algebra_to_json(const SuperAlgebra& a);
SuperAlgebra algebra_from_json(const Json& j);

void save_algebra(const SuperAlgebra& a, const std::string& path);
SuperAlgebra load_algebra(const std::string& path);

/// A bracket together with the algebra it references; the shared_ptr keeps
/// the base algebra alive for the bracket's lifetime.
struct BracketBundle {
  std::shared_ptr<SuperAlgebra> gamma;
  Bracket bracket;
};

Json bracket_to_json(const Bracket& br, const std::string& over_path);
Json bracket_to_json_inline(const Bracket& br);

/// Loads a bracket file; "over" may be a path (resolved relative to the
/// bracket file) or an inline algebra object. Super-skewness is checked by
/// the consumers, not here, so broken brackets can still be diagnosed.
BracketBundle load_bracket(const std::string& path);

void save_bracket(const Bracket& br, const std::string& path,
                  const std::string& over_path);

}  // namespace superdelta
