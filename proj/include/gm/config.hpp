#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gm/algebraic.hpp"
#include "gm/monad.hpp"
#include "gm/subfunctor.hpp"

namespace gm {

/// A parsed monad configuration.
///   {"monad":"writer","monoid":{"elements":[..],"unit":"e","table":{"a":{"b":"c"}}}}
///   {"monad":"writer","monoid":{"cyclic":2}}
///   {"monad":"reader","states":[..]}
///   {"monad":"state","states":[..],"grading":"componentwise"|"shapewise","getput":true}
///   {"monad":"list","bound":6}
/// An optional "max_grades" caps grade enumeration.
struct MonadConfig {
  MonadInstance monad;
  bool getput = false;
  std::optional<std::size_t> max_grades;
};

/// Reads and parses a JSON file; throws parse_error.
nlohmann::json load_json_file(const std::string& path);

/// Throws parse_error on malformed or inconsistent configurations.
MonadConfig parse_monad_config(const nlohmann::json& j);

/// An operation together with its input grades.
///   {"op":"writer-act","z":"1","inputs":[grade]}
///   {"op":"concat","inputs":[grade, grade]}
///   {"op":"empty","inputs":[]}
///   {"op":"identity","inputs":[grade]}
///   {"op":"custom","name":"f","arity":1,"table":{"args;..":"result"},"inputs":[..]}
/// Grades use the GradeOps JSON form; "kind" may be omitted.
struct OpConfig {
  AlgebraicOp op;
  std::vector<GradeObject> inputs;
};

/// Throws parse_error for an invalid op description.
OpConfig parse_op_config(const nlohmann::json& j, const GradeOps& ops);

}  // namespace gm
