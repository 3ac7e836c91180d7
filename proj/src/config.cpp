#include "gm/config.hpp"

#include <fstream>
#include <sstream>

#include "gm/error.hpp"

namespace gm {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::parse_error, what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::string str(const json& j, const char* what) {
  if (!j.is_string()) bad(std::string(what) + " must be a string");
  return j.get<std::string>();
}

FinSet string_set(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) bad(std::string(what) + " must be a nonempty array of strings");
  std::vector<std::string> atoms;
  for (const auto& a : j) atoms.push_back(str(a, what));
  try {
    return FinSet(std::move(atoms));
  } catch (const Error& e) {
    bad(std::string(what) + ": " + e.what());
  }
}

Monoid parse_monoid(const json& j) {
  if (j.contains("cyclic")) {
    const auto& n = j.at("cyclic");
    if (!n.is_number_unsigned() || n.get<std::size_t>() == 0) bad("cyclic order must be a positive integer");
    return Monoid::cyclic(n.get<std::size_t>());
  }
  FinSet elems = string_set(field(j, "elements"), "monoid elements");
  std::string unit = str(field(j, "unit"), "monoid unit");
  if (!elems.contains(unit)) bad("monoid unit " + unit + " is not an element");
  const json& table = field(j, "table");
  if (!table.is_object()) bad("monoid table must be an object of objects");
  const std::size_t n = elems.size();
  std::vector<std::size_t> t(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    if (!table.contains(elems[a])) bad("monoid table lacks row " + elems[a]);
    const json& row = table.at(elems[a]);
    for (std::size_t b = 0; b < n; ++b) {
      if (!row.is_object() || !row.contains(elems[b])) bad("monoid table lacks entry " + elems[a] + "·" + elems[b]);
      std::string c = str(row.at(elems[b]), "monoid table entry");
      auto idx = elems.find(c);
      if (!idx) bad("monoid table entry " + c + " is not an element");
      t[a * n + b] = *idx;
    }
  }
  return Monoid(std::move(elems), unit, std::move(t));
}

}  // namespace

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::exception& e) {
    bad(path + ": " + e.what());
  }
}

MonadConfig parse_monad_config(const json& j) {
  if (!j.is_object()) bad("configuration must be a JSON object");
  const std::string kind = str(field(j, "monad"), "monad");
  std::optional<std::size_t> max_grades;
  if (j.contains("max_grades")) {
    const auto& v = j.at("max_grades");
    if (!v.is_number_unsigned() || v.get<std::size_t>() == 0) bad("max_grades must be a positive integer");
    max_grades = v.get<std::size_t>();
  }
  if (kind == "writer") return {MonadInstance::writer(parse_monoid(field(j, "monoid"))), false, max_grades};
  if (kind == "reader") return {MonadInstance::reader(string_set(field(j, "states"), "states")), false, max_grades};
  if (kind == "state") {
    FinSet states = string_set(field(j, "states"), "states");
    std::string grading = j.contains("grading") ? str(j.at("grading"), "grading") : "componentwise";
    GradeKind g;
    if (grading == "componentwise")
      g = GradeKind::state_componentwise;
    else if (grading == "shapewise")
      g = GradeKind::state_shapewise;
    else
      bad("unknown state grading " + grading);
    bool getput = false;
    if (j.contains("getput")) {
      if (!j.at("getput").is_boolean()) bad("getput must be a boolean");
      getput = j.at("getput").get<bool>();
    }
    if (getput && g != GradeKind::state_componentwise) bad("the {get,put} grading needs the componentwise grading");
    return {MonadInstance::state(std::move(states), g), getput, max_grades};
  }
  if (kind == "list") {
    std::size_t bound = 6;
    if (j.contains("bound")) {
      const auto& b = j.at("bound");
      if (!b.is_number_unsigned() || b.get<std::size_t>() == 0) bad("list bound must be a positive integer");
      bound = b.get<std::size_t>();
    }
    return {MonadInstance::list(bound), false, max_grades};
  }
  bad("unknown monad " + kind);
}

OpConfig parse_op_config(const json& j, const GradeOps& ops) {
  if (!j.is_object()) bad("operation must be a JSON object");
  const auto& m = ops.monad();
  const std::string kind = str(field(j, "op"), "op");
  AlgebraicOp op;
  try {
    if (kind == "writer-act") {
      if (m.kind() != MonadKind::writer) bad("writer-act needs a writer monad");
      auto z = m.monoid().elements().find(str(field(j, "z"), "z"));
      if (!z) bad("z is not a monoid element");
      op = writer_act(m, *z);
    } else if (kind == "concat") {
      if (m.kind() != MonadKind::list) bad("concat needs the list monad");
      op = list_concat(m);
    } else if (kind == "empty") {
      if (m.kind() != MonadKind::list) bad("empty needs the list monad");
      op = list_empty();
    } else if (kind == "identity") {
      op = identity_op();
    } else if (kind == "custom") {
      const auto& arity = field(j, "arity");
      if (!arity.is_number_unsigned()) bad("arity must be a nonnegative integer");
      const auto& table = field(j, "table");
      if (!table.is_object()) bad("custom table must be an object");
      std::map<std::string, std::string> t;
      for (auto it = table.begin(); it != table.end(); ++it) t[it.key()] = str(it.value(), "custom table entry");
      std::string name = j.contains("name") ? str(j.at("name"), "name") : "custom";
      op = custom_op(m, name, arity.get<std::size_t>(), std::move(t));
    } else {
      bad("unknown op " + kind);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::parse_error) throw;
    bad(e.what());
  }
  OpConfig out{op, {}};
  const json empty = json::array();
  const json& inputs = j.contains("inputs") ? j.at("inputs") : empty;
  if (!inputs.is_array()) bad("inputs must be an array of grades");
  for (const auto& g : inputs) {
    try {
      json grade = g;
      if (grade.is_object() && !grade.contains("kind")) grade["kind"] = std::string(to_string(ops.kind()));
      out.inputs.push_back(ops.from_json(grade));
    } catch (const Error& e) {
      bad(std::string("input grade: ") + e.what());
    } catch (const json::exception& e) {
      bad(std::string("input grade: ") + e.what());
    }
  }
  if (out.inputs.size() != op.arity)
    bad(op.name + " has arity " + std::to_string(op.arity) + " but " + std::to_string(out.inputs.size()) +
        " input grades were given");
  return out;
}

}  // namespace gm
