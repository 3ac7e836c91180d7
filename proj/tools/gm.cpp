// gm: batch front end for canonical gradings of finite monads.
//
// Exit codes: 0 success, 1 law failure or mismatch, 2 configuration, parse or
// invalid-op error, 3 grade carrier over the enumeration bound, 4 operation
// refused on a skew grading.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gm/algebraic.hpp"
#include "gm/config.hpp"
#include "gm/error.hpp"
#include "gm/grade_algebra.hpp"
#include "gm/grading.hpp"
#include "gm/shape.hpp"

using namespace gm;
using nlohmann::json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_law = 1;
constexpr int exit_config = 2;
constexpr int exit_bound = 3;
constexpr int exit_skew = 4;

struct Settings {
  std::string config;
  std::uint64_t seed = 0;
};

std::size_t grade_bound(const MonadConfig& cfg) {
  if (const char* env = std::getenv("GM_MAX_GRADES")) {
    try {
      std::size_t pos = 0;
      long long v = std::stoll(env, &pos);
      if (pos != std::string(env).size() || v <= 0) throw std::invalid_argument("");
      return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      throw Error(ErrorCode::parse_error, "GM_MAX_GRADES must be a positive integer");
    }
  }
  return cfg.max_grades.value_or(BuildOptions{}.max_grades);
}

std::string count_text(double n) {
  std::ostringstream s;
  s.precision(n < 1e15 ? 0 : 3);
  s << (n < 1e15 ? std::fixed : std::scientific) << n;
  return s.str();
}

/// Builds the full grade carrier or throws bound_exceeded.
CanonicalGrading enumerated_grading(const MonadConfig& cfg) {
  BuildOptions opts;
  opts.max_grades = grade_bound(cfg);
  GradeOps ops(cfg.monad);
  if (ops.grade_count() > static_cast<double>(opts.max_grades))
    throw Error(ErrorCode::bound_exceeded, "the grade carrier has " + count_text(ops.grade_count()) +
                                               " grades, above the bound " + std::to_string(opts.max_grades));
  return CanonicalGrading::build(cfg.monad, opts);
}

void emit(std::vector<LawReport>& all, LawReport r) {
  std::cout << r.to_line() << "\n";
  all.push_back(std::move(r));
}

// ---------------------------------------------------------------- check-laws

LawReport subfunctor_bijection(const CanonicalGrading& c) {
  LawCheck law("subfunctor-bijection");
  const auto& ops = c.ops();
  for (const auto& g : c.grades()) {
    GradeObject back = ops.mkSigma(ops.mkS_family(g));
    law.expect(back == g, "grade " + ops.label(g) + " reads back as " + ops.label(back));
  }
  return law.report();
}

LawReport closed_form_agreement(const CanonicalGrading& c) {
  LawCheck law("tensor-closed-form");
  const auto& ops = c.ops();
  for (const auto& a : c.grades()) {
    for (const auto& b : c.grades()) {
      std::optional<GradeObject> sem, closed;
      try {
        sem = tensor_semantic(ops, a, b);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::bound_exceeded) throw;
      }
      try {
        closed = tensor_closed_form(ops, a, b);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::bound_exceeded) throw;
      }
      auto show = [&](const std::optional<GradeObject>& g) { return g ? ops.label(*g) : std::string("undefined"); };
      law.expect(sem == closed, ops.label(a) + "⊡" + ops.label(b) + " semantic=" + show(sem) + " closed=" + show(closed));
      if (law.failed()) return law.report();
    }
  }
  return law.report();
}

int cmd_check_laws(const Settings& s) {
  const MonadConfig cfg = parse_monad_config(load_json_file(s.config));
  const MonadInstance& m = cfg.monad;
  std::cout << "# " << m.name() << "\n";
  std::vector<LawReport> all;
  MonadLawOptions mopts;
  mopts.seed = s.seed;
  for (auto& r : m.check_laws(mopts)) emit(all, std::move(r));
  if (!all_pass(all)) {
    std::cout << "NOTE grading suites skipped because the monad laws fail\n";
    return exit_law;
  }

  std::optional<CanonicalGrading> c;
  try {
    c = enumerated_grading(cfg);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::bound_exceeded) throw;
    std::cout << "NOTE grading suites skipped: " << e.what() << "\n";
  }
  if (c) {
    const auto& ops = c->ops();
    std::cout << "# grades=" << c->grades().size() << " unit=" << ops.label(c->unit())
              << " flavor=" << to_string(c->flavor()) << "\n";
    for (auto& r : check_skew_laws(c->poset(), c->flavor())) emit(all, std::move(r));
    LawReport ln = check_left_normal(c->poset());
    if (c->flavor() == SkewFlavor::right_skew) {
      // The right-skew instance is expected to fail left-normality.
      emit(all, ln.pass ? LawReport::fail("not-left-normal", "J⊡x = x for every x")
                        : LawReport::ok("not-left-normal"));
      if (!ln.pass) std::cout << "INFO left-normal counterexample " << *ln.counterexample << "\n";
    } else {
      emit(all, std::move(ln));
    }
    emit(all, subfunctor_bijection(*c));
    if (m.kind() == MonadKind::writer || m.kind() == MonadKind::list ||
        m.grade_kind() == GradeKind::state_shapewise)
      emit(all, closed_form_agreement(*c));
    if (cfg.getput) {
      auto result = canonicity_morphism(getput_grading(ops), *c);
      for (auto& r : result.reports) emit(all, std::move(r));
    }
    if (m.kind() == MonadKind::list || m.grade_kind() == GradeKind::state_shapewise) {
      emit(all, check_stability(3));
      if (m.count(1) <= 16) emit(all, check_shape_equivalence(ops, make_universe(2)));
    }
  }

  AlgebraicCheckOptions aopts;
  aopts.seed = s.seed;
  std::vector<AlgebraicOp> ops_to_check;
  if (m.kind() == MonadKind::writer) {
    for (std::size_t z = 0; z < m.monoid().size(); ++z) ops_to_check.push_back(writer_act(m, z));
  } else if (m.kind() == MonadKind::list) {
    ops_to_check.push_back(list_concat(m));
    ops_to_check.push_back(list_empty());
  } else {
    ops_to_check.push_back(identity_op());
  }
  for (const auto& op : ops_to_check) {
    emit(all, check_algebraic(op, m, aopts));
    emit(all, check_op_natural(op, m, aopts));
  }
  return all_pass(all) ? exit_ok : exit_law;
}

// ---------------------------------------------------------------- infer

/// The value atoms an element literal mentions.
FinSet deduce_set(const MonadInstance& m, const std::string& text) {
  auto strip = [](std::string s, char open, char close) {
    auto a = s.find_first_not_of(" \t");
    auto b = s.find_last_not_of(" \t");
    if (a == std::string::npos) throw Error(ErrorCode::parse_error, "empty element");
    s = s.substr(a, b - a + 1);
    if (s.size() < 2 || s.front() != open || s.back() != close)
      throw Error(ErrorCode::parse_error, std::string("element must be wrapped in ") + open + close);
    return s.substr(1, s.size() - 2);
  };
  auto trim = [](const std::string& s) {
    auto a = s.find_first_not_of(" \t");
    auto b = s.find_last_not_of(" \t");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  std::set<std::string> atoms;
  switch (m.kind()) {
    case MonadKind::writer: {
      auto parts = split_top_level(strip(text, '(', ')'), ',');
      if (parts.size() != 2) throw Error(ErrorCode::parse_error, "writer element is (z,x)");
      atoms.insert(trim(parts[1]));
      break;
    }
    case MonadKind::list: {
      auto body = strip(text, '[', ']');
      if (!trim(body).empty())
        for (const auto& item : split_top_level(body, ',')) atoms.insert(trim(item));
      break;
    }
    case MonadKind::reader:
    case MonadKind::state: {
      auto body = strip(text, '{', '}');
      if (trim(body).empty()) break;
      for (const auto& entry : split_top_level(body, ',')) {
        auto kv = split_top_level(entry, ':');
        if (kv.size() != 2) throw Error(ErrorCode::parse_error, "expected state:value in '" + entry + "'");
        if (m.kind() == MonadKind::reader) {
          atoms.insert(trim(kv[1]));
        } else {
          auto pair = split_top_level(strip(kv[1], '(', ')'), ',');
          if (pair.size() != 2) throw Error(ErrorCode::parse_error, "state entry is s:(s',x)");
          atoms.insert(trim(pair[1]));
        }
      }
      break;
    }
  }
  return FinSet(std::vector<std::string>(atoms.begin(), atoms.end()));
}

int cmd_infer(const Settings& s, const std::string& element, const std::string& set_text) {
  const MonadConfig cfg = parse_monad_config(load_json_file(s.config));
  const MonadInstance& m = cfg.monad;
  GradeOps ops(m);
  FinSet x;
  if (!set_text.empty()) {
    std::vector<std::string> atoms;
    for (const auto& a : split_top_level(set_text, ',')) atoms.push_back(a);
    x = FinSet(std::move(atoms));
  } else {
    x = deduce_set(m, element);
  }
  Computation t;
  try {
    t = m.parse(element, x);
  } catch (const Error& e) {
    throw Error(ErrorCode::parse_error, e.what());
  }
  const GradeObject g = ops.principal(t, x.size());
  json out;
  out["element"] = m.format(t, x);
  out["set"] = x.elements();
  out["grade"] = ops.to_json(g);
  out["label"] = ops.label(g);
  if (cfg.getput) {
    auto d = least_user_grade(getput_grading(ops), ops, g);
    out["getput"] = d ? json(getput_grading(ops).names[*d]) : json(nullptr);
  }
  std::cout << out.dump(2) << "\n";
  return exit_ok;
}

// ---------------------------------------------------------------- grades

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out;
}

int cmd_grades(const Settings& s, const std::string& dot_path) {
  const MonadConfig cfg = parse_monad_config(load_json_file(s.config));
  const CanonicalGrading c = enumerated_grading(cfg);
  const auto& ops = c.ops();
  const auto& poset = c.poset();
  const auto edges = covering_edges(poset);
  const auto unit = c.index_of(c.unit());

  std::ostringstream dot;
  dot << "digraph grades {\n  rankdir=BT;\n  node [shape=box];\n";
  for (std::size_t i = 0; i < c.grades().size(); ++i) {
    dot << "  n" << i << " [label=\"" << dot_escape(ops.label(c.grades()[i])) << "\"";
    if (unit && *unit == i) dot << ", style=filled, fillcolor=gold, penwidth=2";
    dot << "];\n";
  }
  for (const auto& [a, b] : edges) dot << "  n" << a << " -> n" << b << ";\n";
  dot << "}\n";

  std::cout << "grades=" << c.grades().size() << " covering_edges=" << edges.size()
            << " unit=" << ops.label(c.unit()) << " flavor=" << to_string(c.flavor()) << "\n";
  if (dot_path.empty()) {
    std::cout << dot.str();
  } else {
    std::ofstream f(dot_path);
    if (!f) throw Error(ErrorCode::invalid_argument, "cannot write " + dot_path);
    f << dot.str();
    std::cout << "wrote " << dot_path << "\n";
  }
  return exit_ok;
}

// ---------------------------------------------------------------- op-grade

int cmd_op_grade(const Settings& s, const std::string& op_arg, bool emit_psi) {
  const MonadConfig cfg = parse_monad_config(load_json_file(s.config));
  GradeOps ops(cfg.monad);
  json op_json;
  if (!op_arg.empty() && op_arg.front() == '{') {
    try {
      op_json = json::parse(op_arg);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::parse_error, std::string("--op: ") + e.what());
    }
  } else {
    op_json = load_json_file(op_arg);
  }
  const OpConfig oc = parse_op_config(op_json, ops);
  require_monoidal(ops);

  const PMorphism p = canonical_p(ops, oc.op, oc.inputs);
  json out;
  out["op"] = oc.op.name;
  out["inputs"] = json::array();
  for (const auto& g : oc.inputs) out["inputs"].push_back(ops.label(g));
  out["output"] = ops.to_json(p.output);
  out["label"] = ops.label(p.output);

  if (emit_psi) {
    const CanonicalGrading c = enumerated_grading(cfg);
    const GradedOp psi = psi_from_p(c, oc.op, p);
    const auto& m = c.monad();
    json tables = json::array();
    for (const auto& sg : c.grades()) {
      json entry;
      entry["S"] = ops.label(sg);
      json probes = json::array();
      for (const auto& x : ops.readback_probes()) {
        json pj;
        pj["X"] = x.to_string();
        try {
          const auto factors = psi_domain(c, psi, sg, x);
          json rows = json::array();
          std::vector<std::size_t> idx(factors.size(), 0);
          bool empty = false;
          for (const auto& f : factors) empty = empty || f.empty();
          while (!empty) {
            std::vector<Computation> args;
            json arg_text = json::array();
            for (std::size_t i = 0; i < factors.size(); ++i) {
              args.push_back(factors[i][idx[i]]);
              arg_text.push_back(m.format(args.back(), x));
            }
            rows.push_back({{"args", arg_text}, {"value", m.format(psi.psi(sg, x, args), x)}});
            std::size_t i = factors.size();
            while (i > 0) {
              --i;
              if (++idx[i] < factors[i].size()) break;
              idx[i] = 0;
              if (i == 0) empty = true;
            }
            if (factors.empty()) break;
          }
          pj["table"] = rows;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::bound_exceeded) throw;
          pj["undefined"] = e.what();
        }
        probes.push_back(pj);
      }
      entry["probes"] = probes;
      tables.push_back(entry);
    }
    out["psi"] = tables;
  }
  std::cout << out.dump(2) << "\n";
  return exit_ok;
}

// ---------------------------------------------------------------- compare-tensor

int cmd_compare_tensor(const Settings& s) {
  const MonadConfig cfg = parse_monad_config(load_json_file(s.config));
  const MonadInstance& m = cfg.monad;
  if (!(m.kind() == MonadKind::writer || m.kind() == MonadKind::list ||
        m.grade_kind() == GradeKind::state_shapewise))
    throw Error(ErrorCode::unsupported_kind, std::string("no closed-form tensor for ") +
                                                 std::string(to_string(m.grade_kind())));
  const CanonicalGrading c = enumerated_grading(cfg);
  const auto& ops = c.ops();
  std::size_t pairs = 0, agree = 0, undefined = 0, literal_mismatch = 0;
  std::vector<std::string> mismatches;
  for (const auto& a : c.grades()) {
    for (const auto& b : c.grades()) {
      ++pairs;
      std::optional<GradeObject> sem, closed;
      try {
        sem = tensor_semantic(ops, a, b);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::bound_exceeded) throw;
      }
      try {
        closed = tensor_closed_form(ops, a, b);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::bound_exceeded) throw;
      }
      if (!sem && !closed) {
        ++undefined;
      } else if (sem == closed) {
        ++agree;
      } else {
        auto show = [&](const std::optional<GradeObject>& g) { return g ? ops.label(*g) : std::string("undefined"); };
        mismatches.push_back(ops.label(a) + " ⊡ " + ops.label(b) + ": semantic " + show(sem) + ", closed form " +
                             show(closed));
      }
      if (sem && m.grade_kind() == GradeKind::state_shapewise && !(tensor_literal_composition(ops, a, b) == *sem))
        ++literal_mismatch;
    }
  }
  std::cout << "# " << m.name() << "\n";
  std::cout << "pairs=" << pairs << " agree=" << agree << " undefined=" << undefined
            << " mismatches=" << mismatches.size() << "\n";
  for (const auto& line : mismatches) std::cout << "MISMATCH " << line << "\n";
  if (m.grade_kind() == GradeKind::state_shapewise)
    std::cout << "INFO composition reading h∘σ with h ∈ Cl(Σ') differs on " << literal_mismatch << " pairs\n";
  return mismatches.empty() ? exit_ok : exit_law;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse_error:
    case ErrorCode::invalid_argument:
    case ErrorCode::kind_mismatch:
    case ErrorCode::unsupported_kind:
      return exit_config;
    case ErrorCode::bound_exceeded:
      return exit_bound;
    case ErrorCode::skew_not_supported:
      return exit_skew;
    default:
      return exit_law;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Canonical gradings of finite monads"};
  app.require_subcommand(1);
  Settings s;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", s.config, "monad configuration JSON")->required();
    sub->add_option("--seed", s.seed, "seed for sampled law checks");
  };

  auto* check = app.add_subcommand("check-laws", "run every law suite that applies to the monad");
  add_common(check);

  std::string element, set_text;
  auto* infer = app.add_subcommand("infer", "print the least canonical grade containing an element");
  add_common(infer);
  infer->add_option("--element", element, "element literal, e.g. (0,x) or [a,b]")->required();
  infer->add_option("--set", set_text, "comma-separated value set (default: atoms in the literal)");

  std::string dot_path;
  auto* grades = app.add_subcommand("grades", "export the grade poset as a DOT digraph");
  add_common(grades);
  grades->add_option("--dot", dot_path, "output path (stdout when omitted)");

  std::string op_arg;
  bool emit_psi = false;
  auto* op = app.add_subcommand("op-grade", "canonical output grade of an algebraic operation");
  add_common(op);
  op->add_option("--op", op_arg, "operation JSON file or inline JSON")->required();
  op->add_flag("--emit-psi", emit_psi, "also print the graded operation tables");

  auto* compare = app.add_subcommand("compare-tensor", "semantic tensor against its closed form");
  add_common(compare);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_config;
  }

  try {
    if (check->parsed()) return cmd_check_laws(s);
    if (infer->parsed()) return cmd_infer(s, element, set_text);
    if (grades->parsed()) return cmd_grades(s, dot_path);
    if (op->parsed()) return cmd_op_grade(s, op_arg, emit_psi);
    if (compare->parsed()) return cmd_compare_tensor(s);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_config;
  }
  return exit_config;
}
