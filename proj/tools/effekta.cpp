#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "effekta/harness.hpp"
#include "json.hpp"

using namespace effekta;
using json = nlohmann::json;

namespace {

enum Exit { Ok = 0, TypeFailure = 1, ConfigFailure = 2, UndecidedExit = 3 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  MonadTag tag = MonadTag::Exception;
  Signatures sigs;
  Impls impls;
  InterpKind interp = InterpKind::ExcSets;
  int steps = 64;   // step budget
  int approx = 20;  // approximant maxN
  InclusionBounds bounds;
};

struct Options {
  std::string program;
  std::string config;
  int budget = -1;
  int steps = -1;
  bool trace = false;
  bool as_json = false;
  std::uint64_t seed = 1;
  int random = 0;
  bool unsafe = false;
  std::string suite = "all";
  int universe = 2;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

OperationImpl::Kind parse_kind(const std::string& s) {
  if (s == "raise") return OperationImpl::Kind::Raise;
  if (s == "choose") return OperationImpl::Kind::Choose;
  if (s == "write") return OperationImpl::Kind::Write;
  throw ConfigError("unknown operation kind '" + s + "'");
}

std::string sig_str(const OpSignature& s) {
  std::string r = "(";
  for (std::size_t i = 0; i < s.args.size(); ++i) r += (i ? ", " : "") + s.args[i].str();
  return r + ") -> " + s.result.str();
}

bool same_sig(const OpSignature& a, const OpSignature& b) {
  return a.args == b.args && a.result == b.result;
}

RunConfig load_config(const std::string& path) {
  json j;
  try {
    j = json::parse(slurp(path));
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  try {
    RunConfig c;
    const auto tag = parse_tag(j.at("monad").get<std::string>());
    if (!tag) throw ConfigError("unknown monad '" + j.at("monad").get<std::string>() + "'");
    c.tag = *tag;

    std::set<std::string> exceptions, locations;
    const json params = j.value("params", json::object());
    for (const auto& e : params.value("exceptions", json::array())) exceptions.insert(e.get<std::string>());
    for (const auto& l : params.value("locations", json::array())) locations.insert(l.get<std::string>());

    for (const auto& o : j.at("operations")) {
      const std::string name = o.at("name").get<std::string>();
      const auto kind = parse_kind(o.at("kind").get<std::string>());
      if (!compatible(kind, c.tag))
        throw ConfigError("operation " + name + " of kind " + o.at("kind").get<std::string>() +
                          " does not run in the " + std::string(tag_name(c.tag)) + " monad");
      std::string param = o.value("param", "");
      const std::string prefix = kind == OperationImpl::Kind::Raise ? "raise_" : "write_";
      if (param.empty() && kind != OperationImpl::Kind::Choose && name.rfind(prefix, 0) == 0)
        param = name.substr(prefix.size());
      if (kind == OperationImpl::Kind::Raise && param.empty()) throw ConfigError(name + ": missing exception name");
      if (kind == OperationImpl::Kind::Write && param.empty()) throw ConfigError(name + ": missing location");
      if (kind == OperationImpl::Kind::Raise && !exceptions.empty() && !exceptions.count(param))
        throw ConfigError(name + ": exception " + param + " is not declared in params");
      if (kind == OperationImpl::Kind::Write && !locations.empty() && !locations.count(param))
        throw ConfigError(name + ": location " + param + " is not declared in params");

      OpSignature sig = standard_signature(kind);
      if (o.contains("signature")) {
        std::vector<Type> args;
        for (const auto& a : o["signature"].value("args", json::array())) args.push_back(parse_type(a.get<std::string>()));
        const OpSignature given{args, parse_type(o["signature"].at("result").get<std::string>())};
        if (!same_sig(given, sig))
          throw ConfigError(name + ": signature " + sig_str(given) + " does not fit its kind, expected " +
                            sig_str(sig));
      }
      const Symbol op = intern(name);
      if (c.sigs.count(op)) throw ConfigError("operation " + name + " declared twice");
      c.sigs.insert_or_assign(op, sig);
      c.impls.insert_or_assign(op, OperationImpl{op, kind, param, sig});
    }

    c.interp = default_interp(c.tag);
    if (j.contains("interpretation")) {
      const auto k = parse_interp(j["interpretation"].get<std::string>());
      if (!k) throw ConfigError("unknown interpretation '" + j["interpretation"].get<std::string>() + "'");
      if (!compatible(*k, c.tag))
        throw ConfigError(std::string(interp_name(*k)) + " does not interpret the " + std::string(tag_name(c.tag)) +
                          " monad");
      c.interp = *k;
    }

    const json b = j.value("budgets", json::object());
    c.steps = b.value("steps", c.steps);
    c.approx = b.value("approx", c.approx);
    const json inc = b.value("inclusion", json::object());
    c.bounds.max_stem = inc.value("max_stem", c.bounds.max_stem);
    c.bounds.max_period = inc.value("max_period", c.bounds.max_period);
    c.bounds.max_len = inc.value("max_len", c.bounds.max_len);
    c.bounds.max_classes = inc.value("max_classes", c.bounds.max_classes);
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  } catch (const ParseError& e) {
    throw ConfigError(path + ": bad type in signature: " + e.what());
  }
}

Program load_program(const std::string& path, const RunConfig& c) {
  if (path.empty()) throw ConfigError("missing program file");
  return parse_program(slurp(path), c.sigs);
}

void emit(const Options& o, const json& record, const std::string& text) {
  if (o.as_json)
    std::cout << record.dump() << "\n";
  else if (!text.empty())
    std::cout << text << "\n";
}

// Type checks the program; returns an exit code, Ok when well-typed.
int gate(const Program& p, const RunConfig& c, const Options& o, std::optional<TypeAndEffect>* out = nullptr) {
  const Report r = check_program(p, c.bounds);
  if (out) *out = r.result;
  if (r.ok()) return Ok;
  json rec{{"command", "check"}, {"ok", false}, {"undecided", r.undecided}, {"diagnostics", r.diagnostics}};
  std::string text;
  for (const auto& d : r.diagnostics) text += (text.empty() ? "" : "\n") + ("type error: " + d);
  emit(o, rec, text);
  return r.undecided ? UndecidedExit : TypeFailure;
}

std::string result_text(const M<Conf>& m) {
  if (m.tag == MonadTag::Exception) {
    if (m.state == M<Conf>::State::Raised) return "exception " + m.exception;
    if (m.state == M<Conf>::State::Bottom) return "bot";
    return m.items.front().str();
  }
  return show(m);
}

int cmd_check(const Options& o) {
  const RunConfig c = load_config(o.config);
  const Program p = load_program(o.program, c);
  std::optional<TypeAndEffect> te;
  if (int code = gate(p, c, o, &te); code != Ok) return code;
  emit(o, {{"command", "check"}, {"ok", true}, {"type", te->type.str()}, {"effect", te->effect.str()}}, te->str());
  return Ok;
}

int cmd_run(const Options& o) {
  const RunConfig c = load_config(o.config);
  const int budget = o.budget >= 0 ? o.budget : c.steps;
  if (budget <= 0) throw ConfigError("budget must be positive");
  const Program p = load_program(o.program, c);
  if (!o.unsafe)
    if (int code = gate(p, c, o); code != Ok) return code;
  std::vector<M<Conf>> trace;
  const Semantics sem{c.tag, c.impls};
  const Outcome out = finitary_sem(p.main, budget, sem, o.trace ? &trace : nullptr);

  json rec{{"command", "run"}, {"converged", out.converged}, {"steps", out.steps}};
  std::string text;
  if (o.trace) {
    json lines = json::array();
    for (std::size_t i = 0; i < trace.size(); ++i) {
      const std::string line = trace_line(trace[i], p.defs);
      lines.push_back({{"n", i}, {"conf", line}});
      text += std::to_string(i) + ": " + line + "\n";
    }
    rec["trace"] = lines;
  }
  if (out.converged) {
    rec["result"] = result_text(out.result);
    text += result_text(out.result) + " (" + std::to_string(out.steps) + " steps)";
  } else {
    rec["last"] = show(out.result);
    text += "diverged within " + std::to_string(budget);
  }
  emit(o, rec, text);
  return Ok;
}

int cmd_approx(const Options& o) {
  const RunConfig c = load_config(o.config);
  const int steps = o.steps >= 0 ? o.steps : c.approx;
  if (steps < 0) throw ConfigError("steps must not be negative");
  const Program p = load_program(o.program, c);
  if (!o.unsafe)
    if (int code = gate(p, c, o); code != Ok) return code;
  const Chain chain = approximant_chain(p.main, steps, {c.tag, c.impls});
  json entries = json::array();
  std::string text;
  for (std::size_t n = 0; n < chain.entries.size(); ++n) {
    entries.push_back(show(chain.entries[n]));
    text += std::to_string(n) + ": " + show(chain.entries[n]) + "\n";
  }
  text += std::string("increasing: ") + (chain.increasing ? "yes" : "no") + "\nconverged: " +
          (chain.converged ? "at " + std::to_string(chain.converged_at) : "no");
  emit(o,
       {{"command", "approx"},
        {"entries", entries},
        {"increasing", chain.increasing},
        {"converged", chain.converged},
        {"converged_at", chain.converged_at}},
       text);
  return chain.increasing ? Ok : TypeFailure;
}

const std::vector<std::string>& suites() {
  static const std::vector<std::string> s{"progress", "sr", "run", "fin", "inf", "all"};
  return s;
}

std::vector<HarnessVerdict> run_suites(Harness& h, const std::optional<Expr>& e, const std::string& suite,
                                       int budget, int max_n) {
  std::vector<HarnessVerdict> out;
  auto want = [&](const char* s) { return suite == "all" || suite == s; };
  if (e && want("progress")) out.push_back(h.check_progress(*e));
  if (e && want("sr")) {
    for (auto& v : h.check_reduction(*e, budget)) out.push_back(std::move(v));
  }
  if (want("run")) out.push_back(h.check_run_compat());
  if (e && want("fin")) out.push_back(h.check_finitary_soundness(*e, budget));
  if (e && want("inf")) out.push_back(h.check_infinitary_soundness(*e, max_n));
  return out;
}

int cmd_verify(const Options& o) {
  const RunConfig c = load_config(o.config);
  if (std::find(suites().begin(), suites().end(), o.suite) == suites().end())
    throw ConfigError("unknown suite '" + o.suite + "'");
  if (o.program.empty() && o.random <= 0) throw ConfigError("verify needs a program or --random N");
  const int budget = o.budget >= 0 ? o.budget : c.steps;
  const int max_n = o.steps >= 0 ? o.steps : c.approx;

  std::vector<HarnessVerdict> verdicts;
  if (!o.program.empty()) {
    const Program p = load_program(o.program, c);
    if (!o.unsafe)
      if (int code = gate(p, c, o); code != Ok) return code;
    Harness h({c.sigs, {c.tag, c.impls}, c.interp, c.bounds});
    verdicts = run_suites(h, p.main, o.suite, budget, max_n);
  }
  if (o.random > 0) {
    const Signatures gs = generator_signatures(c.tag);
    Harness h({gs, generator_semantics(c.tag), c.interp, c.bounds});
    TermSource src({o.seed, 12, gs, c.tag});
    for (int i = 0; i < o.random; ++i) {
      const Generated g = src.next();
      for (auto& v : run_suites(h, g.expr, o.suite == "run" ? "none" : o.suite, budget, max_n))
        verdicts.push_back(std::move(v));
    }
    if (o.program.empty() && (o.suite == "run" || o.suite == "all")) verdicts.push_back(h.check_run_compat());
  }

  bool fail = false, undecided = false;
  for (const auto& v : verdicts) {
    fail |= v.status == Status::Fail || v.status == Status::Precondition;
    undecided |= v.status == Status::Undecided;
    emit(o,
         {{"property", v.property},
          {"subject", v.subject},
          {"status", status_name(v.status)},
          {"witness", v.witness},
          {"vacuous", v.vacuous}},
         v.str());
  }
  return fail ? TypeFailure : undecided ? UndecidedExit : Ok;
}

int cmd_laws(const Options& o) {
  const RunConfig c = load_config(o.config);
  if (o.universe < 1 || o.universe > 4) throw ConfigError("universe must be between 1 and 4");
  std::vector<LawReport> reports{kleisli_law_suite(c.tag, o.universe)};
  std::vector<InterpKind> kinds;
  for (InterpKind k : all_interp_kinds())
    if (compatible(k, c.tag)) kinds.push_back(k);
  for (InterpKind k : kinds)
    reports.push_back(lifting_axiom_suite(k, o.universe, default_effect_samples(c.tag), standard_impls(c.tag)));

  bool unexpected = false;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const LawReport& r = reports[i];
    json results = json::array();
    std::string text = r.subject + " (universe " + std::to_string(r.universe) + ")";
    for (const auto& l : r.results) {
      const bool expected = i > 0 && expected_failure(kinds[i - 1], l.condition);
      // an expected failure that passes is as much a surprise as the converse
      const bool ok = l.pass != expected;
      unexpected |= !ok;
      std::string verdict = l.pass ? "pass" : "fail";
      if (expected) verdict += ok ? " (expected)" : " (expected a failure)";
      results.push_back({{"condition", l.condition},
                         {"pass", l.pass},
                         {"expected_failure", expected},
                         {"checked", l.checked},
                         {"witness", l.witness}});
      text += "\n  " + l.condition + ": " + verdict + " [" + std::to_string(l.checked) + " checks]";
      if (!l.pass) text += " " + l.witness;
    }
    emit(o, {{"subject", r.subject}, {"universe", r.universe}, {"results", results}}, text);
  }
  return unexpected ? TypeFailure : Ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"effekta: type-and-effect checking and monadic execution"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool program) {
    if (program) sub->add_option("program", o.program, "program file");
    sub->add_option("--config", o.config, "configuration JSON")->required();
    sub->add_flag("--json", o.as_json, "machine-readable records");
  };
  auto* check = app.add_subcommand("check", "infer the type and effect of a program");
  common(check, true);
  auto* run = app.add_subcommand("run", "evaluate a program under the configured monad");
  common(run, true);
  run->add_option("--budget", o.budget, "step budget");
  run->add_flag("--trace", o.trace, "print every configuration reached");
  run->add_flag("--unsafe", o.unsafe, "skip the type check");
  auto* approx = app.add_subcommand("approx", "print the chain of approximants");
  common(approx, true);
  approx->add_option("--steps", o.steps, "last approximant index");
  approx->add_flag("--unsafe", o.unsafe, "skip the type check");
  auto* verify = app.add_subcommand("verify", "run soundness checks");
  common(verify, true);
  verify->add_option("--suite", o.suite, "progress, sr, run, fin, inf or all");
  verify->add_option("--budget", o.budget, "step budget");
  verify->add_option("--steps", o.steps, "approximants for the infinitary check");
  verify->add_option("--random", o.random, "also check N generated terms");
  verify->add_option("--seed", o.seed, "generator seed");
  verify->add_flag("--unsafe", o.unsafe, "skip the type check");
  auto* laws = app.add_subcommand("laws", "check monad laws and interpretation conditions");
  common(laws, false);
  laws->add_option("--universe", o.universe, "payload universe size, at most 4");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? Ok : ConfigFailure;
  }

  try {
    if (check->parsed()) return cmd_check(o);
    if (run->parsed()) return cmd_run(o);
    if (approx->parsed()) return cmd_approx(o);
    if (verify->parsed()) return cmd_verify(o);
    return cmd_laws(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
  } catch (const GenerationError& e) {
    std::cerr << "generation error: " << e.what() << "\n";
  }
  return ConfigFailure;
}
