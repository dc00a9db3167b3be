// Acceptance suite: one line per criterion, nonzero exit when any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "effekta/harness.hpp"
#include "filter_oracle.hpp"
#include "golden.hpp"

using namespace effekta;

namespace {

struct Result {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (ok || !pass) return;
    pass = false;
    detail = what;
  }
};

Expr parse(const std::string& text, const Signatures& sigs) { return parse_program(text, sigs).main; }

std::string join(const std::vector<std::string>& xs) {
  std::string s;
  for (const auto& x : xs) s += (s.empty() ? "" : " => ") + x;
  return s;
}

M<Conf> vals(MonadTag tag, std::initializer_list<int> ns) {
  M<Conf> m(tag);
  for (int n : ns) m.items.push_back(Conf::val(Value::nat(n)));
  return m;
}

bool same_effect(const Effect& e, std::string_view text) {
  const auto x = compile(parse_effect_expr(text));
  return eff_includes(e.automaton(), x).yes() && eff_includes(x, e.automaton()).yes();
}

// (l,n)(l2,n)...(l,0)(l2,0)
std::vector<Output> countdown(int n, bool both) {
  std::vector<Output> w;
  for (int k = n; k >= 0; --k) {
    w.push_back({"l", static_cast<std::uint64_t>(k)});
    if (both) w.push_back({"l2", static_cast<std::uint64_t>(k)});
  }
  return w;
}

Result golden_traces() {
  Result r;
  const auto ex = golden::exceptions();
  const auto sigs = golden::exception_sigs();
  struct Case {
    int arg;
    std::vector<std::string> lines;
  };
  const std::vector<Case> cases{
      {1,
       {"predfun 1", "if iszero(1) then raise_PredZero() else return 0",
        "if false then raise_PredZero() else return 0", "return 0", "0"}},
      {0,
       {"predfun 0", "if iszero(0) then raise_PredZero() else return 0",
        "if true then raise_PredZero() else return 0", "raise_PredZero()", "Exc(PredZero)"}},
  };
  for (const auto& c : cases) {
    Program p = parse_program(golden::predfun + "predfun " + std::to_string(c.arg), sigs);
    std::vector<M<Conf>> trace;
    const Outcome out = finitary_sem(p.main, 64, ex, &trace);
    const auto lines = normalized_trace(trace, {{"predfun", p.main.value(0)}});
    r.require(out.converged, "predfun did not converge");
    r.require(lines == c.lines, "trace " + join(lines));
  }
  if (r.pass) r.detail = "predfun 1 and predfun 0 match in 4 steps each";
  return r;
}

Result list_monad() {
  Result r;
  const auto li = golden::lists();
  const auto ns = golden::nondet_sigs();
  r.require(finitary_sem(parse(golden::choose_e, ns), 64, li).result == vals(li.tag, {0, 1}), "e");
  r.require(finitary_sem(parse(golden::chfun_down + "chfun_down 3", ns), 200, li).result ==
                vals(li.tag, {3, 2, 1, 0}),
            "chfun_down 3");
  const Expr up = parse(golden::chfun_up + "chfun_up 0", ns);
  const Outcome o = finitary_sem(up, 64, li);
  r.require(!o.converged && o.steps == 64, "chfun_up 0 converged");
  const Chain c = approximant_chain(up, 30, li);
  const auto& last = c.entries.back().items;
  r.require(c.increasing && last.size() >= 3, "chain too short");
  if (r.pass)
    for (int n = 0; n < 3; ++n) r.require(last[n] == Conf::val(Value::nat(n)), "chain order " + show(c.entries.back()));
  if (r.pass) r.detail = "e -> [0, 1]; chfun_down 3 -> [3, 2, 1, 0]; chfun_up 0 approximant " + show(c.entries.back());
  return r;
}

Result distributions() {
  Result r;
  const auto di = golden::distributions();
  const auto ns = golden::nondet_sigs();
  const M<Conf> e = finitary_sem(parse(golden::choose_e, ns), 64, di).result;
  r.require(e.items.size() == 2 && e.weight_of(Conf::val(Value::nat(0))) == mpq_class(1, 2) &&
                e.weight_of(Conf::val(Value::nat(1))) == mpq_class(1, 2),
            "e gives " + show(e));
  const Chain c = approximant_chain(parse(golden::chfun_up + "chfun_up 0", ns), 30, di);
  const M<Conf>& last = c.entries.back();
  for (int n = 0; n < 3; ++n)
    r.require(last.weight_of(Conf::val(Value::nat(n))) == mpq_class(1, 2 << n), "chfun_up masses " + show(last));
  if (r.pass) r.detail = "e -> " + show(e) + "; chfun_up 0 masses 1/2, 1/4, 1/8";
  return r;
}

Result pointed_output() {
  Result r;
  const auto out = golden::outputs();
  const auto os = golden::output_sigs();
  for (int n = 0; n <= 3; ++n) {
    const Outcome o = finitary_sem(parse(golden::wfun_down + "wfun_down " + std::to_string(n), os), 200, out);
    r.require(o.converged && o.result == M<Conf>::output(countdown(n, true), Conf::val(Value::unit())),
              "wfun_down " + std::to_string(n) + " gives " + show(o.result));
  }
  std::vector<Output> up;
  for (std::uint64_t k = 0; k < 20; ++k) {
    up.push_back({"l", k});
    up.push_back({"l2", k});
  }
  const Chain c = approximant_chain(parse(golden::wfun_up + "wfun_up 0", os), 40, out);
  std::size_t longest = 0;
  for (const auto& m : c.entries) {
    r.require(m.is_bottom_payload(), "payload " + show(m));
    r.require(m.word.size() <= up.size() && std::equal(m.word.begin(), m.word.end(), up.begin()),
              "not a prefix: " + show(m));
    longest = std::max(longest, m.word.size());
  }
  r.require(c.increasing && longest >= 6, "wfun_up chain stalls");
  if (r.pass) r.detail = "wfun_down 0..3 exact; wfun_up 0 approximants are prefixes up to length " +
                         std::to_string(longest);
  return r;
}

Result typing() {
  Result r;
  auto infer = [](const std::string& text, const Signatures& sigs) {
    return Checker(sigs).infer_expr({}, parse(text, sigs));
  };
  auto latent = [&](const std::string& def, const std::string& name, const Signatures& sigs) {
    return infer(def + "return " + name, sigs).type;
  };
  const auto es = golden::exception_sigs(), ns = golden::nondet_sigs(), os = golden::output_sigs();
  const Type predfun = latent(golden::predfun, "predfun", es);
  r.require(predfun.str() == "Nat -[eps | raise_PredZero]-> Nat", "predfun : " + predfun.str());
  r.require(same_effect(infer(golden::predfun + "predfun 0", es).effect, "eps | raise_PredZero"), "predfun 0");
  r.require(same_effect(latent(golden::chfun_up, "chfun_up", ns).latent(), "choose . choose*"), "chfun_up");
  r.require(same_effect(latent(golden::chfun_down, "chfun_down", ns).latent(), "choose*"), "chfun_down");
  r.require(same_effect(latent(golden::wfun_up, "wfun_up", os).latent(), "(write_l . write_l2)^w"), "wfun_up");
  r.require(same_effect(infer(golden::wfun_down + "wfun_down 2", os).effect,
                        "(write_l . write_l2) . (write_l . write_l2)*"),
            "wfun_down");
  r.require(same_effect(infer(golden::wfun_down_star + "wfun_down 2", os).effect, "(write_l . write_l2)*"),
            "wfun_down with a starred annotation");

  const auto h = infer(golden::predfun + golden::with_h + "predfun 0", es);
  r.require(h.type == Type::nat() && same_effect(h.effect, "eps"), "with h: " + h.str());
  const auto h1 = infer(golden::wfun_up + golden::with_h1 + "wfun_up 0", os);
  r.require(h1.type == Type::unit() && same_effect(h1.effect, "(write_l . write_l)^w"), "with h1: " + h1.str());
  const auto h2 = infer(golden::wfun_up + golden::with_h2 + "wfun_up 0", os);
  r.require(same_effect(h2.effect, "(write_l . (eps | write_l))^w"), "with h2: " + h2.str());
  const auto h1d = infer(golden::wfun_down + golden::with_h1 + "wfun_down 3", os);
  r.require(same_effect(h1d.effect, "(write_l . write_l) . (write_l . write_l)*"), "with h1 down: " + h1d.str());
  const auto h2d = infer(golden::wfun_down + golden::with_h2 + "wfun_down 3", os);
  r.require(same_effect(h2d.effect, "(write_l . (eps | write_l)) . (write_l . (eps | write_l))*"),
            "with h2 down: " + h2d.str());
  if (r.pass) r.detail = "5 function judgments and 5 handler judgments";
  return r;
}

Result handlers() {
  Result r;
  const auto ex = golden::exceptions();
  const auto es = golden::exception_sigs();
  const Outcome o = finitary_sem(parse(golden::predfun + golden::with_h + "predfun 0", es), 64, ex);
  r.require(o.converged && o.result == unit(ex.tag, Conf::val(Value::zero())), "with h predfun 0: " + show(o.result));
  std::string message;
  try {
    Checker(es).infer_expr({}, parse("with {raise_PredZero() =c -> return 0; finally x -> return x} handle "
                                     "raise_PredZero()",
                                     es));
  } catch (const TypeError& e) {
    message = "[" + e.rule + "] " + e.what();
  }
  r.require(message == "[t-continue] clause result Nat not subtype of Bot", "error: " + message);

  const auto out = golden::outputs();
  const auto os = golden::output_sigs();
  const Outcome h1 = finitary_sem(parse(golden::wfun_down + golden::with_h1 + "wfun_down 2", os), 200, out);
  std::vector<Output> twice;
  for (const auto& o2 : countdown(2, false)) {
    twice.push_back(o2);
    twice.push_back(o2);
  }
  r.require(h1.result.word == twice, "with h1: " + show(h1.result));
  const Outcome h2 = finitary_sem(parse(golden::wfun_down + golden::with_h2 + "wfun_down 2", os), 200, out);
  r.require(h2.result.word == std::vector<Output>{{"l", 2}, {"l", 1}, {"l", 1}, {"l", 0}}, "with h2: " + show(h2.result));
  if (r.pass) r.detail = "with h predfun 0 -> 0; " + message;
  return r;
}

Result laws() {
  Result r;
  int checks = 0;
  for (MonadTag t : {MonadTag::Exception, MonadTag::NondetList, MonadTag::Distribution, MonadTag::PointedOutput})
    for (int k = 1; k <= 4; ++k)
      for (const auto& c : kleisli_law_suite(t, k).results) {
        checks += c.checked;
        r.require(c.pass, std::string(tag_name(t)) + " " + c.condition + ": " + c.witness);
      }
  std::vector<std::string> expected;
  for (InterpKind kind : all_interp_kinds()) {
    MonadTag tag = MonadTag::Exception;
    for (MonadTag t : {MonadTag::Exception, MonadTag::NondetList, MonadTag::Distribution, MonadTag::PointedOutput})
      if (compatible(kind, t)) tag = t;
    for (int k = 1; k <= 3; ++k) {
      const LawReport rep = lifting_axiom_suite(kind, k, default_effect_samples(tag), standard_impls(tag));
      for (const auto& c : rep.results) {
        checks += c.checked;
        if (expected_failure(kind, c.condition)) {
          r.require(!c.pass && !c.witness.empty(), std::string(interp_name(kind)) + " " + c.condition + " holds");
          if (k == 3) expected.push_back(std::string(interp_name(kind)) + " " + c.condition + " fails on " + c.witness);
        } else {
          r.require(c.pass, std::string(interp_name(kind)) + " universe " + std::to_string(k) + " " + c.condition +
                                ": " + c.witness);
        }
      }
    }
  }
  if (r.pass) {
    r.detail = std::to_string(checks) + " checks; expected: ";
    for (std::size_t i = 0; i < expected.size(); ++i) r.detail += (i ? "; " : "") + expected[i];
  }
  return r;
}

Result meta_theorems() {
  Result r;
  std::ostringstream summary;
  for (MonadTag tag : {MonadTag::Exception, MonadTag::NondetList, MonadTag::Distribution, MonadTag::PointedOutput}) {
    const Signatures sigs = generator_signatures(tag);
    Harness h({sigs, generator_semantics(tag), default_interp(tag), {}});
    r.require(h.check_run_compat().status == Status::Pass, "run compatibility");
    TermSource src({2024, 12, sigs, tag});
    int checks = 0, undecided = 0, nonvacuous = 0;
    for (int i = 0; i < 500; ++i) {
      const Generated g = src.next();
      for (const auto& v : h.check_reduction(g.expr, 50)) {
        ++checks;
        if (v.status == Status::Undecided) ++undecided;
        r.require(v.status == Status::Pass || v.status == Status::Undecided, v.str());
      }
      const auto fin = h.check_finitary_soundness(g.expr, 50);
      r.require(fin.status == Status::Pass, fin.str());
      if (!fin.vacuous) ++nonvacuous;
      const auto inf = h.check_infinitary_soundness(g.expr, 20);
      r.require(inf.status == Status::Pass, inf.str());
    }
    r.require(undecided * 100 < checks, "undecided rate " + std::to_string(undecided) + "/" + std::to_string(checks));
    r.require(nonvacuous * 100 >= 30 * 500, "non-vacuous " + std::to_string(nonvacuous) + "/500");
    summary << tag_name(tag) << ": " << checks << " step checks, " << undecided << " undecided, " << nonvacuous
            << "/500 non-vacuous; ";
  }
  if (r.pass) r.detail = summary.str();
  return r;
}

Result filter_oracle() {
  Result r;
  std::mt19937 rng(11);
  const std::vector<Symbol> alphabet{intern("a"), intern("b"), intern("c")};
  int pairs = 0, outputs = 0;
  while (pairs < 200) {
    const EffectAutomaton e = oracle::random_automaton(rng, alphabet, 6);
    if (is_empty(e)) continue;
    ++pairs;
    const HandlerFilter h = oracle::random_filter(rng);
    const EffectAutomaton phi = filter_apply(h, e);
    const std::string where = "pair " + std::to_string(pairs) + " effect " + describe(e).str();

    // every unrolled output belongs to the filtered effect
    const oracle::Outputs ref = oracle::filter_all(h, eff_enumerate(e, 6), 2);
    for (const auto& w : ref.words) r.require(eff_member(w, phi), where + ": missing " + format_word(w));
    for (const auto& l : ref.lassos) r.require(eff_member(l, phi), where + ": missing " + format_lasso(l));
    outputs += static_cast<int>(ref.words.size() + ref.lassos.size());

    // and short outputs of the filtered effect are all explained by the unrolling
    const oracle::Outputs deep = oracle::filter_all(h, eff_enumerate(e, 8), 3);
    const Enumeration got = eff_enumerate(phi, 3);
    for (const auto& w : got.words) r.require(deep.words.count(w) > 0, where + ": spurious " + format_word(w));
    for (const auto& l : got.lassos) r.require(deep.lassos.count(l) > 0, where + ": spurious " + format_lasso(l));

    // monotonicity in the effect and the clauses
    const EffectAutomaton bigger = eff_union(e, oracle::random_automaton(rng, alphabet, 6));
    HandlerFilter wider = h;
    for (auto& c : wider.clauses) c.effect = eff_union(c.effect, oracle::pick_effect(rng, oracle::clause_effects()));
    wider.final_effect = eff_union(wider.final_effect, oracle::pick_effect(rng, oracle::final_effects()));
    r.require(!eff_includes(phi, filter_apply(wider, bigger)).no(), where + ": not monotone");

    // filtering a concatenation covers filtering the head against the filtered tail
    const EffectAutomaton tail = oracle::random_automaton(rng, alphabet, 4);
    if (!is_empty(tail)) {
      HandlerFilter inner = h;
      inner.final_effect = filter_apply(h, tail);
      r.require(!eff_includes(filter_apply(inner, e), filter_apply(h, eff_concat(e, tail))).no(),
                where + ": concatenation property");
    }
  }
  if (r.pass) r.detail = "200 pairs, " + std::to_string(outputs) + " unrolled outputs";
  return r;
}

Result agreement() {
  Result r;
  int count = 0;
  auto check = [&](const Expr& e, const Semantics& s, const std::string& name) {
    const Outcome o = finitary_sem(e, 300, s);
    if (!o.converged) return false;
    const Chain c = approximant_chain(e, o.steps, s);
    r.require(c.entries[o.steps] == o.result, name + ": " + show(c.entries[o.steps]) + " vs " + show(o.result));
    ++count;
    return true;
  };
  const auto es = golden::exception_sigs(), ns = golden::nondet_sigs(), os = golden::output_sigs();
  check(parse(golden::predfun + "predfun 1", es), golden::exceptions(), "predfun 1");
  check(parse(golden::predfun + "predfun 0", es), golden::exceptions(), "predfun 0");
  check(parse(golden::predfun + golden::with_h + "predfun 0", es), golden::exceptions(), "with h");
  for (const auto& s : {golden::lists(), golden::distributions()}) {
    check(parse(golden::choose_e, ns), s, "e");
    check(parse(golden::chfun_down + "chfun_down 3", ns), s, "chfun_down 3");
  }
  for (int n = 0; n <= 3; ++n) {
    const std::string arg = "wfun_down " + std::to_string(n);
    check(parse(golden::wfun_down + arg, os), golden::outputs(), arg);
    check(parse(golden::wfun_down + golden::with_h1 + arg, os), golden::outputs(), "with h1 " + arg);
    check(parse(golden::wfun_down + golden::with_h2 + arg, os), golden::outputs(), "with h2 " + arg);
  }
  const int goldens = count;
  for (MonadTag tag : {MonadTag::Exception, MonadTag::NondetList, MonadTag::Distribution, MonadTag::PointedOutput}) {
    TermSource src({99, 12, generator_signatures(tag), tag});
    const Semantics sem = generator_semantics(tag);
    for (int found = 0; found < 50;)
      if (check(src.next().expr, sem, "generated")) ++found;
  }
  if (r.pass) r.detail = std::to_string(goldens) + " goldens and " + std::to_string(count - goldens) + " generated";
  return r;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Result()>>> criteria{
      {"golden exception traces", golden_traces},
      {"list monad results", list_monad},
      {"distribution monad results", distributions},
      {"pointed output results", pointed_output},
      {"typing judgments", typing},
      {"handler results and errors", handlers},
      {"monad laws and interpretation conditions", laws},
      {"progress, subject reduction and soundness on generated terms", meta_theorems},
      {"filter against its unrolling", filter_oracle},
      {"finitary and infinitary agreement", agreement},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Result r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all = all && r.pass;
    std::printf("criterion %zu: %s - %s (%.1fs): %s\n", i + 1, r.pass ? "PASS" : "FAIL", criteria[i].first, secs,
                r.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
