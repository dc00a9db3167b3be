#include "doctest.h"
#include "effekta/checker.hpp"
#include "golden.hpp"

using namespace effekta;

namespace {

TypeAndEffect infer(const std::string& text, const Signatures& sigs) {
  Program p = parse_program(text, sigs);
  return Checker(sigs).infer_expr({}, p.main);
}

Type value_type(const std::string& defs, const std::string& name, const Signatures& sigs) {
  Program p = parse_program(defs + "return " + name, sigs);
  return Checker(sigs).infer_value({}, p.main.value(0));
}

bool same(const Effect& e, std::string_view expr) {
  const auto expected = compile(parse_effect_expr(expr));
  return eff_includes(e.automaton(), expected).yes() && eff_includes(expected, e.automaton()).yes();
}

Type arrow(Type a, std::string_view eff, Type b) { return Type::arrow(a, Effect(parse_effect_expr(eff)), b); }

}  // namespace

TEST_CASE("subtyping") {
  CHECK(subtype(Type::nat(), Type::nat()) == Verdict::Yes);
  CHECK(subtype(Type::nat(), Type::boolean()) == Verdict::No);
  CHECK(subtype(Type::bot(), arrow(Type::nat(), "eps", Type::nat())) == Verdict::Yes);
  CHECK(subtype(Type::nat(), Type::bot()) == Verdict::No);
  const Type pure = arrow(Type::nat(), "eps", Type::nat());
  const Type may = arrow(Type::nat(), "eps | raise_e", Type::nat());
  CHECK(subtype(pure, may) == Verdict::Yes);
  CHECK(subtype(may, pure) == Verdict::No);
  // contravariant parameter
  CHECK(subtype(arrow(Type::nat(), "eps", Type::nat()), arrow(Type::bot(), "eps", Type::nat())) == Verdict::Yes);
  CHECK(subtype(arrow(Type::bot(), "eps", Type::nat()), arrow(Type::nat(), "eps", Type::nat())) == Verdict::No);
}

TEST_CASE("typing the function examples") {
  const Type predfun = value_type(golden::predfun, "predfun", golden::exception_sigs());
  CHECK(predfun.str() == "Nat -[eps | raise_PredZero]-> Nat");

  auto app = infer(golden::predfun + "predfun 0", golden::exception_sigs());
  CHECK(app.type == Type::nat());
  CHECK(same(app.effect, "eps | raise_PredZero"));

  CHECK(same(value_type(golden::chfun_up, "chfun_up", golden::nondet_sigs()).latent(), "choose . choose*"));
  CHECK(same(value_type(golden::chfun_down, "chfun_down", golden::nondet_sigs()).latent(), "choose*"));
  CHECK(same(value_type(golden::wfun_up, "wfun_up", golden::output_sigs()).latent(), "(write_l . write_l2)^w"));
  CHECK(same(infer(golden::wfun_down + "wfun_down 2", golden::output_sigs()).effect,
             "(write_l . write_l2) . (write_l . write_l2)*"));
  CHECK(same(infer(golden::wfun_down_star + "wfun_down 2", golden::output_sigs()).effect, "(write_l . write_l2)*"));

  CHECK(infer("return 0", {}).type == Type::nat());
  CHECK(infer("return 0", {}).effect.is_pure());
  CHECK(infer("return unit", {}).type == Type::unit());
  CHECK(Checker({}).infer_value({{"x", Type::boolean()}}, Value::var("x")) == Type::boolean());
}

TEST_CASE("typing handlers") {
  auto h = infer(golden::predfun + golden::with_h + "predfun 0", golden::exception_sigs());
  CHECK(h.type == Type::nat());
  CHECK(same(h.effect, "eps"));

  auto h1 = infer(golden::wfun_up + golden::with_h1 + "wfun_up 0", golden::output_sigs());
  CHECK(h1.type == Type::unit());
  CHECK(same(h1.effect, "(write_l . write_l)^w"));

  auto h2 = infer(golden::wfun_up + golden::with_h2 + "wfun_up 0", golden::output_sigs());
  CHECK(same(h2.effect, "(write_l . (eps | write_l))^w"));
  auto h2d = infer(golden::wfun_down + golden::with_h2 + "wfun_down 3", golden::output_sigs());
  CHECK(same(h2d.effect, "(write_l . (eps | write_l)) . (write_l . (eps | write_l))*"));

  Checker c(golden::exception_sigs());
  Program p = parse_program(golden::with_h + "return 0", golden::exception_sigs());
  ExtractedFilter f = c.extract_filter({}, Type::nat(), p.main.handler());
  CHECK(f.out == Type::nat());
  REQUIRE(f.filter.clauses.size() == 1);
  CHECK(f.filter.clauses[0].stop);
  CHECK(eff_equal(f.filter.clauses[0].effect, eps_automaton()));
  CHECK(eff_equal(f.filter.final_effect, eps_automaton()));

  Program empty = parse_program("with {finally x -> return x} handle return true", {});
  ExtractedFilter g = Checker({}).extract_filter({}, Type::boolean(), empty.main.handler());
  CHECK(g.out == Type::boolean());
  CHECK(g.filter.clauses.empty());
}

TEST_CASE("type errors name the rule") {
  Report r = check_program(parse_program("true false", {}));
  REQUIRE_FALSE(r.ok());
  CHECK(r.diagnostics[0].find("callee is not a function type") != std::string::npos);

  auto sigs = golden::exception_sigs();
  try {
    infer("with {raise_e() =c -> return 0; finally x -> return x} handle raise_e()", sigs);
    FAIL("continue clause on Bot accepted");
  } catch (const TypeError& e) {
    CHECK(e.rule == "t-continue");
    CHECK(std::string(e.what()) == "clause result Nat not subtype of Bot");
  }
  CHECK_THROWS_AS(infer("do x <- return 0; if x then return 0 else return 1", {}), TypeError);
  CHECK_THROWS_AS(infer("if true then return 0 else return unit", {}), TypeError);
  CHECK_THROWS_AS(infer("return y", {}), TypeError);
  // latent effect too small
  CHECK_THROWS_AS(infer("return (fun(x: Nat): Nat ! eps -> raise_e())", sigs), TypeError);
  CHECK_THROWS_AS(infer("write_l(true)", golden::output_sigs()), TypeError);

  Report ok = check_program(parse_program("return unit", {}));
  REQUIRE(ok.ok());
  CHECK(ok.result->type == Type::unit());
  CHECK(ok.result->effect.is_pure());
}

TEST_CASE("substitution preserves typing") {
  auto sigs = golden::output_sigs();
  Program p = parse_program(golden::wfun_down + "wfun_down x", sigs);
  Checker c(sigs);
  TypeAndEffect open = c.infer_expr({{"x", Type::nat()}}, p.main);
  for (int n = 0; n < 3; ++n) {
    TypeAndEffect closed = c.infer_expr({}, substitute(p.main, {{"x", Value::nat(n)}}));
    CHECK(subtype(closed, open) != Verdict::No);
  }
}
