#include "doctest.h"
#include "effekta/syntax.hpp"

using namespace effekta;

namespace {

Signatures sigs() {
  Signatures s;
  s.insert_or_assign(intern("raise_PredZero"), OpSignature{{}, Type::bot()});
  s.insert_or_assign(intern("choose"), OpSignature{{}, Type::boolean()});
  s.insert_or_assign(intern("write_l"), OpSignature{{Type::nat()}, Type::unit()});
  s.insert_or_assign(intern("write_l2"), OpSignature{{Type::nat()}, Type::unit()});
  return s;
}

Expr P(std::string_view text) { return parse_expr(text, sigs()); }

const char* predfun =
    "fun(x: Nat): Nat ! eps | raise_PredZero -> "
    "do y <- iszero(x); if y then raise_PredZero() else pred(x)";

const char* chfun_up =
    "rec f(x: Nat): Nat ! choose* . choose = "
    "do y <- choose(); if y then return x else f succ(x)";

std::vector<std::string> names(std::initializer_list<const char*> xs) { return {xs.begin(), xs.end()}; }

}  // namespace

TEST_CASE("parse small programs") {
  CHECK(P("return 0") == Expr::ret(Value::zero()));
  CHECK(P("return 3") == Expr::ret(Value::nat(3)));
  CHECK(P("return succ(succ(0))") == Expr::ret(Value::nat(2)));

  Value f = parse_value(predfun, sigs());
  REQUIRE(f.kind() == Value::Kind::Fun);
  CHECK(f.fun().self == "_");
  const Expr& body = f.fun().body;
  REQUIRE(body.kind() == Expr::Kind::Do);
  CHECK(body.binder() == "y");
  CHECK(body.child(0) == Expr::prim(PrimOp::IsZero, Value::var("x")));
  const Expr& branch = body.child(1);
  REQUIRE(branch.kind() == Expr::Kind::If);
  CHECK(branch.value(0) == Value::var("y"));
  CHECK(branch.child(0) == Expr::op(intern("raise_PredZero"), {}));
  CHECK(branch.child(1) == Expr::prim(PrimOp::Pred, Value::var("x")));
  CHECK(f.fun().type().str() == "Nat -[eps | raise_PredZero]-> Nat");
}

TEST_CASE("parse errors carry positions") {
  try {
    P("do x <- choose(); x");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 1);
    CHECK(e.column == 19);
  }
  CHECK_THROWS_AS(P("choose(1)"), ParseError);
  CHECK_THROWS_AS(P("undeclared()"), ParseError);
  CHECK_THROWS_AS(P("with {choose() =c -> return unit, choose() =s -> return unit; finally x -> return x} handle "
                    "return 0"),
                  ParseError);
  CHECK_THROWS_AS(P("with {write_l() =c -> return unit; finally x -> return x} handle return 0"), ParseError);
  CHECK_THROWS_AS(P("return"), ParseError);
  CHECK_THROWS_AS(P("return 0 0"), ParseError);
  CHECK_THROWS_AS(P("fun(x: Nat): Nat ! a . -> return x"), ParseError);
  try {
    P("return 0;\n  do");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(e.column == 5);
  }
}

TEST_CASE("sugar and definitions") {
  Expr s = P("write_l(0); write_l2(0); return unit");
  REQUIRE(s.kind() == Expr::Kind::Do);
  CHECK(s.binder() == "_");
  CHECK(s.child(1).kind() == Expr::Kind::Do);

  Program p = parse_program("def one = 1;\ndef g = (fun(x: Nat): Nat ! eps -> return x);\ng one", sigs());
  CHECK(p.main.kind() == Expr::Kind::App);
  CHECK(p.main.value(1) == Value::nat(1));
  CHECK(p.main.free_vars().empty());
  CHECK_THROWS_AS(parse_program("def bad = y;\nreturn bad", sigs()), ParseError);

  Expr h = P("with {raise_PredZero() =s -> return 0; finally x -> return x} handle (fun(x: Nat): Nat ! eps -> "
             "return x) 5");
  REQUIRE(h.kind() == Expr::Kind::With);
  CHECK(h.handler().clauses.size() == 1);
  CHECK(h.handler().clauses[0].stop);
  CHECK(h.child(0).kind() == Expr::Kind::App);
  CHECK(P("(return 0)") == P("return 0"));
}

TEST_CASE("printing is stable under reparsing") {
  for (const char* text :
       {"return 0", "write_l(0); write_l2(0); return unit",
        "do y <- (do z <- choose(); return z); if y then return 0 else return 1",
        "with {write_l2(x) =c -> (if true then return unit else write_l(x)); finally x -> return x} handle "
        "write_l2(0)",
        "with {finally x -> return x} handle return unit",
        "(rec f(x: Nat): Nat -[write_l]-> Unit ! eps = return (fun(u: Nat): Unit ! write_l -> write_l(u))) 0"}) {
    const std::string once = P(text).str();
    const std::string twice = P(once).str();
    CHECK(once == twice);
    CHECK(P(once) == P(text));
  }
  for (const char* text : {predfun, chfun_up}) {
    const Value v = parse_value(text, sigs());
    CHECK(parse_value(v.str(), sigs()) == v);
    CHECK(parse_value(v.str(), sigs()).str() == v.str());
  }
  CHECK(parse_value(chfun_up, sigs()).str() ==
        "(rec f(x: Nat): Nat ! choose* . choose = do y <- choose(); if y then return x else f succ(x))");
}

TEST_CASE("substitution") {
  CHECK(substitute(P("return x"), {{"x", Value::zero()}}) == P("return 0"));

  Value chf = parse_value(chfun_up, sigs());
  Expr step = substitute(chf.fun().body, {{"f", chf}, {"x", Value::zero()}});
  REQUIRE(step.kind() == Expr::Kind::Do);
  CHECK(step.child(0) == Expr::op(intern("choose"), {}));
  CHECK(step.child(1) == Expr::cond(Value::var("y"), Expr::ret(Value::zero()), Expr::app(chf, Value::nat(1))));

  Expr shadow = Expr::bind("x", Expr::ret(Value::var("x")), Expr::ret(Value::var("x")));
  CHECK(substitute(shadow, {{"x", Value::boolean(true)}}) ==
        Expr::bind("x", Expr::ret(Value::boolean(true)), Expr::ret(Value::var("x"))));

  for (const char* text : {"return 0", "do y <- choose(); return x"}) CHECK(substitute(P(text), {}) == P(text));

  // an open range value is renamed around
  Expr capture = substitute(P("do y <- choose(); return x"), {{"x", Value::var("y")}});
  REQUIRE(capture.kind() == Expr::Kind::Do);
  CHECK(capture.binder() != "y");
  CHECK(capture.child(1) == Expr::ret(Value::var("y")));
  CHECK(capture.free_vars() == names({"y"}));

  // composing two substitutions
  Expr t = P("do a <- write_l(x); write_l2(y)");
  CHECK(substitute(substitute(t, {{"x", Value::nat(1)}}), {{"y", Value::nat(2)}}) ==
        substitute(t, {{"x", Value::nat(1)}, {"y", Value::nat(2)}}));
}

TEST_CASE("free variables") {
  CHECK(P("return 0").free_vars().empty());
  CHECK(parse_value("rec f(x: Nat): Nat ! eps = f x", sigs()).free_vars().empty());
  CHECK(P("do y <- choose(); if y then return z else return 0").free_vars() == names({"z"}));
  CHECK(P("with {write_l(n) =c -> write_l2(m); finally r -> g r} handle k 0").free_vars() ==
        names({"g", "k", "m"}));
  Expr e = P("do y <- choose(); if y then write_l(a) else write_l(b)");
  CHECK(substitute(e, {{"a", Value::zero()}}).free_vars() == names({"b"}));
}
