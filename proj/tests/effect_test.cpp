#include "doctest.h"
#include "effekta/effect.hpp"

using namespace effekta;

namespace {

EffectAutomaton E(std::string_view s) { return compile(parse_effect_expr(s)); }

Word W(std::initializer_list<std::string_view> names) {
  Word w;
  for (auto n : names) w.push_back(intern(n));
  return w;
}

bool equal(const EffectAutomaton& a, const EffectAutomaton& b) { return eff_equal(a, b); }

}  // namespace

TEST_CASE("effect expressions print and parse back") {
  for (std::string_view s : {"eps", "raise_PredZero", "eps | raise_PredZero", "(write_l . write_l2)^w",
                             "choose* . choose", "(a | b) . c*", "a . (b . c)", "a^w*"}) {
    CHECK(parse_effect_expr(s).str() == s);
  }
  CHECK_THROWS_AS(parse_effect_expr("a . "), EffectSyntaxError);
  CHECK_THROWS_AS(parse_effect_expr("(a"), EffectSyntaxError);
  CHECK_THROWS_AS(parse_effect_expr("a^v"), EffectSyntaxError);
}

TEST_CASE("compile denotes the expected languages") {
  auto eps = E("eps");
  CHECK(eff_member(Word{}, eps));
  CHECK_FALSE(has_infinite_words(eps));
  CHECK(eff_enumerate(eps, 3).words == std::vector<Word>{Word{}});

  auto w = E("(write_l . write_l2)^w");
  CHECK(eff_member(Lasso{{}, W({"write_l", "write_l2"})}, w));
  CHECK_FALSE(eff_member(Lasso{{}, W({"write_l"})}, w));
  CHECK_FALSE(eff_member(Word{}, w));
  auto en = eff_enumerate(w, 4);
  CHECK(en.words.empty());
  REQUIRE(en.lassos.size() == 1);
  CHECK(en.lassos[0] == Lasso{{}, W({"write_l", "write_l2"})});

  auto ch = E("choose* . choose");
  CHECK(eff_member(W({"choose"}), ch));
  CHECK(eff_member(W({"choose", "choose"}), ch));
  CHECK_FALSE(eff_member(Word{}, ch));
  CHECK(eff_enumerate(ch, 2).words == std::vector<Word>{W({"choose"}), W({"choose", "choose"})});
  CHECK(eff_enumerate(ch, 2).lassos.empty());
}

TEST_CASE("concatenation and union") {
  CHECK(equal(eff_concat(E("eps"), E("a . b | c")), E("a . b | c")));
  CHECK(equal(eff_concat(E("a . b | c"), E("eps")), E("a . b | c")));
  auto rr = eff_concat(E("raise_e"), E("raise_f"));
  CHECK(eff_enumerate(rr, 3).words == std::vector<Word>{W({"raise_e", "raise_f"})});
  CHECK(equal(eff_concat(E("write_l^w"), E("write_l2")), E("write_l^w")));
  CHECK(equal(eff_union(E("a . b*"), E("a . b*")), E("a . b*")));
  auto u = eff_union(E("eps"), E("raise_PredZero"));
  CHECK(eff_enumerate(u, 2).words == std::vector<Word>{Word{}, W({"raise_PredZero"})});
  auto cc = eff_union(E("choose"), E("choose . choose"));
  CHECK(eff_enumerate(cc, 4).words == std::vector<Word>{W({"choose"}), W({"choose", "choose"})});
  // associativity on a sample triple
  auto x = E("a | eps"), y = E("b^w | c"), z = E("a*");
  CHECK(equal(eff_concat(eff_concat(x, y), z), eff_concat(x, eff_concat(y, z))));
}

TEST_CASE("omega skips empty components") {
  CHECK(equal(E("eps^w"), E("eps")));
  CHECK(equal(E("(a | eps)^w"), E("a^w")));
  CHECK(equal(E("(a . (eps | a))^w"), E("a^w")));
  CHECK(equal(E("(a | b^w)^w"), E("a^w | a* . b^w")));
  auto om = E("(a . b*)^w");
  CHECK(eff_member(Lasso{{}, W({"a"})}, om));
  CHECK(eff_member(Lasso{{}, W({"a", "b"})}, om));
  CHECK_FALSE(eff_member(Lasso{W({"a"}), W({"b"})}, om));
}

TEST_CASE("inclusion answers with witnesses") {
  CHECK(eff_includes(E("eps"), E("eps | raise_PredZero")).yes());
  auto back = eff_includes(E("eps | raise_PredZero"), E("eps"));
  REQUIRE(back.no());
  CHECK(std::get<Word>(*back.witness) == W({"raise_PredZero"}));
  CHECK(eff_includes(E("eps"), E("raise_PredZero")).no());

  auto ww = E("(write_l . write_l)^w");
  auto alpha = E("(write_l . (eps | write_l))^w");
  CHECK(eff_includes(ww, alpha).yes());
  CHECK(eff_includes(alpha, ww).yes());

  auto om = eff_includes(E("(a . b*)^w"), E("a^w"));
  REQUIRE(om.no());
  auto l = std::get<Lasso>(*om.witness);
  CHECK(eff_member(l, E("(a . b*)^w")));
  CHECK_FALSE(eff_member(l, E("a^w")));

  // classic case where subset construction alone is inexact
  CHECK(eff_includes(E("(a | b)* . b^w"), E("(a | b)* . b^w")).yes());
  CHECK(eff_includes(E("(a | b)^w"), E("(a | b)* . b^w")).no());
  CHECK(eff_includes(E("(a* . b)^w"), E("(b* . a)^w")).no());
  CHECK(eff_includes(E("(a . b)^w | (b . a)^w"), E("(a | b)^w")).yes());
}

TEST_CASE("prefix membership") {
  auto w = E("(write_l . write_l2)^w");
  CHECK(eff_prefix_member(W({"write_l", "write_l2", "write_l"}), w));
  CHECK_FALSE(eff_prefix_member(W({"write_l", "write_l"}), w));
  CHECK(eff_prefix_member(Word{}, w));
}

TEST_CASE("filter on the handler examples") {
  HandlerFilter none{{}, E("eps")};
  CHECK(equal(filter_apply(none, E("eps")), E("eps")));

  HandlerFilter h{{{intern("raise_PredZero"), true, E("eps")}}, E("eps")};
  CHECK(equal(filter_apply(h, E("eps | raise_PredZero")), E("eps")));

  HandlerFilter h1{{{intern("write_l2"), false, E("write_l")}}, E("eps")};
  CHECK(equal(filter_apply(h1, E("(write_l . write_l2)^w")), E("(write_l . write_l)^w")));

  HandlerFilter h2{{{intern("write_l2"), false, E("eps | write_l")}}, E("eps")};
  CHECK(equal(filter_apply(h2, E("(write_l . write_l2)^w")), E("(write_l . (eps | write_l))^w")));
  CHECK(equal(filter_apply(h2, E("(write_l . write_l2) . (write_l . write_l2)*")),
              E("(write_l . (eps | write_l)) . (write_l . (eps | write_l))*")));

  // an infinite run emitting nothing yields the finite word emitted so far
  HandlerFilter silent{{{intern("a"), false, E("eps")}}, E("z")};
  CHECK(equal(filter_apply(silent, E("b . a^w")), E("b")));
  CHECK(equal(filter_apply(silent, E("b . a*")), E("b . z")));
}

TEST_CASE("describe reads back an equivalent expression") {
  for (std::string_view s : {"eps", "a . b | c", "(write_l . write_l2)^w", "choose* . choose",
                             "a . (b | c)^w | d", "(a . b*)^w"}) {
    auto a = E(s);
    CHECK(equal(compile(describe(a)), a));
  }
}
