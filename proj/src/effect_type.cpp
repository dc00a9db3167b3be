#include "effekta/effect.hpp"

namespace effekta {

namespace {

using Re = std::optional<EffectExpr>;  // nullopt is the empty language

bool is_eps(const Re& r) { return r && r->kind() == EffectExpr::Kind::Eps; }

Re cat(const Re& a, const Re& b) {
  if (!a || !b) return std::nullopt;
  if (is_eps(a)) return b;
  if (is_eps(b)) return a;
  return EffectExpr::concat(*a, *b);
}

Re alt(const Re& a, const Re& b) {
  if (!a) return b;
  if (!b) return a;
  if (a->str() == b->str()) return a;
  return EffectExpr::alt(*a, *b);
}

Re star(const Re& a) {
  if (!a || is_eps(a)) return EffectExpr::eps();
  if (a->kind() == EffectExpr::Kind::Star) return a;
  return EffectExpr::star(*a);
}

using Matrix = std::vector<std::vector<Re>>;

Matrix edge_matrix(const EffectAutomaton& a) {
  const int n = a.size();
  Matrix m(n + 2, std::vector<Re>(n + 2));
  for (int p = 0; p < n; ++p)
    for (const auto& e : a.edges(p)) m[p][e.target] = alt(m[p][e.target], EffectExpr::atom(e.symbol));
  return m;
}

// Eliminates the automaton states 0..n-1, leaving the path language from
// node n to node n+1.
Re eliminate(Matrix m, int n) {
  for (int k = 0; k < n; ++k) {
    const Re loop = star(m[k][k]);
    for (int i = 0; i < n + 2; ++i) {
      if (i == k || !m[i][k]) continue;
      for (int j = 0; j < n + 2; ++j) {
        if (j == k || !m[k][j]) continue;
        m[i][j] = alt(m[i][j], cat(m[i][k], cat(loop, m[k][j])));
      }
    }
    for (int i = 0; i < n + 2; ++i) m[i][k] = m[k][i] = std::nullopt;
  }
  return m[n][n + 1];
}

}  // namespace

EffectExpr describe(const EffectAutomaton& src) {
  const EffectAutomaton a = trim(src);
  const int n = a.size();
  const int S = n, T = n + 1;
  const Matrix base = edge_matrix(a);

  Matrix fin = base;
  fin[S][a.initial()] = EffectExpr::eps();
  for (int s = 0; s < n; ++s)
    if (a.fin(s)) fin[s][T] = EffectExpr::eps();
  Re result = eliminate(fin, n);

  for (int b = 0; b < n; ++b) {
    if (!a.buchi(b)) continue;
    Matrix pre = base;
    pre[S][a.initial()] = EffectExpr::eps();
    pre[b][T] = EffectExpr::eps();
    Matrix loop = base;
    for (int p = 0; p < n; ++p)
      for (const auto& e : a.edges(p)) {
        const Re x = EffectExpr::atom(e.symbol);
        if (p == b && e.target == b) loop[S][T] = alt(loop[S][T], x);
        if (p == b) loop[S][e.target] = alt(loop[S][e.target], x);
        if (e.target == b) loop[p][T] = alt(loop[p][T], x);
      }
    const Re body = eliminate(loop, n);
    if (!body) continue;
    result = alt(result, cat(eliminate(pre, n), EffectExpr::omega(*body)));
  }
  return result ? *result : EffectExpr::eps();
}

namespace {

bool pure_automaton(const EffectAutomaton& a) {
  return a.size() == 1 && a.fin(a.initial()) && a.edges(a.initial()).empty();
}

const std::shared_ptr<const EffectAutomaton>& eps_shared() {
  static const auto a = std::make_shared<const EffectAutomaton>(eps_automaton());
  return a;
}

}  // namespace

Effect::Effect() : aut_(eps_shared()), expr_(EffectExpr::eps()), pure_(true) {}

Effect::Effect(EffectExpr e)
    : aut_(std::make_shared<const EffectAutomaton>(trim(compile(e)))), expr_(std::move(e)) {
  pure_ = pure_automaton(*aut_);
}

Effect::Effect(EffectAutomaton a, std::optional<EffectExpr> e)
    : aut_(std::make_shared<const EffectAutomaton>(trim(a))), expr_(std::move(e)) {
  pure_ = pure_automaton(*aut_);
}

Effect Effect::op(Symbol s) { return Effect(atom_automaton(s), EffectExpr::atom(s)); }

EffectExpr Effect::expr() const { return expr_ ? *expr_ : describe(*aut_); }

Effect operator*(const Effect& a, const Effect& b) {
  if (a.pure_) return b;
  if (b.pure_) return a;
  std::optional<EffectExpr> e;
  if (a.expr_ && b.expr_) e = EffectExpr::concat(*a.expr_, *b.expr_);
  return Effect(eff_concat(*a.aut_, *b.aut_), std::move(e));
}

Effect operator|(const Effect& a, const Effect& b) {
  if (a.aut_ == b.aut_) return a;
  std::optional<EffectExpr> e;
  if (a.expr_ && b.expr_) e = EffectExpr::alt(*a.expr_, *b.expr_);
  return Effect(eff_union(*a.aut_, *b.aut_), std::move(e));
}

Inclusion includes(const Effect& a, const Effect& b, const InclusionBounds& bounds) {
  if (&a.automaton() == &b.automaton()) return {Verdict::Yes, std::nullopt};
  if (a.is_pure()) {
    if (accepts_epsilon(b.automaton())) return {Verdict::Yes, std::nullopt};
    return {Verdict::No, Word{}};
  }
  return eff_includes(a.automaton(), b.automaton(), bounds);
}

}  // namespace effekta
