#include "effekta/semantics.hpp"

namespace effekta {

std::string Conf::str() const {
  switch (kind_) {
    case Kind::Exp: return expr_->str();
    case Kind::Val: return value_->str();
    case Kind::Wrong: return "wrong";
  }
  return "?";
}

namespace {

std::optional<Value> prim_apply(PrimOp p, const Value& v) {
  auto n = v.numeral();
  if (!n) return std::nullopt;
  switch (p) {
    case PrimOp::Pred: return *n == 0 ? Value::zero() : v.pred();
    case PrimOp::IsZero: return Value::boolean(*n == 0);
    case PrimOp::Even: return Value::boolean(*n % 2 == 0);
  }
  return std::nullopt;
}

Bindings zip(const std::vector<std::string>& names, const std::vector<Value>& vs) {
  Bindings b;
  for (std::size_t i = 0; i < names.size() && i < vs.size(); ++i) b.emplace_back(names[i], vs[i]);
  return b;
}

std::optional<Expr> handle(const Handler& h, const Expr& body) {
  switch (body.kind()) {
    case Expr::Kind::Do: {
      Handler inner{h.clauses, body.binder(), Expr::with(h, body.child(1))};
      return Expr::with(std::move(inner), body.child(0));
    }
    case Expr::Kind::Return: return Expr::bind(h.final_binder, body, h.final_body);
    case Expr::Kind::Op: {
      const Clause* c = h.find(body.op());
      if (!c) return Expr::bind(h.final_binder, body, h.final_body);
      Expr e = substitute(c->body, zip(c->params, body.values()));
      if (c->stop) return e;
      return Expr::bind(h.final_binder, e, h.final_body);
    }
    default: break;
  }
  if (auto next = pure_step(body)) return Expr::with(h, *next);
  return std::nullopt;
}

}  // namespace

std::optional<Expr> pure_step(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::App: {
      const Value& f = e.value(0);
      if (f.kind() != Value::Kind::Fun) return std::nullopt;
      const FunData& d = f.fun();
      Expr body = d.body;
      if (d.self != "_") body = substitute(body, {{d.self, f}});
      return substitute(body, {{d.param, e.value(1)}});
    }
    case Expr::Kind::If: {
      auto t = e.value(0).truth();
      if (!t) return std::nullopt;
      return *t ? e.child(0) : e.child(1);
    }
    case Expr::Kind::Prim: {
      auto r = prim_apply(e.prim_op(), e.value(0));
      if (!r) return std::nullopt;
      return Expr::ret(*r);
    }
    case Expr::Kind::With: return handle(e.handler(), e.child(0));
    default: return std::nullopt;
  }
}

std::optional<MonadicStep> monadic_step(const Expr& e, const Semantics& s) {
  if (e.kind() == Expr::Kind::Do) {
    const Expr& first = e.child(0);
    if (first.kind() == Expr::Kind::Return)
      return MonadicStep{unit(s.tag, substitute(e.child(1), {{e.binder(), first.value(0)}})), {}};
    auto inner = monadic_step(first, s);
    if (!inner) return std::nullopt;
    const std::string& x = e.binder();
    const Expr& rest = e.child(1);
    return MonadicStep{fmap<Expr>(inner->result, [&](const Expr& e1) { return Expr::bind(x, e1, rest); }),
                       inner->label};
  }
  if (e.kind() == Expr::Kind::Op) {
    auto impl = s.impls.find(e.op());
    if (impl == s.impls.end()) return std::nullopt;
    auto m = mrun(s.tag, impl->second, e.values());
    if (!m) return std::nullopt;
    return MonadicStep{fmap<Expr>(*m, [](const Value& v) { return Expr::ret(v); }), {e.op()}};
  }
  if (auto next = pure_step(e)) return MonadicStep{unit(s.tag, *next), {}};
  return std::nullopt;
}

M<Conf> conf_step(const Conf& c, const Semantics& s) {
  if (c.is_result()) return unit(s.tag, c);
  const Expr& e = c.expr();
  if (e.kind() == Expr::Kind::Return) return unit(s.tag, Conf::val(e.value(0)));
  auto st = monadic_step(e, s);
  if (!st) return unit(s.tag, Conf::wrong());
  return fmap<Conf>(st->result, [](const Expr& x) { return Conf::exp(x); });
}

M<Conf> step_all(const M<Conf>& m, const Semantics& s) {
  return bind<Conf>(m, [&](const Conf& c) { return conf_step(c, s); });
}

M<Conf> kleisli_iterate(const Conf& c, int n, const Semantics& s) {
  M<Conf> m = unit(s.tag, c);
  for (int i = 0; i < n; ++i) m = step_all(m, s);
  return m;
}

bool is_result(const M<Conf>& m) {
  for (const auto& c : m.items)
    if (!c.is_result()) return false;
  return true;
}

M<Conf> res_extract(const M<Conf>& m) {
  return bind<Conf>(m, [&](const Conf& c) { return c.is_result() ? unit(m.tag, c) : bottom<Conf>(m.tag); });
}

std::string show(const M<Conf>& m) {
  return show(m, [](const Conf& c) { return c.str(); });
}

std::string show(const M<Expr>& m) {
  return show(m, [](const Expr& e) { return e.str(); });
}

Outcome finitary_sem(const Expr& e, int budget, const Semantics& s, std::vector<M<Conf>>* trace) {
  M<Conf> m = unit(s.tag, Conf::exp(e));
  if (trace) trace->push_back(m);
  for (int i = 0;; ++i) {
    if (is_result(m)) return {true, m, i};
    if (i == budget) return {false, m, budget};
    m = step_all(m, s);
    if (trace) trace->push_back(m);
  }
}

Chain approximant_chain(const Expr& e, int max_n, const Semantics& s) {
  Chain chain;
  M<Conf> m = unit(s.tag, Conf::exp(e));
  for (int n = 0; n <= max_n; ++n) {
    if (n > 0) m = step_all(m, s);
    M<Conf> r = res_extract(m);
    if (!chain.entries.empty()) {
      if (!order_leq(chain.entries.back(), r)) chain.increasing = false;
      if (is_result(m) && chain.entries.back() == r) {
        if (!chain.converged) chain.converged_at = n - 1;
        chain.converged = true;
      }
    }
    chain.entries.push_back(std::move(r));
  }
  return chain;
}

namespace {

std::optional<Value> fold_value(const Value& v, const Aliases& aliases) {
  if (v.kind() == Value::Kind::Fun && v.free_vars().empty()) {
    for (const auto& [name, a] : aliases)
      if (a == v) return Value::var(name);
  }
  return std::nullopt;
}

Value fold(const Value& v, const Aliases& aliases) {
  if (auto a = fold_value(v, aliases)) return *a;
  return v;
}

std::vector<Value> fold_all(const std::vector<Value>& vs, const Aliases& aliases) {
  std::vector<Value> out;
  for (const auto& v : vs) out.push_back(fold(v, aliases));
  return out;
}

Expr fold(const Expr& e, const Aliases& aliases);

// `do y <- c; if y then a else b` with y used nowhere else
std::optional<Expr> inline_test(const Expr& e, const Aliases& aliases) {
  if (e.kind() != Expr::Kind::Do) return std::nullopt;
  const Expr& rest = e.child(1);
  const std::string& y = e.binder();
  if (rest.kind() != Expr::Kind::If || !(rest.value(0) == Value::var(y))) return std::nullopt;
  for (int i = 0; i < 2; ++i) {
    const auto& fv = rest.child(i).free_vars();
    if (std::binary_search(fv.begin(), fv.end(), y)) return std::nullopt;
  }
  const Expr& first = e.child(0);
  Value cond = Value::unit();
  if (first.kind() == Expr::Kind::Return) {
    cond = fold(first.value(0), aliases);
  } else if (first.kind() == Expr::Kind::Prim) {
    cond = Value::var(std::string(prim_name(first.prim_op())) + "(" + fold(first.value(0), aliases).str() + ")");
  } else {
    return std::nullopt;
  }
  return Expr::cond(cond, fold(rest.child(0), aliases), fold(rest.child(1), aliases));
}

Expr fold(const Expr& e, const Aliases& aliases) {
  if (auto t = inline_test(e, aliases)) return *t;
  switch (e.kind()) {
    case Expr::Kind::App: return Expr::app(fold(e.value(0), aliases), fold(e.value(1), aliases));
    case Expr::Kind::Op: return Expr::op(e.op(), fold_all(e.values(), aliases));
    case Expr::Kind::Return: return Expr::ret(fold(e.value(0), aliases));
    case Expr::Kind::Do: return Expr::bind(e.binder(), fold(e.child(0), aliases), fold(e.child(1), aliases));
    case Expr::Kind::If:
      return Expr::cond(fold(e.value(0), aliases), fold(e.child(0), aliases), fold(e.child(1), aliases));
    case Expr::Kind::Prim:
      if (auto r = prim_apply(e.prim_op(), e.value(0))) return Expr::ret(*r);
      return Expr::prim(e.prim_op(), fold(e.value(0), aliases));
    case Expr::Kind::With: return Expr::with(e.handler(), fold(e.child(0), aliases));
  }
  return e;
}

}  // namespace

std::string trace_line(const M<Conf>& m, const Aliases& aliases) {
  return show(m, [&](const Conf& c) {
    if (c.kind() == Conf::Kind::Exp) return fold(c.expr(), aliases).str();
    if (c.kind() == Conf::Kind::Val) return fold(c.value(), aliases).str();
    return c.str();
  });
}

std::vector<std::string> normalized_trace(const std::vector<M<Conf>>& trace, const Aliases& aliases) {
  std::vector<std::string> out;
  for (const auto& m : trace) {
    std::string line = trace_line(m, aliases);
    if (out.empty() || out.back() != line) out.push_back(std::move(line));
  }
  return out;
}

}  // namespace effekta
