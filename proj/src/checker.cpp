#include "effekta/checker.hpp"

namespace effekta {

namespace {

Verdict both(Verdict a, Verdict b) {
  if (a == Verdict::No || b == Verdict::No) return Verdict::No;
  if (a == Verdict::Unknown || b == Verdict::Unknown) return Verdict::Unknown;
  return Verdict::Yes;
}

std::string format_witness(const Inclusion& inc) {
  if (!inc.witness) return "";
  if (const auto* w = std::get_if<Word>(&*inc.witness)) return format_word(*w);
  return format_lasso(std::get<Lasso>(*inc.witness));
}

}  // namespace

Verdict subtype(const Type& a, const Type& b, const InclusionBounds& bounds) {
  if (a.kind() == Type::Kind::Bot) return Verdict::Yes;
  if (a.kind() != b.kind()) return Verdict::No;
  if (!a.is_arrow()) return Verdict::Yes;
  Verdict v = subtype(b.param(), a.param(), bounds);
  if (v == Verdict::No) return v;
  v = both(v, subtype(a.result(), b.result(), bounds));
  if (v == Verdict::No) return v;
  return both(v, includes(a.latent(), b.latent(), bounds).verdict);
}

Verdict subtype(const TypeAndEffect& a, const TypeAndEffect& b, const InclusionBounds& bounds) {
  Verdict v = subtype(a.type, b.type, bounds);
  if (v == Verdict::No) return v;
  return both(v, includes(a.effect, b.effect, bounds).verdict);
}

Checker::Checker(Signatures sigs, InclusionBounds bounds) : sigs_(std::move(sigs)), bounds_(bounds) {}

void Checker::require_subtype(const Type& a, const Type& b, const std::string& rule, const std::string& what) {
  const Verdict v = subtype(a, b, bounds_);
  if (v == Verdict::Yes) return;
  if (v == Verdict::Unknown)
    throw TypeError(rule, "undecided subtype: " + what + " " + a.str() + " <= " + b.str(), true);
  throw TypeError(rule, what + " " + a.str() + " not subtype of " + b.str());
}

void Checker::require_subeffect(const Effect& a, const Effect& b, const std::string& rule, const std::string& what) {
  const Inclusion inc = includes(a, b, bounds_);
  if (inc.yes()) return;
  if (inc.verdict == Verdict::Unknown)
    throw TypeError(rule, "undecided subeffect: " + what + " " + a.str() + " <= " + b.str(), true);
  throw TypeError(rule, what + " " + a.str() + " not included in " + b.str() + "; witness " + format_witness(inc));
}

Type Checker::join(const Type& a, const Type& b, const std::string& rule, const std::string& what) {
  const Verdict ab = subtype(a, b, bounds_);
  if (ab == Verdict::Yes) return b;
  const Verdict ba = subtype(b, a, bounds_);
  if (ba == Verdict::Yes) return a;
  const bool undecided = ab == Verdict::Unknown || ba == Verdict::Unknown;
  throw TypeError(rule, (undecided ? "undecided join of " : "incompatible ") + what + " " + a.str() + " and " + b.str(),
                  undecided);
}

Type Checker::infer_value(const Context& ctx, const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Var:
      for (auto it = ctx.rbegin(); it != ctx.rend(); ++it)
        if (it->first == v.name()) return it->second;
      throw TypeError("t-var", "unbound variable " + v.name());
    case Value::Kind::Unit: return Type::unit();
    case Value::Kind::Zero: return Type::nat();
    case Value::Kind::True:
    case Value::Kind::False: return Type::boolean();
    case Value::Kind::Succ:
      require_subtype(infer_value(ctx, v.pred()), Type::nat(), "t-succ", "argument of succ");
      return Type::nat();
    case Value::Kind::Fun: break;
  }
  const bool closed = v.free_vars().empty();
  if (closed) {
    if (auto it = fun_memo_.find(v); it != fun_memo_.end()) return it->second;
  }
  const FunData& f = v.fun();
  const Type declared = f.type();
  Context inner = ctx;
  if (f.self != "_") inner.emplace_back(f.self, declared);
  inner.emplace_back(f.param, f.param_type);
  const TypeAndEffect body = infer_expr(inner, f.body);
  const std::string name = f.self == "_" ? "function body" : "body of " + f.self;
  require_subtype(body.type, f.result_type, "t-abs", name + " result");
  require_subeffect(body.effect, f.latent, "t-abs", name + " effect");
  if (closed) fun_memo_.emplace(v, declared);
  return declared;
}

TypeAndEffect Checker::infer_expr(const Context& ctx, const Expr& e) {
  if (!e.free_vars().empty()) return infer_open(ctx, e);
  if (auto it = expr_memo_.find(e); it != expr_memo_.end()) return it->second;
  TypeAndEffect te = infer_open(ctx, e);
  expr_memo_.emplace(e, te);
  return te;
}

TypeAndEffect Checker::infer_open(const Context& ctx, const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Return: return {infer_value(ctx, e.value(0)), Effect::pure()};
    case Expr::Kind::App: {
      const Type callee = infer_value(ctx, e.value(0));
      const Type arg = infer_value(ctx, e.value(1));
      if (callee.kind() == Type::Kind::Bot) return {Type::bot(), Effect::pure()};
      if (!callee.is_arrow()) throw TypeError("t-app", "callee is not a function type: " + callee.str());
      require_subtype(arg, callee.param(), "t-app", "argument");
      return {callee.result(), callee.latent()};
    }
    case Expr::Kind::Op: {
      auto sig = sigs_.find(e.op());
      const std::string name = symbol_name(e.op());
      if (sig == sigs_.end()) throw TypeError("t-op", "unknown operation " + name);
      if (sig->second.args.size() != e.values().size())
        throw TypeError("t-op", "operation " + name + " applied to " + std::to_string(e.values().size()) + " arguments");
      for (std::size_t i = 0; i < e.values().size(); ++i)
        require_subtype(infer_value(ctx, e.value(i)), sig->second.args[i], "t-op",
                        "argument " + std::to_string(i + 1) + " of " + name);
      return {sig->second.result, Effect::op(e.op())};
    }
    case Expr::Kind::Do: {
      const TypeAndEffect first = infer_expr(ctx, e.child(0));
      Context inner = ctx;
      inner.emplace_back(e.binder(), first.type);
      const TypeAndEffect rest = infer_expr(inner, e.child(1));
      return {rest.type, first.effect * rest.effect};
    }
    case Expr::Kind::If: {
      require_subtype(infer_value(ctx, e.value(0)), Type::boolean(), "t-if", "condition");
      const TypeAndEffect a = infer_expr(ctx, e.child(0));
      const TypeAndEffect b = infer_expr(ctx, e.child(1));
      return {join(a.type, b.type, "t-if", "branch types"), a.effect | b.effect};
    }
    case Expr::Kind::Prim: {
      require_subtype(infer_value(ctx, e.value(0)), Type::nat(), "t-prim",
                      "argument of " + std::string(prim_name(e.prim_op())));
      return {e.prim_op() == PrimOp::Pred ? Type::nat() : Type::boolean(), Effect::pure()};
    }
    case Expr::Kind::With: {
      const TypeAndEffect body = infer_expr(ctx, e.child(0));
      const ExtractedFilter h = extract_filter(ctx, body.type, e.handler());
      return {h.out, Effect(filter_apply(h.filter, body.effect.automaton()))};
    }
  }
  throw TypeError("t-expr", "unhandled expression");
}

ExtractedFilter Checker::extract_filter(const Context& ctx, const Type& in, const Handler& h) {
  Context fin = ctx;
  fin.emplace_back(h.final_binder, in);
  const TypeAndEffect final_te = infer_expr(fin, h.final_body);
  Type out = final_te.type;
  HandlerFilter filter{{}, final_te.effect.automaton()};
  std::vector<std::pair<const Clause*, Type>> stops;
  for (const Clause& c : h.clauses) {
    const std::string name = symbol_name(c.op);
    auto sig = sigs_.find(c.op);
    if (sig == sigs_.end()) throw TypeError("t-handler", "clause for unknown operation " + name);
    if (sig->second.args.size() != c.params.size())
      throw TypeError("t-handler", "clause for " + name + " binds " + std::to_string(c.params.size()) + " parameters");
    Context inner = ctx;
    for (std::size_t i = 0; i < c.params.size(); ++i) inner.emplace_back(c.params[i], sig->second.args[i]);
    const TypeAndEffect te = infer_expr(inner, c.body);
    if (c.stop) {
      out = join(out, te.type, "t-stop", "handler result types");
    } else {
      require_subtype(te.type, sig->second.result, "t-continue", "clause result");
    }
    filter.clauses.push_back({c.op, c.stop, te.effect.automaton()});
  }
  return {out, std::move(filter)};
}

Report check_program(const Program& p, const InclusionBounds& bounds) {
  Report r;
  try {
    Checker c(p.signatures, bounds);
    r.result = c.infer_expr({}, p.main);
  } catch (const TypeError& e) {
    r.diagnostics.push_back("[" + e.rule + "] " + e.what());
    r.undecided = e.undecided;
  }
  return r;
}

}  // namespace effekta
