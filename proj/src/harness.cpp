#include "effekta/harness.hpp"

#include <algorithm>
#include <sstream>

namespace effekta {

std::string_view status_name(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Undecided: return "undecided";
    case Status::Precondition: return "precondition";
  }
  return "?";
}

std::string HarnessVerdict::str() const {
  std::string s = property + " " + std::string(status_name(status));
  if (vacuous) s += " (vacuous)";
  s += ": " + subject;
  if (!witness.empty()) s += " -- " + witness;
  return s;
}

InterpKind default_interp(MonadTag tag) {
  switch (tag) {
    case MonadTag::Exception: return InterpKind::ExcSets;
    case MonadTag::NondetList: return InterpKind::NondetAll01;
    case MonadTag::Distribution: return InterpKind::DistSupport;
    case MonadTag::PointedOutput: return InterpKind::OutputExact;
  }
  return InterpKind::ExcSets;
}

Harness::Harness(HarnessEnv env) : env_(std::move(env)), checker_(env_.sigs, env_.bounds) {}

bool Harness::result_typed(const Conf& c, const Type& t) {
  if (c.kind() != Conf::Kind::Val) return false;
  try {
    return subtype(checker_.infer_value({}, c.value()), t, env_.bounds) == Verdict::Yes;
  } catch (const TypeError&) {
    return false;
  }
}

namespace {

HarnessVerdict verdict(std::string property, const Expr& e) {
  HarnessVerdict v;
  v.property = std::move(property);
  v.subject = e.str();
  return v;
}

}  // namespace

HarnessVerdict Harness::check_progress(const Expr& e) {
  HarnessVerdict v = verdict("progress", e);
  try {
    checker_.infer_expr({}, e);
  } catch (const TypeError& err) {
    v.status = Status::Precondition;
    v.witness = "ill-typed: [" + err.rule + "] " + err.what();
    return v;
  }
  if (e.kind() == Expr::Kind::Return || monadic_step(e, env_.sem)) return v;
  v.status = Status::Fail;
  v.witness = "no step";
  return v;
}

HarnessVerdict Harness::check_step_sr(const Expr& e) {
  HarnessVerdict v = verdict("subject-reduction", e);
  TypeAndEffect te{Type::unit(), Effect()};
  try {
    te = checker_.infer_expr({}, e);
  } catch (const TypeError& err) {
    v.status = Status::Precondition;
    v.witness = "ill-typed: [" + err.rule + "] " + err.what();
    return v;
  }
  auto st = monadic_step(e, env_.sem);
  if (!st) {
    v.status = Status::Precondition;
    v.witness = "does not step";
    return v;
  }
  const Effect first = st->label.raised ? Effect::op(*st->label.raised) : Effect::pure();
  bool no = false, unknown = false;
  auto residual_ok = [&](const Expr& r) {
    try {
      const TypeAndEffect rt = checker_.infer_expr({}, r);
      const Verdict ty = subtype(rt.type, te.type, env_.bounds);
      const Inclusion inc = includes(first * rt.effect, te.effect, env_.bounds);
      if (ty == Verdict::No || inc.no()) {
        if (!no) v.witness = "residual " + r.str() + " : " + rt.str() + " after " + first.str() + " exceeds " + te.str();
        no = true;
      }
      if (ty == Verdict::Unknown || inc.verdict == Verdict::Unknown) unknown = true;
      return ty == Verdict::Yes && inc.yes();
    } catch (const TypeError& err) {
      if (err.undecided) {
        unknown = true;
      } else {
        if (!no) v.witness = "residual " + r.str() + " ill-typed: " + err.what();
        no = true;
      }
      return false;
    }
  };
  // every residual is checked, the lifting may look at only some of them
  std::vector<char> ok;
  for (const auto& r : st->result.items) ok.push_back(residual_ok(r));
  const AbstractEffect lift = abstract_effect(env_.interp, first.automaton(), env_.sem.impls);
  const bool member = lift_member(lift, st->result, [&](const Expr& r) {
    const auto it = std::find(st->result.items.begin(), st->result.items.end(), r);
    return ok[it - st->result.items.begin()] != 0;
  });
  if (no) {
    v.status = Status::Fail;
  } else if (!member) {
    v.status = unknown ? Status::Undecided : Status::Fail;
    if (!unknown) v.witness = show(st->result) + " not in the lifting of " + first.str();
  }
  return v;
}

namespace {

std::vector<Value> inhabitants(const Type& t) {
  switch (t.kind()) {
    case Type::Kind::Nat: {
      std::vector<Value> vs;
      for (int n = 0; n <= 5; ++n) vs.push_back(Value::nat(n));
      return vs;
    }
    case Type::Kind::Bool: return {Value::boolean(true), Value::boolean(false)};
    case Type::Kind::Unit: return {Value::unit()};
    default: return {};
  }
}

}  // namespace

HarnessVerdict Harness::check_run_compat() {
  HarnessVerdict v;
  v.property = "run";
  v.subject = std::string(tag_name(env_.sem.tag)) + "/" + std::string(interp_name(env_.interp));
  for (const auto& [op, impl] : env_.sem.impls) {
    std::vector<std::vector<Value>> tuples{{}};
    for (const auto& t : impl.signature.args) {
      std::vector<std::vector<Value>> next;
      for (const auto& prefix : tuples)
        for (const auto& x : inhabitants(t)) {
          auto tuple = prefix;
          tuple.push_back(x);
          next.push_back(std::move(tuple));
        }
      tuples = std::move(next);
    }
    const AbstractEffect lift = abstract_effect(env_.interp, atom_automaton(op), env_.sem.impls);
    for (const auto& args : tuples) {
      auto m = mrun(env_.sem.tag, impl, args);
      if (!m) continue;
      const M<Conf> r = fmap<Conf>(*m, [](const Value& x) { return Conf::val(x); });
      if (!lift_member(lift, r, [&](const Conf& c) { return result_typed(c, impl.signature.result); })) {
        v.status = Status::Fail;
        v.witness = symbol_name(op) + " gives " + show(r);
        return v;
      }
    }
  }
  return v;
}

HarnessVerdict Harness::check_finitary_soundness(const Expr& e, int budget) {
  HarnessVerdict v = verdict("finitary", e);
  TypeAndEffect te{Type::unit(), Effect()};
  try {
    te = checker_.infer_expr({}, e);
  } catch (const TypeError& err) {
    v.status = Status::Precondition;
    v.witness = std::string("ill-typed: ") + err.what();
    return v;
  }
  const Outcome out = finitary_sem(e, budget, env_.sem);
  if (!out.converged) {
    v.vacuous = true;
    return v;
  }
  const AbstractEffect lift = abstract_effect(env_.interp, te.effect.automaton(), env_.sem.impls);
  if (!lift_member(lift, out.result, [&](const Conf& c) { return result_typed(c, te.type); })) {
    v.status = Status::Fail;
    v.witness = show(out.result) + " not in the lifting of " + te.str();
  }
  return v;
}

HarnessVerdict Harness::check_infinitary_soundness(const Expr& e, int max_n) {
  HarnessVerdict v = verdict("infinitary", e);
  TypeAndEffect te{Type::unit(), Effect()};
  try {
    te = checker_.infer_expr({}, e);
  } catch (const TypeError& err) {
    v.status = Status::Precondition;
    v.witness = std::string("ill-typed: ") + err.what();
    return v;
  }
  const Chain chain = approximant_chain(e, max_n, env_.sem);
  const AbstractEffect lift = abstract_effect(env_.interp, te.effect.automaton(), env_.sem.impls);
  for (std::size_t n = 0; n < chain.entries.size(); ++n) {
    if (!lift_member(lift, chain.entries[n], [&](const Conf& c) { return result_typed(c, te.type); })) {
      v.status = Status::Fail;
      v.witness = "approximant " + std::to_string(n) + " " + show(chain.entries[n]) + " not in the lifting of " +
                  te.str();
      return v;
    }
  }
  return v;
}

std::vector<HarnessVerdict> Harness::check_reduction(const Expr& e, int budget, int width) {
  std::vector<HarnessVerdict> out;
  std::vector<Expr> frontier{e};
  for (int step = 0; step <= budget && !frontier.empty(); ++step) {
    std::vector<Expr> next;
    for (const auto& x : frontier) {
      out.push_back(check_progress(x));
      if (x.kind() == Expr::Kind::Return) continue;
      out.push_back(check_step_sr(x));
      if (step == budget) continue;
      auto st = monadic_step(x, env_.sem);
      if (!st) continue;
      for (const auto& r : st->result.items)
        if (static_cast<int>(next.size()) < width && std::find(next.begin(), next.end(), r) == next.end())
          next.push_back(r);
    }
    frontier = std::move(next);
  }
  return out;
}

Signatures generator_signatures(MonadTag tag) {
  Signatures s;
  switch (tag) {
    case MonadTag::Exception:
      s.insert_or_assign(intern("raise_e"), OpSignature{{}, Type::bot()});
      s.insert_or_assign(intern("raise_PredZero"), OpSignature{{}, Type::bot()});
      break;
    case MonadTag::NondetList:
    case MonadTag::Distribution: s.insert_or_assign(intern("choose"), OpSignature{{}, Type::boolean()}); break;
    case MonadTag::PointedOutput:
      s.insert_or_assign(intern("write_l"), OpSignature{{Type::nat()}, Type::unit()});
      s.insert_or_assign(intern("write_l2"), OpSignature{{Type::nat()}, Type::unit()});
      break;
  }
  return s;
}

Semantics generator_semantics(MonadTag tag) {
  Semantics sem{tag, {}};
  for (const auto& [op, sig] : generator_signatures(tag)) {
    const std::string& name = symbol_name(op);
    OperationImpl impl{op, OperationImpl::Kind::Choose, "", sig};
    if (tag == MonadTag::Exception) impl = {op, OperationImpl::Kind::Raise, name.substr(6), sig};
    if (tag == MonadTag::PointedOutput) impl = {op, OperationImpl::Kind::Write, name.substr(6), sig};
    sem.impls.insert_or_assign(op, impl);
  }
  return sem;
}

namespace {

std::vector<const char*> template_texts(MonadTag tag) {
  switch (tag) {
    case MonadTag::Exception:
      return {
          "fun(x: Nat): Nat ! eps | raise_PredZero -> do y <- iszero(x); if y then raise_PredZero() else pred(x)",
          "rec f(x: Nat): Nat ! raise_e = do z <- iszero(x); if z then raise_e() else do p <- pred(x); f p",
      };
    case MonadTag::NondetList:
    case MonadTag::Distribution:
      return {
          "rec f(x: Nat): Nat ! choose . choose* = do y <- choose(); if y then return x else f succ(x)",
          "rec f(x: Nat): Nat ! choose* = do z <- iszero(x); if z then return x else "
          "do y <- choose(); if y then return x else do p <- pred(x); f p",
      };
    case MonadTag::PointedOutput:
      return {
          "rec f(x: Nat): Unit ! (write_l . write_l2)^w = write_l(x); write_l2(x); f succ(x)",
          "rec f(x: Nat): Unit ! (write_l . write_l2) . (write_l . write_l2)* = "
          "write_l(x); write_l2(x); do z <- iszero(x); if z then return unit else do p <- pred(x); f p",
      };
  }
  return {};
}

}  // namespace

TermSource::TermSource(TermGenerator gen) : gen_(std::move(gen)), rng_(gen_.seed), checker_(gen_.sigs) {
  for (const char* text : template_texts(gen_.tag)) {
    const Value f = parse_value(text, gen_.sigs);
    templates_.emplace_back(f, checker_.infer_value({}, f));
  }
}

int TermSource::below(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

std::string TermSource::fresh() { return "v" + std::to_string(counter_++); }

Type TermSource::base_type() {
  switch (below(3)) {
    case 0: return Type::nat();
    case 1: return Type::boolean();
    default: return Type::unit();
  }
}

Value TermSource::value(const Context& ctx, const Type& t) {
  std::vector<std::string> vars;
  for (const auto& [x, xt] : ctx)
    if (xt == t) vars.push_back(x);
  if (!vars.empty() && below(2) == 0) {
    Value v = Value::var(vars[below(static_cast<int>(vars.size()))]);
    if (t == Type::nat() && below(3) == 0) v = Value::succ(v);
    return v;
  }
  switch (t.kind()) {
    case Type::Kind::Nat: return Value::nat(below(4));
    case Type::Kind::Bool: return Value::boolean(below(2) == 0);
    default: return Value::unit();
  }
}

Expr TermSource::expr(Context& ctx, const Type& t, int size) {
  if (size <= 1) return Expr::ret(value(ctx, t));
  for (;;) {
    switch (below(9)) {
      case 0: return Expr::ret(value(ctx, t));
      case 1:
      case 2: {
        const Type t1 = base_type();
        const int left = 1 + below(size - 1);
        Expr first = expr(ctx, t1, left);
        const std::string x = fresh();
        ctx.emplace_back(x, t1);
        Expr rest = expr(ctx, t, size - left);
        ctx.pop_back();
        return Expr::bind(x, std::move(first), std::move(rest));
      }
      case 3: {
        const int half = std::max(1, (size - 1) / 2);
        return Expr::cond(value(ctx, Type::boolean()), expr(ctx, t, half), expr(ctx, t, half));
      }
      case 4:
        if (t == Type::nat()) return Expr::prim(PrimOp::Pred, value(ctx, Type::nat()));
        if (t == Type::boolean()) return Expr::prim(below(2) ? PrimOp::IsZero : PrimOp::Even, value(ctx, Type::nat()));
        break;
      case 5: {
        std::vector<std::pair<Symbol, const OpSignature*>> ops;
        for (const auto& [op, sig] : gen_.sigs)
          if (sig.result == t || sig.result == Type::bot()) ops.emplace_back(op, &sig);
        if (ops.empty()) break;
        const auto& [op, sig] = ops[below(static_cast<int>(ops.size()))];
        std::vector<Value> args;
        for (const auto& a : sig->args) args.push_back(value(ctx, a));
        return Expr::op(op, std::move(args));
      }
      case 6: {
        const Type t1 = base_type();
        const std::string x = fresh();
        ctx.emplace_back(x, t1);
        Expr body = expr(ctx, t, size - 1);
        const Effect latent = checker_.infer_expr(ctx, body).effect;
        ctx.pop_back();
        return Expr::app(Value::fun("_", x, t1, t, latent, std::move(body)), value(ctx, t1));
      }
      case 7: {
        std::vector<const std::pair<Value, Type>*> fits;
        for (const auto& tp : templates_)
          if (tp.second.result() == t) fits.push_back(&tp);
        if (fits.empty()) break;
        const auto* tp = fits[below(static_cast<int>(fits.size()))];
        return Expr::app(tp->first, value(ctx, Type::nat()));
      }
      case 8: {
        Expr body = expr(ctx, t, size - 1);
        const std::string y = fresh();
        std::vector<Clause> clauses;
        switch (gen_.tag) {
          case MonadTag::Exception: {
            const Symbol op = std::next(gen_.sigs.begin(), below(static_cast<int>(gen_.sigs.size())))->first;
            clauses.push_back(Clause{op, {}, Expr::ret(value(ctx, t)), true});
            break;
          }
          case MonadTag::NondetList:
          case MonadTag::Distribution:
            clauses.push_back(Clause{intern("choose"), {}, Expr::ret(Value::boolean(below(2) == 0)), false});
            break;
          case MonadTag::PointedOutput: {
            const std::string n = fresh();
            clauses.push_back(Clause{intern("write_l2"), {n}, Expr::op(intern("write_l"), {Value::var(n)}), false});
            break;
          }
        }
        return Expr::with(Handler{std::move(clauses), y, Expr::ret(Value::var(y))}, std::move(body));
      }
    }
  }
}

Generated TermSource::next() {
  for (int attempt = 0; attempt < 100; ++attempt) {
    const Type t = base_type();
    Context ctx;
    Expr e = expr(ctx, t, 1 + below(gen_.size_bound));
    try {
      TypeAndEffect te = checker_.infer_expr({}, e);
      if (subtype(te.type, t) != Verdict::Yes) continue;
      return {std::move(e), t, std::move(te)};
    } catch (const TypeError&) {
      continue;
    }
  }
  throw GenerationError("no well-typed term after 100 attempts");
}

}  // namespace effekta
