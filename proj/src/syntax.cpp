#include <algorithm>
#include <atomic>
#include <stdexcept>

#include "effekta/syntax.hpp"

namespace effekta {

struct ValueNode {
  explicit ValueNode(Value::Kind k, std::size_t h = 0) : kind(k), hash(h) {}
  Value::Kind kind;
  std::string name;
  std::optional<Value> inner;
  std::shared_ptr<const FunData> fun;
  std::optional<std::uint64_t> numeral;
  std::vector<std::string> fv;
  std::size_t hash = 0;
};

struct ExprNode {
  explicit ExprNode(Expr::Kind k) : kind(k) {}
  Expr::Kind kind;
  std::vector<Value> values;
  std::vector<Expr> children;
  std::string binder;
  Symbol op = 0;
  PrimOp prim = PrimOp::Pred;
  std::shared_ptr<const Handler> handler;
  std::vector<std::string> fv;
  std::size_t hash = 0;
};

struct NodeAccess {
  static Expr make(ExprNode n) { return Expr(std::make_shared<const ExprNode>(std::move(n))); }
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_str(const std::string& s) { return std::hash<std::string>{}(s); }

using Names = std::vector<std::string>;

void add_all(Names& into, const Names& from) { into.insert(into.end(), from.begin(), from.end()); }

void add_except(Names& into, const Names& from, const Names& bound) {
  for (const auto& n : from)
    if (std::find(bound.begin(), bound.end(), n) == bound.end()) into.push_back(n);
}

void normalize(Names& n) {
  std::sort(n.begin(), n.end());
  n.erase(std::unique(n.begin(), n.end()), n.end());
}

bool contains(const Names& sorted, const std::string& x) {
  return std::binary_search(sorted.begin(), sorted.end(), x);
}

}  // namespace

// ---------------------------------------------------------------- types

Type Type::arrow(Type param, Effect latent, Type result) {
  Type t(Kind::Arrow);
  t.arrow_ = std::make_shared<const Arrow>(Arrow{std::move(param), std::move(latent), std::move(result)});
  return t;
}

const Type& Type::param() const { return arrow_->param; }
const Effect& Type::latent() const { return arrow_->latent; }
const Type& Type::result() const { return arrow_->result; }

std::string Type::str() const {
  switch (kind_) {
    case Kind::Nat: return "Nat";
    case Kind::Bool: return "Bool";
    case Kind::Unit: return "Unit";
    case Kind::Bot: return "Bot";
    case Kind::Arrow: break;
  }
  std::string p = param().str();
  if (param().is_arrow()) p = "(" + p + ")";
  return p + " -[" + latent().str() + "]-> " + result().str();
}

bool operator==(const Type& a, const Type& b) {
  if (a.kind_ != b.kind_) return false;
  if (a.kind_ != Type::Kind::Arrow || a.arrow_ == b.arrow_) return true;
  if (!(a.param() == b.param()) || !(a.result() == b.result())) return false;
  const Effect& x = a.latent();
  const Effect& y = b.latent();
  if (&x.automaton() == &y.automaton()) return true;
  if (x.source() && y.source() && x.source()->str() == y.source()->str()) return true;
  return eff_equal(x.automaton(), y.automaton());
}

std::string_view prim_name(PrimOp p) {
  switch (p) {
    case PrimOp::Pred: return "pred";
    case PrimOp::IsZero: return "iszero";
    case PrimOp::Even: return "even";
  }
  return "?";
}

// ---------------------------------------------------------------- values

Value Value::var(std::string name) {
  ValueNode n(Kind::Var);
  n.fv = {name};
  n.hash = mix(1, hash_str(name));
  n.name = std::move(name);
  return Value(std::make_shared<const ValueNode>(std::move(n)));
}

Value Value::unit() {
  static const Value v(std::make_shared<const ValueNode>(ValueNode(Kind::Unit, 2)));
  return v;
}

Value Value::zero() {
  static const Value v = [] {
    ValueNode n(Kind::Zero, 3);
    n.numeral = 0;
    return Value(std::make_shared<const ValueNode>(std::move(n)));
  }();
  return v;
}

Value Value::boolean(bool b) {
  static const Value t(std::make_shared<const ValueNode>(ValueNode(Kind::True, 4)));
  static const Value f(std::make_shared<const ValueNode>(ValueNode(Kind::False, 5)));
  return b ? t : f;
}

Value Value::succ(Value v) {
  ValueNode n(Kind::Succ);
  n.fv = v.free_vars();
  n.hash = mix(6, v.hash());
  if (auto k = v.numeral()) n.numeral = *k + 1;
  n.inner = std::move(v);
  return Value(std::make_shared<const ValueNode>(std::move(n)));
}

Value Value::nat(std::uint64_t k) {
  Value v = zero();
  for (std::uint64_t i = 0; i < k; ++i) v = succ(v);
  return v;
}

Value Value::fun(std::string self, std::string param, Type param_type, Type result_type,
                 Effect latent, Expr body) {
  ValueNode n(Kind::Fun);
  add_except(n.fv, body.free_vars(), {self, param});
  normalize(n.fv);
  n.hash = mix(mix(mix(7, hash_str(self)), hash_str(param)), body.hash());
  n.fun = std::make_shared<const FunData>(FunData{std::move(self), std::move(param), std::move(param_type),
                                                  std::move(result_type), std::move(latent), std::move(body)});
  return Value(std::make_shared<const ValueNode>(std::move(n)));
}

Value::Kind Value::kind() const { return node_->kind; }
const std::string& Value::name() const { return node_->name; }
const Value& Value::pred() const { return *node_->inner; }
const FunData& Value::fun() const { return *node_->fun; }
std::optional<std::uint64_t> Value::numeral() const { return node_->numeral; }
std::optional<bool> Value::truth() const {
  if (node_->kind == Kind::True) return true;
  if (node_->kind == Kind::False) return false;
  return std::nullopt;
}
const std::vector<std::string>& Value::free_vars() const { return node_->fv; }
std::size_t Value::hash() const { return node_->hash; }

bool operator==(const Value& a, const Value& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Value::Kind::Var: return a.name() == b.name();
    case Value::Kind::Succ:
      if (a.numeral() && b.numeral()) return *a.numeral() == *b.numeral();
      return a.pred() == b.pred();
    case Value::Kind::Fun: {
      const FunData& x = a.fun();
      const FunData& y = b.fun();
      return x.self == y.self && x.param == y.param && x.body == y.body &&
             x.param_type == y.param_type && x.result_type == y.result_type &&
             x.type() == y.type();
    }
    default: return true;
  }
}

// ---------------------------------------------------------------- expressions

namespace {

Expr finish(ExprNode n);

std::size_t hash_values(std::size_t h, const std::vector<Value>& vs) {
  for (const auto& v : vs) h = mix(h, v.hash());
  return h;
}

}  // namespace

Expr Expr::app(Value f, Value arg) {
  ExprNode n(Kind::App);
  n.values = {std::move(f), std::move(arg)};
  return finish(std::move(n));
}

Expr Expr::op(Symbol name, std::vector<Value> args) {
  ExprNode n(Kind::Op);
  n.op = name;
  n.values = std::move(args);
  return finish(std::move(n));
}

Expr Expr::ret(Value v) {
  ExprNode n(Kind::Return);
  n.values = {std::move(v)};
  return finish(std::move(n));
}

Expr Expr::bind(std::string x, Expr first, Expr rest) {
  ExprNode n(Kind::Do);
  n.binder = std::move(x);
  n.children = {std::move(first), std::move(rest)};
  return finish(std::move(n));
}

Expr Expr::cond(Value c, Expr then_branch, Expr else_branch) {
  ExprNode n(Kind::If);
  n.values = {std::move(c)};
  n.children = {std::move(then_branch), std::move(else_branch)};
  return finish(std::move(n));
}

Expr Expr::prim(PrimOp p, Value arg) {
  ExprNode n(Kind::Prim);
  n.prim = p;
  n.values = {std::move(arg)};
  return finish(std::move(n));
}

Expr Expr::with(Handler h, Expr body) {
  ExprNode n(Kind::With);
  n.handler = std::make_shared<const Handler>(std::move(h));
  n.children = {std::move(body)};
  return finish(std::move(n));
}

namespace {

Expr finish(ExprNode n) {
  std::size_t h = mix(100, static_cast<std::size_t>(n.kind));
  for (const auto& v : n.values) add_all(n.fv, v.free_vars());
  h = hash_values(h, n.values);
  switch (n.kind) {
    case Expr::Kind::Op: h = mix(h, n.op); break;
    case Expr::Kind::Prim: h = mix(h, static_cast<std::size_t>(n.prim)); break;
    case Expr::Kind::Do:
      add_all(n.fv, n.children[0].free_vars());
      add_except(n.fv, n.children[1].free_vars(), {n.binder});
      h = mix(h, hash_str(n.binder));
      break;
    case Expr::Kind::If:
      add_all(n.fv, n.children[0].free_vars());
      add_all(n.fv, n.children[1].free_vars());
      break;
    case Expr::Kind::With: {
      add_all(n.fv, n.children[0].free_vars());
      const Handler& hd = *n.handler;
      for (const auto& c : hd.clauses) {
        add_except(n.fv, c.body.free_vars(), c.params);
        h = mix(mix(mix(h, c.op), c.stop), c.body.hash());
        for (const auto& p : c.params) h = mix(h, hash_str(p));
      }
      add_except(n.fv, hd.final_body.free_vars(), {hd.final_binder});
      h = mix(mix(h, hash_str(hd.final_binder)), hd.final_body.hash());
      break;
    }
    default: break;
  }
  for (const auto& c : n.children) h = mix(h, c.hash());
  normalize(n.fv);
  n.hash = h;
  return NodeAccess::make(std::move(n));
}

}  // namespace

Expr::Kind Expr::kind() const { return node_->kind; }
const Value& Expr::value(std::size_t i) const { return node_->values.at(i); }
const std::vector<Value>& Expr::values() const { return node_->values; }
const Expr& Expr::child(std::size_t i) const { return node_->children.at(i); }
const std::string& Expr::binder() const { return node_->binder; }
Symbol Expr::op() const { return node_->op; }
PrimOp Expr::prim_op() const { return node_->prim; }
const Handler& Expr::handler() const { return *node_->handler; }
const std::vector<std::string>& Expr::free_vars() const { return node_->fv; }
std::size_t Expr::hash() const { return node_->hash; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const ExprNode& x = *a.node_;
  const ExprNode& y = *b.node_;
  if (x.hash != y.hash || x.kind != y.kind || x.op != y.op || x.prim != y.prim ||
      x.binder != y.binder || x.values != y.values || x.children != y.children) {
    return false;
  }
  if (x.kind != Expr::Kind::With) return true;
  const Handler& h = *x.handler;
  const Handler& k = *y.handler;
  if (h.final_binder != k.final_binder || !(h.final_body == k.final_body) ||
      h.clauses.size() != k.clauses.size()) {
    return false;
  }
  for (std::size_t i = 0; i < h.clauses.size(); ++i) {
    const Clause& c = h.clauses[i];
    const Clause& d = k.clauses[i];
    if (c.op != d.op || c.stop != d.stop || c.params != d.params || !(c.body == d.body)) return false;
  }
  return true;
}

const Clause* Handler::find(Symbol op) const {
  for (const auto& c : clauses)
    if (c.op == op) return &c;
  return nullptr;
}

// ---------------------------------------------------------------- printing

namespace {

void print(const Expr& e, std::string& out);

void print(const Value& v, std::string& out) {
  if (auto n = v.numeral()) {
    out += std::to_string(*n);
    return;
  }
  switch (v.kind()) {
    case Value::Kind::Var: out += v.name(); break;
    case Value::Kind::Unit: out += "unit"; break;
    case Value::Kind::True: out += "true"; break;
    case Value::Kind::False: out += "false"; break;
    case Value::Kind::Zero: out += "0"; break;
    case Value::Kind::Succ:
      out += "succ(";
      print(v.pred(), out);
      out += ")";
      break;
    case Value::Kind::Fun: {
      const FunData& f = v.fun();
      const bool plain = f.self == "_";
      out += plain ? "(fun(" : "(rec " + f.self + "(";
      out += f.param + ": " + f.param_type.str() + "): " + f.result_type.str() + " ! " +
             f.latent.str() + (plain ? " -> " : " = ");
      print(f.body, out);
      out += ")";
      break;
    }
  }
}

// Forms whose last component extends to the right as far as possible.
bool open_ended(const Expr& e) {
  return e.kind() == Expr::Kind::Do || e.kind() == Expr::Kind::If || e.kind() == Expr::Kind::With;
}

void print(const Handler& h, std::string& out) {
  out += "{";
  for (std::size_t i = 0; i < h.clauses.size(); ++i) {
    const Clause& c = h.clauses[i];
    if (i) out += ", ";
    out += symbol_name(c.op) + "(";
    for (std::size_t j = 0; j < c.params.size(); ++j) out += (j ? ", " : "") + c.params[j];
    out += c.stop ? ") =s -> " : ") =c -> ";
    print(c.body, out);
  }
  if (!h.clauses.empty()) out += "; ";
  out += "finally " + h.final_binder + " -> ";
  print(h.final_body, out);
  out += "}";
}

void print(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case Expr::Kind::App:
      print(e.value(0), out);
      out += " ";
      print(e.value(1), out);
      break;
    case Expr::Kind::Op:
      out += symbol_name(e.op()) + "(";
      for (std::size_t i = 0; i < e.values().size(); ++i) {
        if (i) out += ", ";
        print(e.value(i), out);
      }
      out += ")";
      break;
    case Expr::Kind::Return:
      out += "return ";
      print(e.value(0), out);
      break;
    case Expr::Kind::Do: {
      const bool seq = e.binder() == "_";
      if (!seq) out += "do " + e.binder() + " <- ";
      const bool parens = open_ended(e.child(0));
      if (parens) out += "(";
      print(e.child(0), out);
      if (parens) out += ")";
      out += "; ";
      print(e.child(1), out);
      break;
    }
    case Expr::Kind::If:
      out += "if ";
      print(e.value(0), out);
      out += " then ";
      print(e.child(0), out);
      out += " else ";
      print(e.child(1), out);
      break;
    case Expr::Kind::Prim:
      out += std::string(prim_name(e.prim_op())) + "(";
      print(e.value(0), out);
      out += ")";
      break;
    case Expr::Kind::With:
      out += "with ";
      print(e.handler(), out);
      out += " handle ";
      print(e.child(0), out);
      break;
  }
}

}  // namespace

std::string Value::str() const {
  std::string out;
  print(*this, out);
  return out;
}

std::string Expr::str() const {
  std::string out;
  print(*this, out);
  return out;
}

std::string Handler::str() const {
  std::string out;
  print(*this, out);
  return out;
}

// ---------------------------------------------------------------- substitution

namespace {

std::atomic<std::uint64_t> fresh_counter{0};

std::string fresh(const std::string& base) {
  std::string stem = base.substr(0, base.find('\''));
  return stem + "'" + std::to_string(++fresh_counter);
}

// Bindings restricted to the given free variables.
Bindings relevant(const Bindings& b, const Names& fv) {
  Bindings out;
  for (const auto& [x, v] : b)
    if (contains(fv, x)) out.emplace_back(x, v);
  return out;
}

bool captures(const Bindings& b, const std::string& binder) {
  for (const auto& [x, v] : b)
    if (contains(v.free_vars(), binder)) return true;
  return false;
}

Bindings without(const Bindings& b, const Names& bound) {
  Bindings out;
  for (const auto& [x, v] : b)
    if (std::find(bound.begin(), bound.end(), x) == bound.end()) out.emplace_back(x, v);
  return out;
}

Value subst(const Value& v, const Bindings& b);
Expr subst(const Expr& e, const Bindings& b);

// Substitutes under a binder, renaming it first when it would capture.
Expr under(const Expr& body, std::string& binder, const Bindings& outer) {
  Bindings inner = without(outer, {binder});
  if (inner.empty()) return body;
  if (captures(inner, binder)) {
    std::string renamed = fresh(binder);
    inner.emplace_back(binder, Value::var(renamed));
    binder = renamed;
  }
  return subst(body, inner);
}

Value subst(const Value& v, const Bindings& all) {
  const Bindings b = relevant(all, v.free_vars());
  if (b.empty()) return v;
  switch (v.kind()) {
    case Value::Kind::Var: return b.front().second;
    case Value::Kind::Succ: return Value::succ(subst(v.pred(), b));
    case Value::Kind::Fun: {
      const FunData& f = v.fun();
      std::string self = f.self, param = f.param;
      Bindings inner = without(b, {self, param});
      Expr body = f.body;
      for (std::string* x : {&self, &param}) {
        if (*x == "_" || !captures(inner, *x)) continue;
        std::string renamed = fresh(*x);
        body = subst(body, {{*x, Value::var(renamed)}});
        *x = renamed;
      }
      return Value::fun(self, param, f.param_type, f.result_type, f.latent, subst(body, inner));
    }
    default: return v;
  }
}

std::vector<Value> subst_all(const std::vector<Value>& vs, const Bindings& b) {
  std::vector<Value> out;
  out.reserve(vs.size());
  for (const auto& v : vs) out.push_back(subst(v, b));
  return out;
}

Expr subst(const Expr& e, const Bindings& all) {
  const Bindings b = relevant(all, e.free_vars());
  if (b.empty()) return e;
  switch (e.kind()) {
    case Expr::Kind::App: return Expr::app(subst(e.value(0), b), subst(e.value(1), b));
    case Expr::Kind::Op: return Expr::op(e.op(), subst_all(e.values(), b));
    case Expr::Kind::Return: return Expr::ret(subst(e.value(0), b));
    case Expr::Kind::Prim: return Expr::prim(e.prim_op(), subst(e.value(0), b));
    case Expr::Kind::If:
      return Expr::cond(subst(e.value(0), b), subst(e.child(0), b), subst(e.child(1), b));
    case Expr::Kind::Do: {
      std::string x = e.binder();
      Expr rest = under(e.child(1), x, b);
      return Expr::bind(x, subst(e.child(0), b), rest);
    }
    case Expr::Kind::With: {
      const Handler& h = e.handler();
      std::vector<Clause> clauses;
      for (const Clause& c : h.clauses) {
        Clause d = c;
        Bindings inner = without(b, c.params);
        for (auto& p : d.params) {
          if (!captures(inner, p)) continue;
          std::string renamed = fresh(p);
          d.body = subst(d.body, {{p, Value::var(renamed)}});
          p = renamed;
        }
        d.body = subst(d.body, inner);
        clauses.push_back(std::move(d));
      }
      std::string final_binder = h.final_binder;
      Expr final_body = under(h.final_body, final_binder, b);
      return Expr::with(Handler{std::move(clauses), final_binder, final_body}, subst(e.child(0), b));
    }
  }
  return e;
}

}  // namespace

Expr substitute(const Expr& e, const Bindings& b) { return subst(e, b); }
Value substitute(const Value& v, const Bindings& b) { return subst(v, b); }

ParseError::ParseError(int l, int c, const std::string& msg)
    : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg), line(l), column(c) {}

}  // namespace effekta
