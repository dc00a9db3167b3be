#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "effekta/effect.hpp"

namespace effekta {

class Type {
 public:
  enum class Kind { Nat, Bool, Unit, Bot, Arrow };

  static Type nat() { return Type(Kind::Nat); }
  static Type boolean() { return Type(Kind::Bool); }
  static Type unit() { return Type(Kind::Unit); }
  static Type bot() { return Type(Kind::Bot); }
  static Type arrow(Type param, Effect latent, Type result);

  Kind kind() const { return kind_; }
  bool is_arrow() const { return kind_ == Kind::Arrow; }
  const Type& param() const;
  const Effect& latent() const;
  const Type& result() const;

  std::string str() const;
  friend bool operator==(const Type& a, const Type& b);

 private:
  struct Arrow;
  explicit Type(Kind k) : kind_(k) {}
  Kind kind_;
  std::shared_ptr<const Arrow> arrow_;
};

struct Type::Arrow {
  Type param;
  Effect latent;
  Type result;
};

enum class PrimOp { Pred, IsZero, Even };
std::string_view prim_name(PrimOp p);

class Expr;
struct Handler;
struct FunData;
struct ValueNode;
struct ExprNode;
struct NodeAccess;

class Value {
 public:
  enum class Kind { Var, Fun, Unit, Zero, Succ, True, False };

  static Value var(std::string name);
  static Value unit();
  static Value zero();
  static Value succ(Value v);
  static Value nat(std::uint64_t n);
  static Value boolean(bool b);
  // self "_" marks a non-recursive function (printed as fun)
  static Value fun(std::string self, std::string param, Type param_type, Type result_type,
                   Effect latent, Expr body);

  Kind kind() const;
  const std::string& name() const;  // Var
  const Value& pred() const;        // Succ
  const FunData& fun() const;       // Fun
  std::optional<std::uint64_t> numeral() const;
  std::optional<bool> truth() const;

  const std::vector<std::string>& free_vars() const;
  std::size_t hash() const;
  std::string str() const;
  const void* identity() const { return node_.get(); }

  friend bool operator==(const Value& a, const Value& b);

 private:
  friend struct NodeAccess;
  explicit Value(std::shared_ptr<const ValueNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const ValueNode> node_;
};

class Expr {
 public:
  enum class Kind { App, Op, Return, Do, If, Prim, With };

  static Expr app(Value f, Value arg);
  static Expr op(Symbol name, std::vector<Value> args);
  static Expr ret(Value v);
  static Expr bind(std::string x, Expr first, Expr rest);
  static Expr seq(Expr first, Expr rest) { return bind("_", std::move(first), std::move(rest)); }
  static Expr cond(Value c, Expr then_branch, Expr else_branch);
  static Expr prim(PrimOp p, Value arg);
  static Expr with(Handler h, Expr body);

  Kind kind() const;
  // App: value(0) applied to value(1); Op: arguments; Return/If/Prim: value(0)
  const Value& value(std::size_t i) const;
  const std::vector<Value>& values() const;
  // Do: first, rest; If: then, else; With: handled expression is child(0)
  const Expr& child(std::size_t i) const;
  const std::string& binder() const;
  Symbol op() const;
  PrimOp prim_op() const;
  const Handler& handler() const;

  const std::vector<std::string>& free_vars() const;
  std::size_t hash() const;
  std::string str() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  friend struct NodeAccess;
  explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const ExprNode> node_;
};

struct Clause {
  Symbol op;
  std::vector<std::string> params;
  Expr body;
  bool stop;
};

struct Handler {
  std::vector<Clause> clauses;
  std::string final_binder;
  Expr final_body;

  const Clause* find(Symbol op) const;
  std::string str() const;
};

struct FunData {
  std::string self, param;
  Type param_type, result_type;
  Effect latent;
  Expr body;

  Type type() const { return Type::arrow(param_type, latent, result_type); }
};

struct OpSignature {
  std::vector<Type> args;
  Type result;
};

using Signatures = std::map<Symbol, OpSignature>;

struct Program {
  Signatures signatures;
  Expr main;
  std::vector<std::pair<std::string, Value>> defs;  // in definition order
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& msg);
  int line, column;
};

Program parse_program(std::string_view text, const Signatures& sigs);
Expr parse_expr(std::string_view text, const Signatures& sigs);
Value parse_value(std::string_view text, const Signatures& sigs);
Type parse_type(std::string_view text);

using Bindings = std::vector<std::pair<std::string, Value>>;

Expr substitute(const Expr& e, const Bindings& b);
Value substitute(const Value& v, const Bindings& b);

}  // namespace effekta

template <>
struct std::hash<effekta::Value> {
  std::size_t operator()(const effekta::Value& v) const noexcept { return v.hash(); }
};

template <>
struct std::hash<effekta::Expr> {
  std::size_t operator()(const effekta::Expr& e) const noexcept { return e.hash(); }
};
