#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "effekta/monad.hpp"
#include "effekta/syntax.hpp"

namespace effekta {

class Conf {
 public:
  enum class Kind { Exp, Val, Wrong };

  static Conf exp(Expr e) { return Conf(Kind::Exp, std::move(e), std::nullopt); }
  static Conf val(Value v) { return Conf(Kind::Val, std::nullopt, std::move(v)); }
  static Conf wrong() { return Conf(Kind::Wrong, std::nullopt, std::nullopt); }

  Kind kind() const { return kind_; }
  bool is_result() const { return kind_ != Kind::Exp; }
  const Expr& expr() const { return *expr_; }
  const Value& value() const { return *value_; }
  std::string str() const;

  friend bool operator==(const Conf& a, const Conf& b) {
    return a.kind_ == b.kind_ && a.expr_ == b.expr_ && a.value_ == b.value_;
  }

 private:
  Conf(Kind k, std::optional<Expr> e, std::optional<Value> v) : kind_(k), expr_(std::move(e)), value_(std::move(v)) {}
  Kind kind_;
  std::optional<Expr> expr_;
  std::optional<Value> value_;
};

struct StepLabel {
  std::optional<Symbol> raised;  // set on steps of an operation call

  friend bool operator==(const StepLabel&, const StepLabel&) = default;
};

struct MonadicStep {
  M<Expr> result;
  StepLabel label;
};

struct Semantics {
  MonadTag tag;
  Impls impls;
};

std::optional<Expr> pure_step(const Expr& e);
std::optional<MonadicStep> monadic_step(const Expr& e, const Semantics& s);
M<Conf> conf_step(const Conf& c, const Semantics& s);
M<Conf> step_all(const M<Conf>& m, const Semantics& s);
M<Conf> kleisli_iterate(const Conf& c, int n, const Semantics& s);

bool is_result(const M<Conf>& m);
M<Conf> res_extract(const M<Conf>& m);

std::string show(const M<Conf>& m);
std::string show(const M<Expr>& m);

struct Outcome {
  bool converged;
  M<Conf> result;  // the result when converged, else the last element reached
  int steps;       // steps to convergence, or the budget
};

// `trace`, when given, receives every element from unit(e) on.
Outcome finitary_sem(const Expr& e, int budget, const Semantics& s, std::vector<M<Conf>>* trace = nullptr);

struct Chain {
  std::vector<M<Conf>> entries;  // entry n is res(step^n(e))
  bool increasing = true;
  bool converged = false;
  int converged_at = -1;  // first n from which the chain is constant on a result
};

Chain approximant_chain(const Expr& e, int max_n, const Semantics& s);

// Display form of a configuration for traces: named closed functions are
// shown by name, `do y <- c; if y ...` tests are shown inline and closed
// primitive calls are shown evaluated.
using Aliases = std::vector<std::pair<std::string, Value>>;
std::string trace_line(const M<Conf>& m, const Aliases& aliases);
// Trace lines with consecutive repetitions dropped.
std::vector<std::string> normalized_trace(const std::vector<M<Conf>>& trace, const Aliases& aliases);

}  // namespace effekta
