#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "effekta/effect.hpp"
#include "effekta/syntax.hpp"

namespace effekta {

struct TypeAndEffect {
  Type type;
  Effect effect;

  std::string str() const { return type.str() + " ! " + effect.str(); }
};

// Later entries shadow earlier ones.
using Context = std::vector<std::pair<std::string, Type>>;

class TypeError : public std::runtime_error {
 public:
  TypeError(std::string rule, const std::string& msg, bool undecided = false)
      : std::runtime_error(msg), rule(std::move(rule)), undecided(undecided) {}
  std::string rule;
  bool undecided;  // an inclusion check answered Unknown
};

Verdict subtype(const Type& a, const Type& b, const InclusionBounds& bounds = {});
Verdict subtype(const TypeAndEffect& a, const TypeAndEffect& b, const InclusionBounds& bounds = {});

struct ExtractedFilter {
  Type out;
  HandlerFilter filter;
};

class Checker {
 public:
  explicit Checker(Signatures sigs, InclusionBounds bounds = {});

  Type infer_value(const Context& ctx, const Value& v);
  TypeAndEffect infer_expr(const Context& ctx, const Expr& e);
  ExtractedFilter extract_filter(const Context& ctx, const Type& in, const Handler& h);

  const Signatures& signatures() const { return sigs_; }
  const InclusionBounds& bounds() const { return bounds_; }

 private:
  TypeAndEffect infer_open(const Context& ctx, const Expr& e);
  Type join(const Type& a, const Type& b, const std::string& rule, const std::string& what);
  void require_subtype(const Type& a, const Type& b, const std::string& rule, const std::string& what);
  void require_subeffect(const Effect& a, const Effect& b, const std::string& rule, const std::string& what);

  Signatures sigs_;
  InclusionBounds bounds_;
  // typings of closed terms do not depend on the context
  std::unordered_map<Value, Type> fun_memo_;
  std::unordered_map<Expr, TypeAndEffect> expr_memo_;
};

struct Report {
  std::optional<TypeAndEffect> result;
  std::vector<std::string> diagnostics;
  bool undecided = false;

  bool ok() const { return result.has_value(); }
};

Report check_program(const Program& p, const InclusionBounds& bounds = {});

}  // namespace effekta
