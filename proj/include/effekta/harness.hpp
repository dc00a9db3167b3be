#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "effekta/checker.hpp"
#include "effekta/interp.hpp"
#include "effekta/semantics.hpp"

namespace effekta {

enum class Status { Pass, Fail, Undecided, Precondition };
std::string_view status_name(Status s);

struct HarnessVerdict {
  std::string property;
  std::string subject;
  Status status = Status::Pass;
  std::string witness;
  bool vacuous = false;  // finitary check on a run that did not converge

  std::string str() const;
};

struct HarnessEnv {
  Signatures sigs;
  Semantics sem;
  InterpKind interp;
  InclusionBounds bounds;
};

// The default interpretation for each monad.
InterpKind default_interp(MonadTag tag);

class Harness {
 public:
  explicit Harness(HarnessEnv env);

  const HarnessEnv& env() const { return env_; }
  Checker& checker() { return checker_; }

  HarnessVerdict check_progress(const Expr& e);
  HarnessVerdict check_step_sr(const Expr& e);
  HarnessVerdict check_run_compat();
  HarnessVerdict check_finitary_soundness(const Expr& e, int budget);
  HarnessVerdict check_infinitary_soundness(const Expr& e, int max_n);

  // Progress and step subject reduction on every expression reached within
  // `budget` steps; at most `width` residuals are followed per step.
  std::vector<HarnessVerdict> check_reduction(const Expr& e, int budget, int width = 4);

  // Well-typed at type t: a value whose type is a subtype of t.
  bool result_typed(const Conf& c, const Type& t);

 private:
  HarnessEnv env_;
  Checker checker_;
};

struct TermGenerator {
  std::uint64_t seed = 1;
  int size_bound = 12;
  Signatures sigs;
  MonadTag tag = MonadTag::Exception;
};

struct Generated {
  Expr expr;
  Type type;  // the type the derivation aimed at
  TypeAndEffect inferred;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Seeded source of closed well-typed terms. Recursion only enters through
// annotated templates, so every effect stays within the exact inclusion regime.
class TermSource {
 public:
  explicit TermSource(TermGenerator gen);
  Generated next();

 private:
  Expr expr(Context& ctx, const Type& t, int size);
  Value value(const Context& ctx, const Type& t);
  Type base_type();
  std::string fresh();
  int below(int n);

  TermGenerator gen_;
  std::mt19937_64 rng_;
  Checker checker_;
  std::vector<std::pair<Value, Type>> templates_;  // closed recursive functions
  int counter_ = 0;
};

// Operation signatures and semantics used by the generator for a monad.
Signatures generator_signatures(MonadTag tag);
Semantics generator_semantics(MonadTag tag);

}  // namespace effekta
