#pragma once

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "effekta/effect.hpp"
#include "effekta/monad.hpp"

namespace effekta {

enum class InterpKind { ExcSets, NondetAll01, NondetEx01, NondetCount, OutputLength, OutputExact, DistSupport };

std::string_view interp_name(InterpKind k);
std::optional<InterpKind> parse_interp(std::string_view s);
bool compatible(InterpKind k, MonadTag tag);
const std::vector<InterpKind>& all_interp_kinds();

class InterpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A natural number or infinity.
struct Extended {
  std::optional<mpz_class> n;  // nullopt is infinity

  static Extended inf() { return {}; }
  static Extended of(unsigned long k) { return {mpz_class(k)}; }
  bool infinite() const { return !n; }
  bool admits(std::size_t k) const { return !n || *n >= static_cast<unsigned long>(k); }
  std::string str() const { return n ? n->get_str() : "inf"; }

  friend bool operator==(const Extended&, const Extended&) = default;
};

struct ExcSet {
  bool ok = false;
  std::set<std::string> names;

  std::string str() const;
  friend bool operator==(const ExcSet&, const ExcSet&) = default;
};

// The homomorphic images of an effect. The operations of the automaton must
// all be of the kind the target monoid talks about.
ExcSet hom_exceptions(const EffectAutomaton& e, const Impls& impls);
int hom_nondet01(const EffectAutomaton& e, const Impls& impls);
Extended hom_count(const EffectAutomaton& e, const Impls& impls);  // 2^longest
Extended hom_outlen(const EffectAutomaton& e, const Impls& impls);

struct AbstractEffect {
  InterpKind kind;
  ExcSet exceptions;
  Extended bound;  // largest admitted list length or word length
  bool some = false;  // NondetEx01 at 1
  std::shared_ptr<const EffectAutomaton> exact;
  std::vector<std::pair<std::string, Symbol>> writes;  // location -> write op

  std::string str() const;
};

AbstractEffect abstract_effect(InterpKind k, const EffectAutomaton& e, const Impls& impls);

namespace detail {
std::optional<Word> extract(const std::vector<Output>& word, const AbstractEffect& a);
}

// Membership of m in the lifting of the predicate along the effect.
template <class T, class P>
bool lift_member(const AbstractEffect& a, const M<T>& m, P&& pred) {
  auto all = [&] {
    for (const auto& x : m.items)
      if (!pred(x)) return false;
    return true;
  };
  switch (a.kind) {
    case InterpKind::ExcSets:
      if (m.state == M<T>::State::Bottom) return true;
      if (m.state == M<T>::State::Raised) return a.exceptions.names.count(m.exception) > 0;
      return a.exceptions.ok && pred(m.items.front());
    case InterpKind::NondetAll01:
    case InterpKind::NondetCount: return a.bound.admits(m.items.size()) && all();
    case InterpKind::NondetEx01:
      if (!a.some) return m.items.size() <= 1 && all();
      if (m.items.empty()) return true;
      for (const auto& x : m.items)
        if (pred(x)) return true;
      return false;
    case InterpKind::OutputLength: return a.bound.admits(m.word.size()) && all();
    case InterpKind::OutputExact: {
      auto w = detail::extract(m.word, a);
      if (!w) return false;
      if (m.items.empty()) return eff_prefix_member(*w, *a.exact);
      return eff_member(*w, *a.exact) && pred(m.items.front());
    }
    case InterpKind::DistSupport: return all();
  }
  return false;
}

// Checked entry point: throws InterpError when kind and tag do not match.
template <class T, class P>
bool lift_member(InterpKind k, MonadTag tag, const M<T>& m, P&& pred, const EffectAutomaton& e,
                 const Impls& impls) {
  if (!compatible(k, tag) || m.tag != tag)
    throw InterpError(std::string(interp_name(k)) + " does not interpret effects in the " +
                      std::string(tag_name(tag)) + " monad");
  return lift_member(abstract_effect(k, e, impls), m, pred);
}

struct LawResult {
  std::string condition;
  bool pass = true;
  int checked = 0;
  std::string witness;  // first counterexample
};

struct LawReport {
  std::string subject;
  int universe = 0;
  std::vector<LawResult> results;

  const LawResult* find(std::string_view condition) const;
  std::string str() const;
};

// The operations the law suites use for a monad: raise_e, raise_e2 / choose /
// write_l, write_l2 on locations l and l2.
Impls standard_impls(MonadTag tag);
std::vector<EffectAutomaton> default_effect_samples(MonadTag tag);

// Exhaustive check of the conditions of an interpretation over small
// universes. Condition names: naturality, monotonicity, unit,
// multiplication, image, bottom.
LawReport lifting_axiom_suite(InterpKind k, int universe, const std::vector<EffectAutomaton>& samples,
                              const Impls& impls);
// Conditions that fail by construction for a kind.
bool expected_failure(InterpKind k, std::string_view condition);

// Left unit, right unit and associativity.
LawReport kleisli_law_suite(MonadTag tag, int universe);

}  // namespace effekta
