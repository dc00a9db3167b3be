#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace effekta {

// Operation names are interned; automata and words store the small ids.
using Symbol = std::uint32_t;

Symbol intern(std::string_view name);
const std::string& symbol_name(Symbol s);

using Word = std::vector<Symbol>;

// stem . period^w
struct Lasso {
  Word stem;
  Word period;

  friend bool operator==(const Lasso&, const Lasso&) = default;
  friend auto operator<=>(const Lasso&, const Lasso&) = default;
};

// Shortest stem and primitive period denoting the same infinite word.
Lasso canonical(const Lasso& l);

std::string format_word(const Word& w);
std::string format_lasso(const Lasso& l);

// Syntax of effects: eps | op | e . e | e | e | e* | e^w
class EffectExpr {
 public:
  enum class Kind { Eps, Atom, Concat, Union, Star, Omega };

  static EffectExpr eps();
  static EffectExpr atom(Symbol op);
  static EffectExpr atom(std::string_view op) { return atom(intern(op)); }
  static EffectExpr concat(EffectExpr a, EffectExpr b);
  static EffectExpr alt(EffectExpr a, EffectExpr b);
  static EffectExpr star(EffectExpr a);
  static EffectExpr omega(EffectExpr a);

  Kind kind() const { return node_->kind; }
  Symbol symbol() const { return node_->symbol; }
  const EffectExpr& left() const { return *node_->left; }
  const EffectExpr& right() const { return *node_->right; }

  std::string str() const;

 private:
  struct Node {
    Kind kind;
    Symbol symbol = 0;
    std::shared_ptr<const EffectExpr> left, right;
  };
  explicit EffectExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

class EffectSyntaxError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

EffectExpr parse_effect_expr(std::string_view text);

// Nondeterministic automaton with two acceptance conditions: finite words end
// in a fin state, infinite words visit a buchi state infinitely often.
class EffectAutomaton {
 public:
  struct Edge {
    Symbol symbol;
    int target;
  };

  int add_state(bool fin = false, bool buchi = false);
  void add_edge(int from, Symbol symbol, int to);
  void set_initial(int s) { initial_ = s; }
  void set_fin(int s, bool v) { fin_[s] = v; }
  void set_buchi(int s, bool v) { buchi_[s] = v; }

  int size() const { return static_cast<int>(edges_.size()); }
  int initial() const { return initial_; }
  bool fin(int s) const { return fin_[s]; }
  bool buchi(int s) const { return buchi_[s]; }
  std::span<const Edge> edges(int s) const { return edges_[s]; }
  std::vector<Symbol> alphabet() const;

 private:
  std::vector<std::vector<Edge>> edges_;
  std::vector<char> fin_, buchi_;
  int initial_ = 0;
};

EffectAutomaton compile(const EffectExpr& e);
EffectAutomaton eps_automaton();
EffectAutomaton atom_automaton(Symbol op);

EffectAutomaton eff_concat(const EffectAutomaton& a, const EffectAutomaton& b);
EffectAutomaton eff_union(const EffectAutomaton& a, const EffectAutomaton& b);
EffectAutomaton eff_star(const EffectAutomaton& a);
EffectAutomaton eff_omega(const EffectAutomaton& a);

// Drops unreachable and unproductive states.
EffectAutomaton trim(const EffectAutomaton& a);

bool is_empty(const EffectAutomaton& a);
bool accepts_epsilon(const EffectAutomaton& a);
bool has_infinite_words(const EffectAutomaton& a);

bool eff_member(const Word& w, const EffectAutomaton& a);
bool eff_member(const Lasso& l, const EffectAutomaton& a);
// w is a prefix of some finite or infinite word of a.
bool eff_prefix_member(const Word& w, const EffectAutomaton& a);

struct InclusionBounds {
  int max_stem = 4;
  int max_period = 4;
  int max_len = 8;
  // Cap on the number of word classes explored by the exact omega check.
  int max_classes = 3000;
};

enum class Verdict { Yes, No, Unknown };

struct Inclusion {
  Verdict verdict;
  std::optional<std::variant<Word, Lasso>> witness;

  bool yes() const { return verdict == Verdict::Yes; }
  bool no() const { return verdict == Verdict::No; }
};

Inclusion eff_includes(const EffectAutomaton& a, const EffectAutomaton& b,
                       const InclusionBounds& bounds = {});
bool eff_equal(const EffectAutomaton& a, const EffectAutomaton& b,
               const InclusionBounds& bounds = {});

struct Enumeration {
  std::vector<Word> words;
  std::vector<Lasso> lassos;  // canonical forms
};

Enumeration eff_enumerate(const EffectAutomaton& a, int max_len);

struct FilterClause {
  Symbol op;
  bool stop;
  EffectAutomaton effect;
};

struct HandlerFilter {
  std::vector<FilterClause> clauses;
  EffectAutomaton final_effect;

  const FilterClause* find(Symbol op) const;
};

EffectAutomaton filter_apply(const HandlerFilter& h, const EffectAutomaton& e);

// Regular expression read back from an automaton by state elimination.
EffectExpr describe(const EffectAutomaton& a);

// An effect as carried by types: an automaton plus, when known, the
// expression it came from (used for printing).
class Effect {
 public:
  Effect();  // {eps}
  explicit Effect(EffectExpr e);
  explicit Effect(EffectAutomaton a, std::optional<EffectExpr> e = std::nullopt);

  static Effect pure() { return Effect(); }
  static Effect op(Symbol s);

  const EffectAutomaton& automaton() const { return *aut_; }
  const std::optional<EffectExpr>& source() const { return expr_; }
  EffectExpr expr() const;
  std::string str() const { return expr().str(); }
  bool is_pure() const { return pure_; }

  friend Effect operator*(const Effect& a, const Effect& b);  // concatenation
  friend Effect operator|(const Effect& a, const Effect& b);  // union

 private:
  std::shared_ptr<const EffectAutomaton> aut_;
  std::optional<EffectExpr> expr_;
  bool pure_ = false;
};

Inclusion includes(const Effect& a, const Effect& b, const InclusionBounds& bounds = {});

}  // namespace effekta
