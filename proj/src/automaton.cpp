#include <algorithm>
#include <cassert>
#include <functional>
#include <set>

#include "effekta/effect.hpp"
#include "graph.hpp"

namespace effekta {

int EffectAutomaton::add_state(bool fin, bool buchi) {
  edges_.emplace_back();
  fin_.push_back(fin);
  buchi_.push_back(buchi);
  return size() - 1;
}

void EffectAutomaton::add_edge(int from, Symbol symbol, int to) {
  edges_[from].push_back({symbol, to});
}

std::vector<Symbol> EffectAutomaton::alphabet() const {
  std::vector<Symbol> out;
  for (const auto& es : edges_)
    for (const auto& e : es) out.push_back(e.symbol);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

// Appends a copy of a's states; returns the index offset.
int append(EffectAutomaton& into, const EffectAutomaton& a, bool keep_fin, bool keep_buchi) {
  const int offset = into.size();
  for (int s = 0; s < a.size(); ++s) into.add_state(keep_fin && a.fin(s), keep_buchi && a.buchi(s));
  for (int s = 0; s < a.size(); ++s)
    for (const auto& e : a.edges(s)) into.add_edge(offset + s, e.symbol, offset + e.target);
  return offset;
}

// Copies the outgoing edges of `from` (already in `into`) onto `to`.
void copy_edges(EffectAutomaton& into, int from, int to) {
  std::vector<EffectAutomaton::Edge> es(into.edges(from).begin(), into.edges(from).end());
  for (const auto& e : es) into.add_edge(to, e.symbol, e.target);
}

std::vector<std::vector<int>> successors(const EffectAutomaton& a) {
  std::vector<std::vector<int>> adj(a.size());
  for (int s = 0; s < a.size(); ++s)
    for (const auto& e : a.edges(s)) adj[s].push_back(e.target);
  return adj;
}

}  // namespace

EffectAutomaton eps_automaton() {
  EffectAutomaton a;
  a.add_state(true);
  return a;
}

EffectAutomaton atom_automaton(Symbol op) {
  EffectAutomaton a;
  a.add_state();
  a.add_state(true);
  a.add_edge(0, op, 1);
  return a;
}

EffectAutomaton eff_concat(const EffectAutomaton& a, const EffectAutomaton& b) {
  EffectAutomaton r;
  append(r, a, false, true);
  const int ob = append(r, b, true, true);
  const bool b_eps = b.fin(b.initial());
  for (int s = 0; s < a.size(); ++s) {
    if (!a.fin(s)) continue;
    copy_edges(r, ob + b.initial(), s);
    r.set_fin(s, b_eps);
  }
  r.set_initial(a.initial());
  return trim(r);
}

EffectAutomaton eff_union(const EffectAutomaton& a, const EffectAutomaton& b) {
  EffectAutomaton r;
  const int i = r.add_state(a.fin(a.initial()) || b.fin(b.initial()));
  const int oa = append(r, a, true, true);
  const int ob = append(r, b, true, true);
  copy_edges(r, oa + a.initial(), i);
  copy_edges(r, ob + b.initial(), i);
  r.set_initial(i);
  return trim(r);
}

EffectAutomaton eff_star(const EffectAutomaton& a) {
  EffectAutomaton r;
  const int i = r.add_state(true);
  const int oa = append(r, a, true, false);
  copy_edges(r, oa + a.initial(), i);
  for (int s = 0; s < a.size(); ++s)
    if (a.fin(s)) copy_edges(r, oa + a.initial(), oa + s);
  r.set_initial(i);
  return trim(r);
}

EffectAutomaton eff_omega(const EffectAutomaton& src) {
  const EffectAutomaton a = trim(src);
  bool only_eps = !has_infinite_words(a);
  for (int s = 0; s < a.size() && only_eps; ++s) only_eps = a.edges(s).empty();
  if (only_eps) return eps_automaton();

  EffectAutomaton r;
  append(r, a, false, true);
  const int hub = r.add_state(false, true);
  copy_edges(r, a.initial(), hub);
  // Every edge that completes a component may also jump to the hub.
  for (int s = 0; s < r.size(); ++s) {
    std::vector<EffectAutomaton::Edge> extra;
    for (const auto& e : r.edges(s))
      if (e.target < a.size() && a.fin(e.target)) extra.push_back({e.symbol, hub});
    for (const auto& e : extra) r.add_edge(s, e.symbol, e.target);
  }
  r.set_initial(hub);
  return trim(r);
}

EffectAutomaton compile(const EffectExpr& e) {
  switch (e.kind()) {
    case EffectExpr::Kind::Eps: return eps_automaton();
    case EffectExpr::Kind::Atom: return atom_automaton(e.symbol());
    case EffectExpr::Kind::Concat: return eff_concat(compile(e.left()), compile(e.right()));
    case EffectExpr::Kind::Union: return eff_union(compile(e.left()), compile(e.right()));
    case EffectExpr::Kind::Star: return eff_star(compile(e.left()));
    case EffectExpr::Kind::Omega: return eff_omega(compile(e.left()));
  }
  return eps_automaton();
}

namespace detail {

// States from which some infinite accepting run starts.
std::vector<char> omega_productive(const EffectAutomaton& a) {
  const auto adj = successors(a);
  const SccResult scc = strongly_connected(adj);
  std::vector<char> good_comp(scc.count, 0);
  for (int s = 0; s < a.size(); ++s)
    if (a.buchi(s) && scc.nontrivial[scc.comp[s]]) good_comp[scc.comp[s]] = 1;
  std::vector<char> seed(a.size(), 0);
  for (int s = 0; s < a.size(); ++s) seed[s] = good_comp[scc.comp[s]];
  return backward_reach(adj, seed);
}

std::vector<char> fin_productive(const EffectAutomaton& a) {
  std::vector<char> seed(a.size(), 0);
  for (int s = 0; s < a.size(); ++s) seed[s] = a.fin(s);
  return backward_reach(successors(a), seed);
}

}  // namespace detail

EffectAutomaton trim(const EffectAutomaton& a) {
  const auto adj = successors(a);
  const auto reach = forward_reach(adj, a.initial());
  const auto finp = detail::fin_productive(a);
  const auto omp = detail::omega_productive(a);
  const SccResult scc = strongly_connected(adj);

  std::vector<int> map(a.size(), -1);
  EffectAutomaton r;
  for (int s = 0; s < a.size(); ++s) {
    if (!reach[s] || !(finp[s] || omp[s])) continue;
    map[s] = r.add_state(a.fin(s), a.buchi(s) && scc.nontrivial[scc.comp[s]]);
  }
  if (map[a.initial()] < 0) {
    EffectAutomaton empty;
    empty.add_state();
    return empty;
  }
  for (int s = 0; s < a.size(); ++s) {
    if (map[s] < 0) continue;
    std::vector<std::pair<Symbol, int>> es;
    for (const auto& e : a.edges(s))
      if (map[e.target] >= 0) es.emplace_back(e.symbol, map[e.target]);
    std::sort(es.begin(), es.end());
    es.erase(std::unique(es.begin(), es.end()), es.end());
    for (auto [sym, t] : es) r.add_edge(map[s], sym, t);
  }
  r.set_initial(map[a.initial()]);
  return r;
}

bool is_empty(const EffectAutomaton& a) {
  const auto finp = detail::fin_productive(a);
  const auto omp = detail::omega_productive(a);
  return !finp[a.initial()] && !omp[a.initial()];
}

bool accepts_epsilon(const EffectAutomaton& a) { return a.fin(a.initial()); }

bool has_infinite_words(const EffectAutomaton& a) {
  const auto reach = forward_reach(successors(a), a.initial());
  const auto omp = detail::omega_productive(a);
  for (int s = 0; s < a.size(); ++s)
    if (reach[s] && omp[s]) return true;
  return false;
}

namespace {

std::vector<int> post(const EffectAutomaton& a, const std::vector<int>& set, Symbol x) {
  std::vector<int> out;
  for (int s : set)
    for (const auto& e : a.edges(s))
      if (e.symbol == x) out.push_back(e.target);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

bool eff_member(const Word& w, const EffectAutomaton& a) {
  std::vector<int> cur{a.initial()};
  for (Symbol x : w) {
    cur = post(a, cur, x);
    if (cur.empty()) return false;
  }
  return std::any_of(cur.begin(), cur.end(), [&](int s) { return a.fin(s); });
}

bool eff_member(const Lasso& l, const EffectAutomaton& a) {
  if (l.period.empty()) return false;
  const int len = static_cast<int>(l.stem.size() + l.period.size());
  const int loop_to = static_cast<int>(l.stem.size());
  auto letter = [&](int i) {
    return i < loop_to ? l.stem[i] : l.period[i - loop_to];
  };
  const int n = a.size() * len;
  std::vector<std::vector<int>> adj(n);
  for (int q = 0; q < a.size(); ++q) {
    for (int i = 0; i < len; ++i) {
      const int next = i + 1 < len ? i + 1 : loop_to;
      for (const auto& e : a.edges(q))
        if (e.symbol == letter(i)) adj[q * len + i].push_back(e.target * len + next);
    }
  }
  const auto reach = forward_reach(adj, a.initial() * len);
  const SccResult scc = strongly_connected(adj);
  for (int v = 0; v < n; ++v)
    if (reach[v] && a.buchi(v / len) && scc.nontrivial[scc.comp[v]]) return true;
  return false;
}

bool eff_prefix_member(const Word& w, const EffectAutomaton& src) {
  const EffectAutomaton a = trim(src);
  std::vector<int> cur{a.initial()};
  for (Symbol x : w) {
    cur = post(a, cur, x);
    if (cur.empty()) return false;
  }
  return true;
}

Enumeration eff_enumerate(const EffectAutomaton& src, int max_len) {
  const EffectAutomaton a = trim(src);
  const auto sigma = a.alphabet();
  Enumeration out;

  std::vector<Word> stems;
  Word w;
  std::function<void(const std::vector<int>&)> walk = [&](const std::vector<int>& set) {
    stems.push_back(w);
    if (std::any_of(set.begin(), set.end(), [&](int s) { return a.fin(s); })) out.words.push_back(w);
    if (static_cast<int>(w.size()) == max_len) return;
    for (Symbol x : sigma) {
      auto next = post(a, set, x);
      if (next.empty()) continue;
      w.push_back(x);
      walk(next);
      w.pop_back();
    }
  };
  walk({a.initial()});

  if (has_infinite_words(a)) {
    std::set<Lasso> found;
    for (const Word& stem : stems) {
      const int room = max_len - static_cast<int>(stem.size());
      Word period;
      std::function<void()> periods = [&] {
        if (!period.empty()) {
          Lasso l{stem, period};
          if (canonical(l) == l && eff_member(l, a)) found.insert(l);
        }
        if (static_cast<int>(period.size()) == room) return;
        for (Symbol x : sigma) {
          period.push_back(x);
          periods();
          period.pop_back();
        }
      };
      periods();
    }
    out.lassos.assign(found.begin(), found.end());
  }
  std::sort(out.words.begin(), out.words.end());
  return out;
}

}  // namespace effekta
