#include <algorithm>
#include <set>

#include "effekta/effect.hpp"
#include "graph.hpp"

namespace effekta {

const FilterClause* HandlerFilter::find(Symbol op) const {
  for (const auto& c : clauses)
    if (c.op == op) return &c;
  return nullptr;
}

namespace {

// Automaton with silent links, used while splicing clause effects.
struct EpsAutomaton {
  std::vector<std::vector<EffectAutomaton::Edge>> edges;
  std::vector<std::vector<int>> links;
  std::vector<char> fin, buchi;

  int add_state(bool f, bool b) {
    edges.emplace_back();
    links.emplace_back();
    fin.push_back(f);
    buchi.push_back(b);
    return static_cast<int>(fin.size()) - 1;
  }

  int append(const EffectAutomaton& a, bool keep_fin) {
    const int off = static_cast<int>(fin.size());
    for (int s = 0; s < a.size(); ++s) add_state(keep_fin && a.fin(s), a.buchi(s));
    for (int s = 0; s < a.size(); ++s)
      for (const auto& e : a.edges(s)) edges[off + s].push_back({e.symbol, off + e.target});
    return off;
  }

  std::vector<char> closure(int s) const {
    return forward_reach(links, s);
  }

  // Removes silent links. A symbol edge is accepting when the silent path
  // leading to it passes a buchi state; states are split in two so that the
  // result uses state-based acceptance again.
  EffectAutomaton eliminate(int initial) const {
    const int n = static_cast<int>(fin.size());
    const SccResult scc = strongly_connected(links);
    std::vector<char> silent_loop(n, 0);
    {
      std::vector<char> comp_buchi(scc.count, 0);
      for (int s = 0; s < n; ++s)
        if (buchi[s] && scc.nontrivial[scc.comp[s]]) comp_buchi[scc.comp[s]] = 1;
      for (int s = 0; s < n; ++s) silent_loop[s] = comp_buchi[scc.comp[s]];
    }

    EffectAutomaton r;
    for (int s = 0; s < n; ++s) {
      const auto cl = closure(s);
      bool f = false;
      for (int q = 0; q < n && !f; ++q) f = cl[q] && (fin[q] || silent_loop[q]);
      r.add_state(f, false);
      r.add_state(f, true);
    }
    for (int s = 0; s < n; ++s) {
      const auto cl = closure(s);
      std::vector<char> passed(n, 0);
      for (int b = 0; b < n; ++b) {
        if (!cl[b] || !buchi[b]) continue;
        const auto from_b = closure(b);
        for (int q = 0; q < n; ++q) passed[q] |= from_b[q];
      }
      std::set<std::pair<Symbol, int>> out;
      for (int q = 0; q < n; ++q) {
        if (!cl[q]) continue;
        for (const auto& e : edges[q]) out.emplace(e.symbol, 2 * e.target + (passed[q] ? 1 : 0));
      }
      for (auto [sym, t] : out) {
        if (t % 2 == 0 && out.count({sym, t + 1})) continue;
        r.add_edge(2 * s, sym, t);
        r.add_edge(2 * s + 1, sym, t);
      }
    }
    r.set_initial(2 * initial);
    return trim(r);
  }
};

}  // namespace

EffectAutomaton filter_apply(const HandlerFilter& h, const EffectAutomaton& src) {
  const EffectAutomaton e = trim(src);
  EpsAutomaton m;
  m.append(e, false);
  for (int p = 0; p < e.size(); ++p) m.edges[p].clear();
  for (int p = 0; p < e.size(); ++p) {
    for (const auto& edge : e.edges(p)) {
      const FilterClause* c = h.find(edge.symbol);
      if (!c) {
        m.edges[p].push_back(edge);
        continue;
      }
      const EffectAutomaton ce = trim(c->effect);
      const int off = m.append(ce, c->stop);
      m.links[p].push_back(off + ce.initial());
      if (c->stop) continue;
      for (int s = 0; s < ce.size(); ++s)
        if (ce.fin(s)) m.links[off + s].push_back(edge.target);
    }
  }
  const EffectAutomaton fe = trim(h.final_effect);
  for (int p = 0; p < e.size(); ++p) {
    if (!e.fin(p)) continue;
    const int off = m.append(fe, true);
    m.links[p].push_back(off + fe.initial());
  }
  return m.eliminate(e.initial());
}

}  // namespace effekta
