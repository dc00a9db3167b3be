#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <unordered_map>

#include "effekta/effect.hpp"
#include "graph.hpp"

namespace effekta {

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

// Product of a with the subset construction of b, breadth first so the
// witness is a shortest word.
Inclusion finite_part(const EffectAutomaton& a, const EffectAutomaton& b) {
  struct Node {
    int qa;
    std::vector<int> sb;
    int parent;
    Symbol via;
  };
  std::vector<Node> nodes{{a.initial(), {b.initial()}, -1, 0}};
  std::map<std::pair<int, std::vector<int>>, int> seen{{{a.initial(), {b.initial()}}, 0}};
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const int qa = nodes[i].qa;
    const std::vector<int> sb = nodes[i].sb;
    if (a.fin(qa) && std::none_of(sb.begin(), sb.end(), [&](int s) { return b.fin(s); })) {
      Word w;
      for (int j = static_cast<int>(i); nodes[j].parent >= 0; j = nodes[j].parent)
        w.push_back(nodes[j].via);
      std::reverse(w.begin(), w.end());
      return {Verdict::No, w};
    }
    for (const auto& e : a.edges(qa)) {
      auto next = post(b, sb, e.symbol);
      auto key = std::make_pair(e.target, next);
      if (seen.count(key)) continue;
      seen.emplace(key, static_cast<int>(nodes.size()));
      nodes.push_back({e.target, std::move(next), static_cast<int>(i), e.symbol});
    }
  }
  return {Verdict::Yes, std::nullopt};
}

// Keeps only states that start an accepting infinite run; finite acceptance
// is dropped.
EffectAutomaton omega_part(const EffectAutomaton& a) {
  const auto omp = detail::omega_productive(a);
  EffectAutomaton r;
  std::vector<int> map(a.size(), -1);
  for (int s = 0; s < a.size(); ++s)
    if (omp[s]) map[s] = r.add_state(false, a.buchi(s));
  if (map[a.initial()] < 0) return r;
  for (int s = 0; s < a.size(); ++s) {
    if (map[s] < 0) continue;
    for (const auto& e : a.edges(s))
      if (map[e.target] >= 0) r.add_edge(map[s], e.symbol, map[e.target]);
  }
  r.set_initial(map[a.initial()]);
  return r;
}

// When the infinite words of a form finitely many lassos, lists them.
std::optional<std::vector<Lasso>> lasso_shape(const EffectAutomaton& w, std::size_t cap) {
  std::vector<std::vector<int>> adj(w.size());
  for (int s = 0; s < w.size(); ++s)
    for (const auto& e : w.edges(s)) adj[s].push_back(e.target);
  const SccResult scc = strongly_connected(adj);
  for (int s = 0; s < w.size(); ++s) {
    if (!scc.nontrivial[scc.comp[s]]) continue;
    if (w.edges(s).size() != 1 || scc.comp[w.edges(s)[0].target] != scc.comp[s]) return std::nullopt;
  }
  std::vector<Lasso> out;
  Word path;
  bool overflow = false;
  std::function<void(int)> walk = [&](int s) {
    if (overflow) return;
    if (scc.nontrivial[scc.comp[s]]) {
      Lasso l{path, {}};
      int q = s;
      do {
        l.period.push_back(w.edges(q)[0].symbol);
        q = w.edges(q)[0].target;
      } while (q != s);
      out.push_back(std::move(l));
      overflow = out.size() > cap;
      return;
    }
    for (const auto& e : w.edges(s)) {
      path.push_back(e.symbol);
      walk(e.target);
      path.pop_back();
    }
  };
  walk(w.initial());
  if (overflow) return std::nullopt;
  return out;
}

// Ramsey-style check over the congruence classes of finite words: a class
// records, for both automata, which state pairs a word connects and whether
// some connecting run passes an accepting state.
class ClassSearch {
 public:
  ClassSearch(const EffectAutomaton& a, const EffectAutomaton& b) : a_(a), b_(b) {
    na_ = a.size();
    nb_ = b.size();
  }

  // nullopt: class budget exceeded.
  std::optional<Inclusion> run(int max_classes) {
    const auto sigma = a_.alphabet();
    std::vector<Cls> classes;
    std::unordered_map<std::string, int> index;
    for (Symbol x : sigma) {
      Cls c = letter(x);
      if (index.emplace(c.rel, static_cast<int>(classes.size())).second) classes.push_back(c);
    }
    for (std::size_t i = 0; i < classes.size(); ++i) {
      for (Symbol x : sigma) {
        Cls c = extend(classes[i], x);
        if (index.count(c.rel)) continue;
        if (static_cast<int>(classes.size()) >= max_classes) return std::nullopt;
        index.emplace(c.rel, static_cast<int>(classes.size()));
        classes.push_back(std::move(c));
      }
    }
    for (const Cls& y : classes) {
      if (!loops_accepting(y, a_, 0, na_) || compose(y, y).rel != y.rel) continue;
      for (const Cls& x : classes) {
        if (!accepts(x, y, a_, 0, na_)) continue;
        if (accepts(x, y, b_, na_ * na_, nb_)) continue;
        if (compose(x, y).rel != x.rel) continue;
        return Inclusion{Verdict::No, Lasso{x.word, y.word}};
      }
    }
    return Inclusion{Verdict::Yes, std::nullopt};
  }

 private:
  struct Cls {
    std::string rel;  // na*na cells for a, then nb*nb cells for b; 0 none, 1 path, 2 accepting path
    Word word;
  };

  Cls letter(Symbol x) const {
    Cls c{std::string(na_ * na_ + nb_ * nb_, '\0'), {x}};
    fill_letter(c.rel, a_, 0, na_, x);
    fill_letter(c.rel, b_, na_ * na_, nb_, x);
    return c;
  }

  static void fill_letter(std::string& rel, const EffectAutomaton& m, int off, int n, Symbol x) {
    for (int p = 0; p < n; ++p)
      for (const auto& e : m.edges(p))
        if (e.symbol == x) {
          char& cell = rel[off + p * n + e.target];
          cell = std::max<char>(cell, m.buchi(e.target) ? 2 : 1);
        }
  }

  Cls extend(const Cls& c, Symbol x) const {
    Cls r{std::string(c.rel.size(), '\0'), c.word};
    r.word.push_back(x);
    extend_part(c.rel, r.rel, a_, 0, na_, x);
    extend_part(c.rel, r.rel, b_, na_ * na_, nb_, x);
    return r;
  }

  static void extend_part(const std::string& in, std::string& out, const EffectAutomaton& m, int off,
                          int n, Symbol x) {
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        const char f = in[off + p * n + q];
        if (!f) continue;
        for (const auto& e : m.edges(q)) {
          if (e.symbol != x) continue;
          char& cell = out[off + p * n + e.target];
          cell = std::max<char>(cell, std::max<char>(f, m.buchi(e.target) ? 2 : 1));
        }
      }
  }

  Cls compose(const Cls& x, const Cls& y) const {
    Cls r{std::string(x.rel.size(), '\0'), {}};
    compose_part(x.rel, y.rel, r.rel, 0, na_);
    compose_part(x.rel, y.rel, r.rel, na_ * na_, nb_);
    return r;
  }

  static void compose_part(const std::string& x, const std::string& y, std::string& out, int off,
                           int n) {
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        const char f = x[off + p * n + q];
        if (!f) continue;
        for (int r = 0; r < n; ++r) {
          const char g = y[off + q * n + r];
          if (!g) continue;
          char& cell = out[off + p * n + r];
          cell = std::max<char>(cell, std::max(f, g));
        }
      }
  }

  static bool loops_accepting(const Cls& y, const EffectAutomaton&, int off, int n) {
    for (int q = 0; q < n; ++q)
      if (y.rel[off + q * n + q] == 2) return true;
    return false;
  }

  static bool accepts(const Cls& x, const Cls& y, const EffectAutomaton& m, int off, int n) {
    if (n == 0) return false;
    for (int q = 0; q < n; ++q)
      if (x.rel[off + m.initial() * n + q] && y.rel[off + q * n + q] == 2) return true;
    return false;
  }

  const EffectAutomaton& a_;
  const EffectAutomaton& b_;
  int na_, nb_;
};

Inclusion bounded_sweep(const EffectAutomaton& a, const EffectAutomaton& b,
                        const InclusionBounds& bounds) {
  const auto sigma = a.alphabet();
  std::optional<Lasso> witness;
  Word stem, period;
  std::function<void()> periods = [&] {
    if (witness) return;
    if (!period.empty()) {
      Lasso l{stem, period};
      if (eff_member(l, a) && !eff_member(l, b)) {
        witness = l;
        return;
      }
    }
    if (static_cast<int>(period.size()) == bounds.max_period) return;
    for (Symbol x : sigma) {
      period.push_back(x);
      periods();
      period.pop_back();
    }
  };
  std::function<void(const std::vector<int>&)> stems = [&](const std::vector<int>& set) {
    if (witness) return;
    periods();
    if (static_cast<int>(stem.size()) == bounds.max_stem) return;
    for (Symbol x : sigma) {
      auto next = post(a, set, x);
      if (next.empty()) continue;
      stem.push_back(x);
      stems(next);
      stem.pop_back();
    }
  };
  stems({a.initial()});
  if (witness) return {Verdict::No, *witness};
  return {Verdict::Unknown, std::nullopt};
}

}  // namespace

Inclusion eff_includes(const EffectAutomaton& a0, const EffectAutomaton& b0,
                       const InclusionBounds& bounds) {
  const EffectAutomaton a = trim(a0);
  const EffectAutomaton b = trim(b0);
  if (Inclusion fin = finite_part(a, b); fin.no()) return fin;
  if (!has_infinite_words(a)) return {Verdict::Yes, std::nullopt};

  const EffectAutomaton wa = omega_part(a);
  const EffectAutomaton wb = omega_part(b);
  if (auto lassos = lasso_shape(wa, 4096)) {
    for (const Lasso& l : *lassos)
      if (!eff_member(l, b)) return {Verdict::No, l};
    return {Verdict::Yes, std::nullopt};
  }
  if (auto exact = ClassSearch(wa, wb).run(bounds.max_classes)) return *exact;
  return bounded_sweep(a, b, bounds);
}

bool eff_equal(const EffectAutomaton& a, const EffectAutomaton& b, const InclusionBounds& bounds) {
  return eff_includes(a, b, bounds).yes() && eff_includes(b, a, bounds).yes();
}

}  // namespace effekta
