#pragma once

#include <algorithm>
#include <vector>

namespace effekta {

struct SccResult {
  std::vector<int> comp;        // component id per vertex
  std::vector<char> nontrivial;  // per component: has an internal edge
  int count = 0;
};

// Iterative Tarjan.
inline SccResult strongly_connected(const std::vector<std::vector<int>>& adj) {
  const int n = static_cast<int>(adj.size());
  SccResult r;
  r.comp.assign(n, -1);
  std::vector<int> index(n, -1), low(n, 0), stack;
  std::vector<char> on_stack(n, 0);
  int counter = 0;
  struct Frame {
    int v;
    std::size_t next;
  };
  for (int root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    std::vector<Frame> work{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!work.empty()) {
      Frame& f = work.back();
      if (f.next < adj[f.v].size()) {
        const int w = adj[f.v][f.next++];
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          work.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const int v = f.v;
      work.pop_back();
      if (!work.empty()) low[work.back().v] = std::min(low[work.back().v], low[v]);
      if (low[v] != index[v]) continue;
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = 0;
        r.comp[w] = r.count;
      } while (w != v);
      ++r.count;
    }
  }
  r.nontrivial.assign(r.count, 0);
  for (int v = 0; v < n; ++v)
    for (int w : adj[v])
      if (r.comp[v] == r.comp[w]) r.nontrivial[r.comp[v]] = 1;
  return r;
}

inline std::vector<char> forward_reach(const std::vector<std::vector<int>>& adj, int start) {
  std::vector<char> seen(adj.size(), 0);
  std::vector<int> todo{start};
  seen[start] = 1;
  while (!todo.empty()) {
    const int v = todo.back();
    todo.pop_back();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        todo.push_back(w);
      }
  }
  return seen;
}

// Vertices that can reach some seed vertex.
inline std::vector<char> backward_reach(const std::vector<std::vector<int>>& adj,
                                        std::vector<char> seed) {
  std::vector<std::vector<int>> rev(adj.size());
  for (std::size_t v = 0; v < adj.size(); ++v)
    for (int w : adj[v]) rev[w].push_back(static_cast<int>(v));
  std::vector<int> todo;
  for (std::size_t v = 0; v < seed.size(); ++v)
    if (seed[v]) todo.push_back(static_cast<int>(v));
  while (!todo.empty()) {
    const int v = todo.back();
    todo.pop_back();
    for (int w : rev[v])
      if (!seed[w]) {
        seed[w] = 1;
        todo.push_back(w);
      }
  }
  return seed;
}

}  // namespace effekta

namespace effekta {

class EffectAutomaton;

namespace detail {

std::vector<char> omega_productive(const EffectAutomaton& a);
std::vector<char> fin_productive(const EffectAutomaton& a);

}  // namespace detail
}  // namespace effekta
