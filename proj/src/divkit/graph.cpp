#include "divkit/graph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace divkit {

UndirectedGraph UndirectedGraph::from_cliques(const std::vector<std::vector<int>>& cliques) {
  UndirectedGraph g;
  for (const auto& c : cliques) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      g.add_vertex(c[i]);
      for (std::size_t j = i + 1; j < c.size(); ++j) g.add_edge(c[i], c[j]);
    }
  }
  return g;
}

std::optional<std::vector<int>> find_peo(const UndirectedGraph& g) {
  std::vector<int> verts = g.vertices();
  const int n = static_cast<int>(verts.size());
  std::map<int, int> weight;
  std::set<int> visited;
  for (int v : verts) weight[v] = 0;

  // Maximum-cardinality search, ties by smallest id.
  std::vector<int> order;
  order.reserve(n);
  for (int step = 0; step < n; ++step) {
    int best = -1, best_w = -1;
    for (int v : verts) {
      if (visited.count(v)) continue;
      if (weight[v] > best_w) {
        best = v;
        best_w = weight[v];
      }
    }
    order.push_back(best);
    visited.insert(best);
    for (int u : g.neighbors(best))
      if (!visited.count(u)) ++weight[u];
  }

  // Tarjan-Yannakakis zero fill-in check: for every vertex, its earlier
  // neighbors minus the latest one must be neighbors of that latest one.
  std::map<int, int> pos;
  for (int i = 0; i < n; ++i) pos[order[i]] = i;
  for (int i = 1; i < n; ++i) {
    int v = order[i];
    int latest = -1, latest_pos = -1;
    for (int u : g.neighbors(v)) {
      if (pos[u] < i && pos[u] > latest_pos) {
        latest = u;
        latest_pos = pos[u];
      }
    }
    if (latest < 0) continue;
    for (int u : g.neighbors(v)) {
      if (pos[u] < i && u != latest && !g.has_edge(u, latest)) return std::nullopt;
    }
  }

  // Reversed MCS order is a perfect elimination ordering.
  std::reverse(order.begin(), order.end());
  return order;
}

bool is_chordal(const UndirectedGraph& g) { return find_peo(g).has_value(); }

ChordalGraph as_chordal(const UndirectedGraph& g) {
  auto peo = find_peo(g);
  if (!peo) throw StructureError("graph is not chordal");
  return ChordalGraph{g, *peo};
}

ChordalGraph computation_graph(std::span<const UndirectedGraph* const> graphs,
                               EliminationOrder order) {
  if (graphs.empty()) throw StructureError("computation graph needs at least one input");
  UndirectedGraph u;
  for (const UndirectedGraph* g : graphs) {
    for (int v : g->vertices()) u.add_vertex(v);
    for (auto [a, b] : g->edges()) u.add_edge(a, b);
  }

  // Eliminate on a working copy; fill edges go into both copies. Fill
  // counts are maintained incrementally: eliminating a vertex only changes
  // the counts inside its (former) neighborhood's vicinity.
  std::map<int, std::set<int>> work;
  for (int v : u.vertices()) {
    std::set<int> ns = u.neighbors(v);
    work[v] = std::move(ns);
  }
  UndirectedGraph filled = u;
  std::vector<int> elim;
  elim.reserve(work.size());

  auto fill_count = [&work](int v) {
    const auto& ns = work.at(v);
    int missing = 0;
    for (auto it = ns.begin(); it != ns.end(); ++it) {
      auto jt = it;
      for (++jt; jt != ns.end(); ++jt)
        if (!work.at(*it).count(*jt)) ++missing;
    }
    return missing;
  };

  std::map<int, int> fill;
  if (order == EliminationOrder::min_fill)
    for (const auto& [v, _] : work) fill[v] = fill_count(v);

  while (!work.empty()) {
    int pick = -1;
    if (order == EliminationOrder::reverse_id) {
      pick = work.rbegin()->first;
    } else {
      int best_fill = -1;
      for (const auto& [v, f] : fill) {
        if (best_fill < 0 || f < best_fill) {
          best_fill = f;
          pick = v;
        }
      }
    }
    // Connect the picked vertex's remaining neighborhood into a clique.
    std::vector<int> ns(work[pick].begin(), work[pick].end());
    std::set<int> touched;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      for (std::size_t j = i + 1; j < ns.size(); ++j) {
        if (!work[ns[i]].count(ns[j])) {
          // common neighbors of a fresh edge lose a missing pair
          for (int w : work[ns[i]])
            if (w != pick && work[ns[j]].count(w)) touched.insert(w);
          work[ns[i]].insert(ns[j]);
          work[ns[j]].insert(ns[i]);
          filled.add_edge(ns[i], ns[j]);
        }
      }
    }
    for (int nb : ns) work[nb].erase(pick);
    work.erase(pick);
    elim.push_back(pick);
    if (order == EliminationOrder::min_fill) {
      fill.erase(pick);
      for (int nb : ns) touched.insert(nb);
      for (int w : touched)
        if (work.count(w)) fill[w] = fill_count(w);
    }
  }
  return ChordalGraph{std::move(filled), std::move(elim)};
}

ChordalGraph computation_graph(const std::vector<UndirectedGraph>& graphs,
                               EliminationOrder order) {
  std::vector<const UndirectedGraph*> ptrs;
  ptrs.reserve(graphs.size());
  for (const auto& g : graphs) ptrs.push_back(&g);
  return computation_graph(std::span<const UndirectedGraph* const>(ptrs), order);
}

std::vector<std::vector<int>> maximal_cliques(const ChordalGraph& g) {
  const auto& peo = g.peo;
  std::map<int, int> pos;
  for (std::size_t i = 0; i < peo.size(); ++i) pos[peo[i]] = static_cast<int>(i);

  std::vector<std::vector<int>> candidates;
  candidates.reserve(peo.size());
  for (std::size_t i = 0; i < peo.size(); ++i) {
    int v = peo[i];
    std::vector<int> c{v};
    for (int u : g.graph.neighbors(v))
      if (pos[u] > static_cast<int>(i)) c.push_back(u);
    std::sort(c.begin(), c.end());
    candidates.push_back(std::move(c));
  }

  // Drop candidates contained in a larger candidate.
  std::sort(candidates.begin(), candidates.end(),
            [](const auto& a, const auto& b) { return a.size() > b.size(); });
  std::vector<std::vector<int>> cliques;
  for (const auto& c : candidates) {
    bool contained = false;
    for (const auto& kept : cliques) {
      if (std::includes(kept.begin(), kept.end(), c.begin(), c.end())) {
        contained = true;
        break;
      }
    }
    if (!contained) cliques.push_back(c);
  }
  std::sort(cliques.begin(), cliques.end());
  return cliques;
}

CliqueTree build_clique_tree(const ChordalGraph& g) {
  CliqueTree tree;
  tree.cliques = maximal_cliques(g);
  const int m = static_cast<int>(tree.cliques.size());
  if (m <= 1) return tree;

  struct Cand {
    int w;
    int a;
    int b;
  };
  // Candidate edges only between cliques that share a variable; the
  // per-variable membership lists keep this near-linear for bounded
  // treewidth.
  std::map<int, std::vector<int>> cliques_of;
  for (int i = 0; i < m; ++i)
    for (int v : tree.cliques[i]) cliques_of[v].push_back(i);
  std::set<std::pair<int, int>> pairs;
  for (const auto& [v, members] : cliques_of)
    for (std::size_t x = 0; x < members.size(); ++x)
      for (std::size_t y = x + 1; y < members.size(); ++y)
        pairs.insert({members[x], members[y]});
  std::vector<Cand> cands;
  cands.reserve(pairs.size());
  for (auto [i, j] : pairs) {
    std::vector<int> inter;
    std::set_intersection(tree.cliques[i].begin(), tree.cliques[i].end(),
                          tree.cliques[j].begin(), tree.cliques[j].end(),
                          std::back_inserter(inter));
    cands.push_back({static_cast<int>(inter.size()), i, j});
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
    if (x.w != y.w) return x.w > y.w;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });

  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  for (const Cand& c : cands) {
    int ra = find(c.a), rb = find(c.b);
    if (ra == rb) continue;
    parent[ra] = rb;
    std::vector<int> sep;
    std::set_intersection(tree.cliques[c.a].begin(), tree.cliques[c.a].end(),
                          tree.cliques[c.b].begin(), tree.cliques[c.b].end(),
                          std::back_inserter(sep));
    tree.edges.push_back({c.a, c.b, std::move(sep)});
  }

  // Stitch remaining components to clique 0 with empty separators.
  for (int i = 1; i < m; ++i) {
    int r0 = find(0), ri = find(i);
    if (r0 != ri) {
      parent[ri] = r0;
      tree.edges.push_back({0, i, {}});
    }
  }
  return tree;
}

UndirectedGraph induced_subgraph(const UndirectedGraph& g, const std::set<int>& keep) {
  UndirectedGraph out;
  for (int v : g.vertices()) {
    if (!keep.count(v)) continue;
    out.add_vertex(v);
    for (int u : g.neighbors(v))
      if (keep.count(u) && v < u) out.add_edge(v, u);
  }
  return out;
}

int treewidth(const ChordalGraph& g) {
  auto cliques = maximal_cliques(g);
  std::size_t largest = 1;
  for (const auto& c : cliques) largest = std::max(largest, c.size());
  return static_cast<int>(largest) - 1;
}

}  // namespace divkit
