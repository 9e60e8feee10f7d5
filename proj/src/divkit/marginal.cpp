#include "divkit/marginal.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace divkit {

namespace {

std::vector<int> sorted_unique(std::span<const int> ids) {
  std::vector<int> out(ids.begin(), ids.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

NPartition n_partition(const DecomposableModel& model, std::span<const int> kept) {
  NPartition part;
  part.kept = sorted_unique(kept);
  for (int v : part.kept)
    if (!model.variables.contains(v))
      throw StructureError("kept variable " + std::to_string(v) + " is not in the model");

  const auto& cliques = model.cliques;
  std::set<int> kept_set(part.kept.begin(), part.kept.end());

  // Cliques sharing an eliminated variable collapse into one group.
  UnionFind uf(cliques.size());
  std::map<int, std::vector<int>> cliques_of_var;
  for (std::size_t i = 0; i < cliques.size(); ++i)
    for (int v : cliques[i])
      if (!kept_set.count(v)) cliques_of_var[v].push_back(static_cast<int>(i));
  for (const auto& [v, members] : cliques_of_var)
    for (std::size_t k = 1; k < members.size(); ++k) uf.unite(members[0], members[k]);

  std::map<int, std::vector<int>> classes;  // root -> clique indices
  for (std::size_t i = 0; i < cliques.size(); ++i)
    classes[uf.find(static_cast<int>(i))].push_back(static_cast<int>(i));

  struct Group {
    std::vector<int> vertices;
    std::vector<int> members;
  };
  std::vector<Group> groups;
  for (const auto& [root, members] : classes) {
    std::set<int> verts;
    for (int ci : members) verts.insert(cliques[ci].begin(), cliques[ci].end());
    groups.push_back({std::vector<int>(verts.begin(), verts.end()), members});
  }
  std::sort(groups.begin(), groups.end(),
            [](const Group& a, const Group& b) { return a.vertices < b.vertices; });

  for (auto& g : groups) {
    part.groups.push_back(std::move(g.vertices));
    part.group_cliques.push_back(std::move(g.members));
  }
  return part;
}

Factor marginalized_factor(const DecomposableModel& model, const NPartition& partition,
                           std::size_t group_index, std::size_t* cell_tally) {
  if (group_index >= partition.groups.size())
    throw StructureError("group index out of range");
  std::set<int> kept_set(partition.kept.begin(), partition.kept.end());

  std::vector<Factor> pool;
  for (int ci : partition.group_cliques[group_index]) pool.push_back(model.cpts[ci]);

  std::set<int> eliminate;
  for (int v : partition.groups[group_index])
    if (!kept_set.count(v)) eliminate.insert(v);

  // Interaction adjacency over the variables still alive in the pool.
  std::map<int, std::set<int>> adj;
  for (const auto& f : pool)
    for (std::size_t i = 0; i < f.scope().size(); ++i)
      for (std::size_t j = 0; j < f.scope().size(); ++j)
        if (i != j) adj[f.scope()[i]].insert(f.scope()[j]);
  for (const auto& f : pool)
    for (int v : f.scope()) adj.try_emplace(v);

  while (!eliminate.empty()) {
    // Min-fill pick among the variables to eliminate, ties by smallest id.
    int pick = -1, best_fill = -1;
    for (int v : eliminate) {
      const auto& ns = adj.at(v);
      int fill = 0;
      for (auto it = ns.begin(); it != ns.end(); ++it) {
        auto jt = it;
        for (++jt; jt != ns.end(); ++jt)
          if (!adj.at(*it).count(*jt)) ++fill;
      }
      if (best_fill < 0 || fill < best_fill) {
        best_fill = fill;
        pick = v;
      }
    }

    Factor prod = Factor::scalar(1.0);
    std::vector<Factor> rest;
    for (auto& f : pool) {
      if (std::binary_search(f.scope().begin(), f.scope().end(), pick))
        prod = multiply(prod, f);
      else
        rest.push_back(std::move(f));
    }
    if (cell_tally) *cell_tally = std::max(*cell_tally, prod.size());
    rest.push_back(marginalize(prod, std::vector<int>{pick}));
    pool = std::move(rest);

    for (int u : adj.at(pick)) {
      adj.at(u).erase(pick);
      for (int w : adj.at(pick))
        if (w != u && w != pick) adj.at(u).insert(w);
    }
    adj.erase(pick);
    eliminate.erase(pick);
  }

  Factor out = Factor::scalar(1.0);
  for (const auto& f : pool) out = multiply(out, f);
  if (cell_tally) *cell_tally = std::max(*cell_tally, out.size());
  return out;
}

Factor marginalized_factor(const DecomposableModel& model, const NPartition& partition,
                           std::span<const int> group, std::size_t* cell_tally) {
  std::vector<int> g = sorted_unique(group);
  for (std::size_t i = 0; i < partition.groups.size(); ++i)
    if (partition.groups[i] == g) return marginalized_factor(model, partition, i, cell_tally);
  throw StructureError("vertex set is not a group of this partition");
}

UndirectedGraph kappa(const std::vector<std::vector<int>>& groups) {
  return UndirectedGraph::from_cliques(groups);
}

ChordalGraph gamma(const NPartition& partition) {
  UndirectedGraph k = kappa(partition.groups);
  std::set<int> keep(partition.kept.begin(), partition.kept.end());
  UndirectedGraph g = induced_subgraph(k, keep);
  auto peo = find_peo(g);
  if (!peo)
    throw StructureError("partition produced a non-chordal restriction graph");
  return ChordalGraph{std::move(g), std::move(*peo)};
}

MarkovNetwork marginal_network(const DecomposableModel& model, std::span<const int> kept,
                               std::size_t* cell_tally) {
  NPartition part = n_partition(model, kept);
  ChordalGraph graph = gamma(part);
  std::vector<NetFactor> factors;
  factors.reserve(part.groups.size());
  for (std::size_t gi = 0; gi < part.groups.size(); ++gi) {
    Factor f = marginalized_factor(model, part, gi, cell_tally);
    f.set_label("phi" + std::to_string(gi));
    factors.push_back({std::move(f), false});
  }
  return MarkovNetwork::make(std::move(graph), std::move(factors));
}

MarkovNetwork conditional_network(const DecomposableModel& model, std::span<const int> target,
                                  std::span<const int> given, EliminationOrder order,
                                  std::size_t* cell_tally) {
  std::vector<int> y = sorted_unique(target);
  std::vector<int> z = sorted_unique(given);
  if (y.empty()) throw StructureError("conditional target must be nonempty");
  for (int v : y)
    if (std::binary_search(z.begin(), z.end(), v))
      throw StructureError("conditional target and given sets must be disjoint");
  std::vector<int> w;
  std::set_union(y.begin(), y.end(), z.begin(), z.end(), std::back_inserter(w));

  MarkovNetwork num = marginal_network(model, w, cell_tally);
  MarkovNetwork den = marginal_network(model, z, cell_tally);
  return mn_quotient(num, den, order);
}

}  // namespace divkit
