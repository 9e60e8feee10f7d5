#ifndef DIVKIT_GRAPH_HPP_
#define DIVKIT_GRAPH_HPP_

#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "divkit/errors.hpp"

namespace divkit {

// Simple undirected graph over integer vertex ids. Ordered containers keep
// every traversal deterministic.
class UndirectedGraph {
 public:
  void add_vertex(int v) { adj_.try_emplace(v); }

  void add_edge(int u, int v) {
    if (u == v) throw StructureError("self-loop on vertex " + std::to_string(u));
    adj_[u].insert(v);
    adj_[v].insert(u);
  }

  bool has_vertex(int v) const { return adj_.count(v) != 0; }
  bool has_edge(int u, int v) const {
    auto it = adj_.find(u);
    return it != adj_.end() && it->second.count(v) != 0;
  }

  const std::set<int>& neighbors(int v) const {
    auto it = adj_.find(v);
    if (it == adj_.end()) throw StructureError("unknown vertex " + std::to_string(v));
    return it->second;
  }

  std::vector<int> vertices() const {
    std::vector<int> vs;
    vs.reserve(adj_.size());
    for (const auto& [v, _] : adj_) vs.push_back(v);
    return vs;
  }

  std::size_t vertex_count() const { return adj_.size(); }

  std::size_t edge_count() const {
    std::size_t e = 0;
    for (const auto& [_, ns] : adj_) e += ns.size();
    return e / 2;
  }

  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (const auto& [v, ns] : adj_)
      for (int u : ns)
        if (v < u) out.emplace_back(v, u);
    return out;
  }

  // Turns every vertex set into a clique.
  static UndirectedGraph from_cliques(const std::vector<std::vector<int>>& cliques);

 private:
  std::map<int, std::set<int>> adj_;
};

// A triangulated graph together with a perfect elimination ordering.
struct ChordalGraph {
  UndirectedGraph graph;
  std::vector<int> peo;  // peo[0] eliminated first; later neighbors form cliques
};

struct CliqueTreeEdge {
  int a = 0;
  int b = 0;
  std::vector<int> separator;  // intersection of the endpoint cliques
};

// Tree over the maximal cliques of a chordal graph (running intersection
// property holds; disconnected components are stitched with empty
// separators).
struct CliqueTree {
  std::vector<std::vector<int>> cliques;  // each sorted; list sorted lexicographically
  std::vector<CliqueTreeEdge> edges;
};

enum class EliminationOrder {
  min_fill,    // greedy minimum fill-in, ties by smallest vertex id
  reverse_id,  // eliminate in descending vertex id order
};

// Maximum-cardinality search; returns a PEO if the graph is chordal.
std::optional<std::vector<int>> find_peo(const UndirectedGraph& g);

bool is_chordal(const UndirectedGraph& g);

// Validates chordality and attaches a PEO.
ChordalGraph as_chordal(const UndirectedGraph& g);

// Chordal supergraph containing every vertex and edge of every input
// (union, then triangulation by the chosen elimination policy).
ChordalGraph computation_graph(std::span<const UndirectedGraph* const> graphs,
                               EliminationOrder order = EliminationOrder::min_fill);
ChordalGraph computation_graph(const std::vector<UndirectedGraph>& graphs,
                               EliminationOrder order = EliminationOrder::min_fill);

// Maximal cliques of a chordal graph, each sorted, list sorted
// lexicographically.
std::vector<std::vector<int>> maximal_cliques(const ChordalGraph& g);

// Max-weight spanning tree over clique intersections; ties broken by clique
// index pair so identical inputs give identical trees.
CliqueTree build_clique_tree(const ChordalGraph& g);

UndirectedGraph induced_subgraph(const UndirectedGraph& g, const std::set<int>& keep);

// Largest clique size minus one.
int treewidth(const ChordalGraph& g);

}  // namespace divkit

#endif  // DIVKIT_GRAPH_HPP_
