#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "divkit/graph.hpp"

using namespace divkit;

namespace {

UndirectedGraph triangle() {
  UndirectedGraph g;
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(0, 2);
  return g;
}

UndirectedGraph four_cycle() {
  UndirectedGraph g;
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 3);
  g.add_edge(0, 3);
  return g;
}

// Clique structure of the partition example: cliques {2,3,5},{1,2},{3,4},
// {5,8},{3,6},{8,9},{6,7} flattened to vertex edges.
UndirectedGraph nine_vertex_example() {
  return UndirectedGraph::from_cliques(
      {{2, 3, 5}, {1, 2}, {3, 4}, {5, 8}, {3, 6}, {8, 9}, {6, 7}});
}

// Star model: edges 1-3, 2-3, 3-4, 4-5, 4-6 (already chordal).
UndirectedGraph six_vertex_tree() {
  UndirectedGraph g;
  g.add_edge(1, 3);
  g.add_edge(2, 3);
  g.add_edge(3, 4);
  g.add_edge(4, 5);
  g.add_edge(4, 6);
  return g;
}

bool running_intersection_holds(const CliqueTree& tree) {
  // For every vertex, the cliques containing it must induce a connected
  // subtree.
  std::set<int> verts;
  for (const auto& c : tree.cliques) verts.insert(c.begin(), c.end());
  for (int v : verts) {
    std::vector<int> members;
    for (std::size_t i = 0; i < tree.cliques.size(); ++i)
      if (std::binary_search(tree.cliques[i].begin(), tree.cliques[i].end(), v))
        members.push_back(static_cast<int>(i));
    if (members.size() <= 1) continue;
    std::set<int> reached{members[0]};
    bool grew = true;
    while (grew) {
      grew = false;
      for (const auto& e : tree.edges) {
        bool a_in = reached.count(e.a), b_in = reached.count(e.b);
        bool a_member = std::binary_search(members.begin(), members.end(), e.a);
        bool b_member = std::binary_search(members.begin(), members.end(), e.b);
        if (a_in && !b_in && a_member && b_member) {
          reached.insert(e.b);
          grew = true;
        } else if (b_in && !a_in && a_member && b_member) {
          reached.insert(e.a);
          grew = true;
        }
      }
    }
    if (reached.size() != members.size()) return false;
  }
  return true;
}

UndirectedGraph random_graph(int n, double p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  UndirectedGraph g;
  for (int v = 0; v < n; ++v) g.add_vertex(v);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (coin(rng) < p) g.add_edge(u, v);
  return g;
}

}  // namespace

TEST_CASE("is_chordal: complete graphs, holes, nine-vertex example") {
  CHECK(is_chordal(triangle()));
  CHECK_FALSE(is_chordal(four_cycle()));
  CHECK(is_chordal(nine_vertex_example()));
}

TEST_CASE("computation_graph keeps chordal inputs untouched") {
  UndirectedGraph t = triangle();
  std::vector<UndirectedGraph> in{t, t};
  ChordalGraph out = computation_graph(in);
  CHECK(out.graph.edge_count() == 3);
  CHECK(is_chordal(out.graph));

  ChordalGraph tree = computation_graph(std::vector<UndirectedGraph>{six_vertex_tree()});
  CHECK(tree.graph.edge_count() == 5);  // zero fill-in
  CHECK(is_chordal(tree.graph));
}

TEST_CASE("computation_graph triangulates a 4-cycle with one chord") {
  ChordalGraph out = computation_graph(std::vector<UndirectedGraph>{four_cycle()});
  CHECK(out.graph.edge_count() == 5);
  CHECK(is_chordal(out.graph));
  // every input edge is present
  for (auto [u, v] : four_cycle().edges()) CHECK(out.graph.has_edge(u, v));
}

TEST_CASE("computation_graph contains all input vertices and edges") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    UndirectedGraph g1 = random_graph(8, 0.3, rng);
    UndirectedGraph g2 = random_graph(8, 0.3, rng);
    ChordalGraph out = computation_graph(std::vector<UndirectedGraph>{g1, g2});
    CHECK(is_chordal(out.graph));
    for (auto [u, v] : g1.edges()) CHECK(out.graph.has_edge(u, v));
    for (auto [u, v] : g2.edges()) CHECK(out.graph.has_edge(u, v));
  }
}

TEST_CASE("maximal_cliques: triangle, star example, isolated vertex") {
  CHECK(maximal_cliques(as_chordal(triangle())) ==
        std::vector<std::vector<int>>{{0, 1, 2}});

  // Edges 1-2, 1-4, 2-4, 4-5, 4-6: cliques {1,2,4},{4,5},{4,6}.
  UndirectedGraph g;
  g.add_edge(1, 2);
  g.add_edge(1, 4);
  g.add_edge(2, 4);
  g.add_edge(4, 5);
  g.add_edge(4, 6);
  CHECK(maximal_cliques(as_chordal(g)) ==
        std::vector<std::vector<int>>{{1, 2, 4}, {4, 5}, {4, 6}});

  UndirectedGraph lone;
  lone.add_vertex(7);
  CHECK(maximal_cliques(as_chordal(lone)) == std::vector<std::vector<int>>{{7}});
}

TEST_CASE("maximal cliques of chordal graphs cover V and are antichains") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    ChordalGraph g = computation_graph(std::vector<UndirectedGraph>{random_graph(9, 0.25, rng)});
    auto cliques = maximal_cliques(g);
    CHECK(cliques.size() <= g.graph.vertex_count());
    std::set<int> covered;
    for (const auto& c : cliques) covered.insert(c.begin(), c.end());
    CHECK(covered.size() == g.graph.vertex_count());
    for (std::size_t i = 0; i < cliques.size(); ++i)
      for (std::size_t j = 0; j < cliques.size(); ++j)
        if (i != j)
          CHECK_FALSE(std::includes(cliques[i].begin(), cliques[i].end(), cliques[j].begin(),
                                    cliques[j].end()));
  }
}

TEST_CASE("build_clique_tree: forced separator, nine-vertex tree, single clique") {
  UndirectedGraph g = UndirectedGraph::from_cliques({{1, 2, 3}, {3, 4}});
  CliqueTree t = build_clique_tree(as_chordal(g));
  REQUIRE(t.edges.size() == 1);
  CHECK(t.edges[0].separator == std::vector<int>{3});

  CliqueTree nine = build_clique_tree(as_chordal(nine_vertex_example()));
  CHECK(nine.cliques == std::vector<std::vector<int>>{
                             {1, 2}, {2, 3, 5}, {3, 4}, {3, 6}, {5, 8}, {6, 7}, {8, 9}});
  std::multiset<std::vector<int>> seps;
  for (const auto& e : nine.edges) seps.insert(e.separator);
  CHECK(seps == std::multiset<std::vector<int>>{{2}, {3}, {3}, {5}, {6}, {8}});
  CHECK(running_intersection_holds(nine));

  CliqueTree single = build_clique_tree(as_chordal(triangle()));
  CHECK(single.cliques.size() == 1);
  CHECK(single.edges.empty());
}

TEST_CASE("clique trees satisfy running intersection on random graphs") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    ChordalGraph g =
        computation_graph(std::vector<UndirectedGraph>{random_graph(10, 0.2, rng)});
    CliqueTree t = build_clique_tree(g);
    CHECK(t.edges.size() + 1 == t.cliques.size());
    CHECK(running_intersection_holds(t));
    for (const auto& e : t.edges) {
      std::vector<int> inter;
      std::set_intersection(t.cliques[e.a].begin(), t.cliques[e.a].end(),
                            t.cliques[e.b].begin(), t.cliques[e.b].end(),
                            std::back_inserter(inter));
      CHECK(e.separator == inter);
    }
  }
}

TEST_CASE("disconnected graphs stitch into one tree with empty separators") {
  UndirectedGraph g;
  g.add_edge(0, 1);
  g.add_edge(2, 3);
  CliqueTree t = build_clique_tree(as_chordal(g));
  REQUIRE(t.cliques.size() == 2);
  REQUIRE(t.edges.size() == 1);
  CHECK(t.edges[0].separator.empty());
}

TEST_CASE("induced_subgraph: pairs, partition-graph restriction, empty keep") {
  UndirectedGraph t = triangle();
  UndirectedGraph sub = induced_subgraph(t, {0, 1});
  CHECK(sub.vertex_count() == 2);
  CHECK(sub.edge_count() == 1);

  // kappa graph of the partition example restricted to Z = {1,3,4,7,8}
  UndirectedGraph k =
      UndirectedGraph::from_cliques({{8, 9}, {1, 2, 3, 5, 8}, {3, 6, 7}, {3, 4}});
  UndirectedGraph gz = induced_subgraph(k, {1, 3, 4, 7, 8});
  CHECK(maximal_cliques(as_chordal(gz)) ==
        std::vector<std::vector<int>>{{1, 3, 8}, {3, 4}, {3, 7}});

  CHECK(induced_subgraph(t, {}).vertex_count() == 0);
}

TEST_CASE("determinism: same input gives the same fill and the same tree") {
  std::mt19937_64 rng(37);
  UndirectedGraph g = random_graph(10, 0.3, rng);
  ChordalGraph a = computation_graph(std::vector<UndirectedGraph>{g});
  ChordalGraph b = computation_graph(std::vector<UndirectedGraph>{g});
  CHECK(a.peo == b.peo);
  CHECK(a.graph.edges() == b.graph.edges());
  CliqueTree ta = build_clique_tree(a);
  CliqueTree tb = build_clique_tree(b);
  CHECK(ta.cliques == tb.cliques);
  REQUIRE(ta.edges.size() == tb.edges.size());
  for (std::size_t i = 0; i < ta.edges.size(); ++i) {
    CHECK(ta.edges[i].a == tb.edges[i].a);
    CHECK(ta.edges[i].b == tb.edges[i].b);
  }
}

TEST_CASE("reverse-id elimination also yields a chordal completion") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    UndirectedGraph g = random_graph(8, 0.3, rng);
    ChordalGraph out =
        computation_graph(std::vector<UndirectedGraph>{g}, EliminationOrder::reverse_id);
    CHECK(is_chordal(out.graph));
    for (auto [u, v] : g.edges()) CHECK(out.graph.has_edge(u, v));
  }
}

TEST_CASE("self-loops are rejected") {
  UndirectedGraph g;
  CHECK_THROWS_AS(g.add_edge(3, 3), StructureError);
}
