#include "divkit/markov.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "divkit/inference.hpp"

namespace divkit {

MarkovNetwork MarkovNetwork::make(ChordalGraph graph, std::vector<NetFactor> factors) {
  auto cliques = maximal_cliques(graph);
  for (const auto& nf : factors) {
    const auto& scope = nf.factor.scope();
    bool covered = scope.empty();
    for (const auto& c : cliques) {
      if (std::includes(c.begin(), c.end(), scope.begin(), scope.end())) {
        covered = true;
        break;
      }
    }
    if (!covered)
      throw StructureError("factor scope not contained in any maximal clique" +
                           (nf.factor.label().empty() ? std::string()
                                                      : ": " + nf.factor.label()));
    for (double v : nf.factor.values())
      if (v < 0.0)
        throw StructureError("network factor has a negative entry" +
                             (nf.factor.label().empty() ? std::string()
                                                        : ": " + nf.factor.label()));
  }
  return MarkovNetwork{std::move(graph), std::move(factors)};
}

MarkovNetwork DecomposableModel::as_network() const {
  std::vector<NetFactor> fs;
  fs.reserve(cpts.size());
  for (const auto& f : cpts) fs.push_back({f, false});
  return MarkovNetwork{graph, std::move(fs)};
}

ChordalGraph cover_all_variables(const ChordalGraph& g, const VariableTable& vars) {
  UndirectedGraph u = g.graph;
  for (int v : u.vertices())
    if (!vars.contains(v))
      throw StructureError("structure references unknown variable " + std::to_string(v));
  for (int id = 0; id < vars.size(); ++id) u.add_vertex(id);
  return as_chordal(u);
}

MarkovNetwork mn_product(std::span<const MarkovNetwork* const> nets, EliminationOrder order) {
  if (nets.empty()) throw StructureError("product of zero networks");
  std::vector<const UndirectedGraph*> graphs;
  graphs.reserve(nets.size());
  for (const auto* n : nets) graphs.push_back(&n->graph.graph);
  ChordalGraph h = computation_graph(graphs, order);
  std::vector<NetFactor> factors;
  for (const auto* n : nets)
    factors.insert(factors.end(), n->factors.begin(), n->factors.end());
  return MarkovNetwork{std::move(h), std::move(factors)};
}

MarkovNetwork mn_quotient(const MarkovNetwork& num, const MarkovNetwork& den,
                          EliminationOrder order) {
  std::vector<const UndirectedGraph*> graphs{&num.graph.graph, &den.graph.graph};
  ChordalGraph h = computation_graph(graphs, order);
  std::vector<NetFactor> factors = num.factors;
  for (const auto& nf : den.factors) factors.push_back({nf.factor, !nf.reciprocal});
  return MarkovNetwork{std::move(h), std::move(factors)};
}

namespace {

// Smoothed clique marginal: (counts + pc) / (N + pc * |domain|).
Factor smoothed_marginal(const std::vector<int>& clique, const SampleDataset& data,
                         double pseudocount) {
  std::vector<int> cards = data.variables.cards_of(clique);
  Factor counts = Factor::zeros(clique, cards);
  auto& vals = counts.mutable_values();
  std::vector<int> local(clique.size());
  for (const auto& row : data.rows) {
    for (std::size_t k = 0; k < clique.size(); ++k) local[k] = row[clique[k]];
    vals[counts.index_of(local)] += 1.0;
  }
  double denom = static_cast<double>(data.rows.size()) +
                 pseudocount * static_cast<double>(counts.size());
  if (denom <= 0.0)
    throw DataError("cannot fit from an empty dataset with pseudocount 0");
  for (double& v : vals) v = (v + pseudocount) / denom;
  return counts;
}

void check_rows(const SampleDataset& data) {
  const int n = data.variables.size();
  for (const auto& row : data.rows) {
    if (static_cast<int>(row.size()) != n) throw DataError("sample row has wrong arity");
    for (int id = 0; id < n; ++id)
      if (row[id] < 0 || row[id] >= data.variables.cardinality(id))
        throw DataError("sample value out of range for variable " +
                        data.variables.name(id));
  }
}

}  // namespace

DecomposableModel fit_parameters(const ChordalGraph& structure, const SampleDataset& data,
                                 double pseudocount) {
  if (pseudocount < 0.0) throw DataError("pseudocount must be >= 0");
  check_rows(data);
  ChordalGraph graph = cover_all_variables(structure, data.variables);
  CliqueTree tree = build_clique_tree(graph);
  const auto& cliques = tree.cliques;

  std::vector<Factor> marginals;
  marginals.reserve(cliques.size());
  for (const auto& c : cliques) marginals.push_back(smoothed_marginal(c, data, pseudocount));

  // Root the tree at clique 0 (lexicographically smallest); each non-root
  // clique divides its own marginal by its separator marginal toward the
  // root, so the product telescopes to a normalized joint.
  std::vector<Factor> cpts = marginals;
  std::vector<std::vector<std::pair<int, int>>> adj(cliques.size());
  for (std::size_t e = 0; e < tree.edges.size(); ++e) {
    adj[tree.edges[e].a].push_back({tree.edges[e].b, static_cast<int>(e)});
    adj[tree.edges[e].b].push_back({tree.edges[e].a, static_cast<int>(e)});
  }
  std::vector<int> order{0};
  std::vector<bool> seen(cliques.size(), false);
  seen[0] = true;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (auto [nb, e] : adj[order[i]]) {
      if (seen[nb]) continue;
      seen[nb] = true;
      order.push_back(nb);
      const auto& sep = tree.edges[e].separator;
      cpts[nb] = divide(marginals[nb], marginalize_to(marginals[nb], sep));
    }
  }

  DecomposableModel model{data.variables, std::move(graph), cliques, std::move(cpts)};
  for (std::size_t i = 0; i < model.cpts.size(); ++i)
    model.cpts[i].set_label("cpt" + std::to_string(i));
  return model;
}

ChordalGraph chow_liu_structure(const SampleDataset& data, double pseudocount) {
  const int n = data.variables.size();
  if (n < 2) throw DataError("Chow-Liu needs at least 2 variables");
  check_rows(data);

  struct Edge {
    double mi;
    int u, v;
  };
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      Factor joint = smoothed_marginal({u, v}, data, pseudocount);
      Factor pu = marginalize(joint, std::vector<int>{v});
      Factor pv = marginalize(joint, std::vector<int>{u});
      double mi = 0.0;
      const int cu = data.variables.cardinality(u);
      const int cv = data.variables.cardinality(v);
      for (int a = 0; a < cu; ++a) {
        for (int b = 0; b < cv; ++b) {
          double puv = joint.values()[static_cast<std::size_t>(a) * cv + b];
          if (puv <= 0.0) continue;
          mi += puv * std::log(puv / (pu.values()[a] * pv.values()[b]));
        }
      }
      edges.push_back({mi, u, v});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
    if (x.mi != y.mi) return x.mi > y.mi;
    if (x.u != y.u) return x.u < y.u;
    return x.v < y.v;
  });

  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  auto find = [&parent](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  UndirectedGraph tree;
  for (int i = 0; i < n; ++i) tree.add_vertex(i);
  int picked = 0;
  for (const Edge& e : edges) {
    int ru = find(e.u), rv = find(e.v);
    if (ru == rv) continue;
    parent[ru] = rv;
    tree.add_edge(e.u, e.v);
    if (++picked == n - 1) break;
  }
  return as_chordal(tree);
}

double joint_probability(const DecomposableModel& model, std::span<const int> assignment) {
  if (static_cast<int>(assignment.size()) != model.variables.size())
    throw StructureError("assignment arity does not match the variable table");
  double p = 1.0;
  std::vector<int> local;
  for (const auto& cpt : model.cpts) {
    local.clear();
    for (int v : cpt.scope()) local.push_back(assignment[v]);
    p *= cpt.values()[cpt.index_of(local)];
  }
  return p;
}

double log_likelihood(const DecomposableModel& model, const SampleDataset& data) {
  double ll = 0.0;
  for (const auto& row : data.rows) ll += std::log(joint_probability(model, row));
  return ll;
}

void validate_model(const DecomposableModel& model) {
  if (model.cliques.size() != model.cpts.size())
    throw StructureError("model must carry exactly one table per maximal clique");
  auto cliques = maximal_cliques(model.graph);
  if (cliques != model.cliques)
    throw StructureError("model clique list does not match the graph's maximal cliques");
  for (std::size_t i = 0; i < model.cpts.size(); ++i) {
    if (model.cpts[i].scope() != model.cliques[i])
      throw StructureError("table scope does not match its clique");
    for (double v : model.cpts[i].values())
      if (v < 0.0 || v > 1.0 + 1e-12)
        throw StructureError("table entry outside [0, 1] in clique " + std::to_string(i));
  }
  for (int id = 0; id < model.variables.size(); ++id)
    if (!model.graph.graph.has_vertex(id))
      throw StructureError("graph is missing variable " + std::to_string(id));

  MarkovNetwork net = model.as_network();
  auto ids = model.variables.all_ids();
  CalibratedTree cal = calibrate(model.variables, ids, {&net});
  if (std::fabs(cal.z - 1.0) > 1e-9)
    throw StructureError("model is not normalized: CPT product sums to " +
                         std::to_string(cal.z));
}

}  // namespace divkit
