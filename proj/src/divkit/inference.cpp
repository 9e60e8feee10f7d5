#include "divkit/inference.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace divkit {

namespace {

struct TreeLayout {
  CliqueTree tree;
  std::vector<std::vector<std::pair<int, int>>> adj;  // clique -> (neighbor, edge)
  std::vector<int> bfs;                               // root first
  std::vector<int> parent_edge;                       // edge index toward parent, -1 at root
  std::vector<int> parent;                            // -1 at root
};

TreeLayout layout(CliqueTree tree) {
  TreeLayout tl;
  tl.tree = std::move(tree);
  const int m = static_cast<int>(tl.tree.cliques.size());
  tl.adj.resize(m);
  for (std::size_t e = 0; e < tl.tree.edges.size(); ++e) {
    tl.adj[tl.tree.edges[e].a].push_back({tl.tree.edges[e].b, static_cast<int>(e)});
    tl.adj[tl.tree.edges[e].b].push_back({tl.tree.edges[e].a, static_cast<int>(e)});
  }
  if (m == 0) return tl;

  // Root at the largest clique, ties to the lexicographically smaller one.
  int root = 0;
  for (int i = 1; i < m; ++i)
    if (tl.tree.cliques[i].size() > tl.tree.cliques[root].size()) root = i;

  tl.parent.assign(m, -1);
  tl.parent_edge.assign(m, -1);
  std::vector<bool> seen(m, false);
  tl.bfs.push_back(root);
  seen[root] = true;
  for (std::size_t i = 0; i < tl.bfs.size(); ++i) {
    for (auto [nb, e] : tl.adj[tl.bfs[i]]) {
      if (seen[nb]) continue;
      seen[nb] = true;
      tl.parent[nb] = tl.bfs[i];
      tl.parent_edge[nb] = e;
      tl.bfs.push_back(nb);
    }
  }
  return tl;
}

// One sum-product sweep: the initial potentials are already attached; runs
// collect + distribute and returns the beliefs.
std::vector<Factor> propagate(const TreeLayout& tl, const std::vector<Factor>& potentials,
                              std::size_t& max_cells) {
  const int m = static_cast<int>(tl.tree.cliques.size());
  // message_to_parent[c] and message_to_child keyed by edge+direction.
  std::vector<Factor> up(m);    // from clique to its parent
  std::vector<Factor> down(m);  // from parent into clique

  // Collect: children before parents.
  for (int i = m - 1; i >= 1; --i) {
    int c = tl.bfs[i];
    Factor prod = potentials[c];
    for (auto [nb, e] : tl.adj[c]) {
      (void)e;
      if (tl.parent[c] == nb) continue;
      prod = multiply(prod, up[nb]);
    }
    const auto& sep = tl.tree.edges[tl.parent_edge[c]].separator;
    up[c] = marginalize_to(prod, sep);
    max_cells = std::max(max_cells, prod.size());
  }

  // Distribute: parents before children. Prefix/suffix products keep the
  // work linear in the degree even at hub cliques.
  for (int i = 0; i < m; ++i) {
    int p = tl.bfs[i];
    std::vector<std::pair<int, int>> children;
    for (auto [nb, e] : tl.adj[p])
      if (tl.parent[nb] == p) children.push_back({nb, e});
    if (children.empty()) continue;

    Factor base = potentials[p];
    if (tl.parent[p] >= 0) base = multiply(base, down[p]);
    const std::size_t k = children.size();
    std::vector<Factor> suffix(k + 1);
    suffix[k] = Factor::scalar(1.0);
    for (std::size_t j = k; j-- > 0;)
      suffix[j] = multiply(suffix[j + 1], up[children[j].first]);

    Factor prefix = std::move(base);
    for (std::size_t j = 0; j < k; ++j) {
      Factor prod = multiply(prefix, suffix[j + 1]);
      max_cells = std::max(max_cells, prod.size());
      down[children[j].first] =
          marginalize_to(prod, tl.tree.edges[children[j].second].separator);
      if (j + 1 < k) prefix = multiply(prefix, up[children[j].first]);
    }
  }

  std::vector<Factor> beliefs(m);
  for (int c = 0; c < m; ++c) {
    Factor b = potentials[c];
    if (tl.parent[c] >= 0) b = multiply(b, down[c]);
    for (auto [nb, e] : tl.adj[c]) {
      (void)e;
      if (tl.parent[c] == nb) continue;
      b = multiply(b, up[nb]);
    }
    beliefs[c] = std::move(b);
    max_cells = std::max(max_cells, beliefs[c].size());
  }
  return beliefs;
}

// First clique containing the scope, scanning only the membership list of
// the scope's rarest variable. Same result as a full scan in clique order.
int first_containing_indexed(const std::vector<std::vector<int>>& cliques,
                             const std::map<int, std::vector<int>>& cliques_of_var,
                             std::span<const int> scope) {
  if (scope.empty()) return cliques.empty() ? -1 : 0;
  const std::vector<int>* shortest = nullptr;
  for (int v : scope) {
    auto it = cliques_of_var.find(v);
    if (it == cliques_of_var.end()) return -1;
    if (!shortest || it->second.size() < shortest->size()) shortest = &it->second;
  }
  for (int ci : *shortest)
    if (std::includes(cliques[ci].begin(), cliques[ci].end(), scope.begin(), scope.end()))
      return ci;
  return -1;
}

}  // namespace

CalibratedTree calibrate(const VariableTable& vars, std::span<const int> universe,
                         const std::vector<const MarkovNetwork*>& nets,
                         std::span<const Factor> extra_factors,
                         const CalibrationOptions& options) {
  std::set<int> universe_set(universe.begin(), universe.end());

  // Union graph: every network graph plus a clique per extra-factor scope.
  UndirectedGraph base;
  for (const auto* n : nets) {
    for (int v : n->graph.graph.vertices()) base.add_vertex(v);
    for (auto [a, b] : n->graph.graph.edges()) base.add_edge(a, b);
    for (const auto& nf : n->factors)
      for (int v : nf.factor.scope()) base.add_vertex(v);
  }
  for (const auto& f : extra_factors) {
    for (std::size_t i = 0; i < f.scope().size(); ++i) {
      base.add_vertex(f.scope()[i]);
      for (std::size_t j = i + 1; j < f.scope().size(); ++j)
        base.add_edge(f.scope()[i], f.scope()[j]);
    }
  }
  for (int v : base.vertices())
    if (!universe_set.count(v))
      throw StructureError("factor variable " + std::to_string(v) +
                           " is not in the declared universe");

  CalibratedTree out;
  out.free_multiplier = 1.0;
  for (int v : universe)
    if (!base.has_vertex(v)) out.free_multiplier *= vars.cardinality(v);

  double scalar_acc = 1.0;
  if (base.vertex_count() == 0) {
    // Degenerate: only scalar factors (if any); no cliques to calibrate.
    for (const auto* n : nets)
      for (const auto& nf : n->factors)
        scalar_acc *= nf.reciprocal ? (nf.factor.values()[0] == 0.0
                                           ? 0.0
                                           : 1.0 / nf.factor.values()[0])
                                    : nf.factor.values()[0];
    for (const auto& f : extra_factors) scalar_acc *= f.values()[0];
    out.z = out.free_multiplier * scalar_acc;
    if (!std::isfinite(out.z)) throw OverflowError("non-finite-result in calibration");
    return out;
  }

  ChordalGraph h = computation_graph(std::vector<const UndirectedGraph*>{&base}, options.order);
  TreeLayout tl = layout(build_clique_tree(h));
  const auto& cliques = tl.tree.cliques;
  out.tw = 0;
  for (const auto& c : cliques) out.tw = std::max(out.tw, static_cast<int>(c.size()) - 1);
  for (std::size_t i = 0; i < cliques.size(); ++i)
    for (int v : cliques[i]) out.cliques_of_var[v].push_back(static_cast<int>(i));

  // Initial potentials: all-ones per clique, then each factor attaches to the
  // first clique containing its scope. Reciprocal factors are inverted with
  // 1/0 := 0; validity of that convention is established by the support
  // check below.
  std::vector<Factor> potentials;
  potentials.reserve(cliques.size());
  for (const auto& c : cliques) potentials.push_back(Factor::ones(c, vars.cards_of(c)));

  bool reciprocal_zero_seen = false;
  std::vector<std::pair<const Factor*, bool>> attached;  // (factor, reciprocal)
  for (const auto* n : nets)
    for (const auto& nf : n->factors) attached.push_back({&nf.factor, nf.reciprocal});
  for (const auto& f : extra_factors) attached.push_back({&f, false});

  for (auto [f, reciprocal] : attached) {
    int at = first_containing_indexed(cliques, out.cliques_of_var, f->scope());
    if (at < 0)
      throw StructureError("no clique covers factor scope" +
                           (f->label().empty() ? std::string() : ": " + f->label()));
    if (reciprocal) {
      if (!f->strictly_positive()) reciprocal_zero_seen = true;
      potentials[at] = multiply(potentials[at], map_reciprocal_or_zero(*f));
    } else {
      potentials[at] = multiply(potentials[at], *f);
    }
  }

  if (reciprocal_zero_seen) {
    // Support check: the quotient is well defined iff the numerator product
    // is zero wherever any denominator factor is zero. Count the numerator
    // support mass with and without the denominator indicators.
    std::vector<Factor> num_pot, all_pot;
    for (const auto& c : cliques) {
      num_pot.push_back(Factor::ones(c, vars.cards_of(c)));
      all_pot.push_back(Factor::ones(c, vars.cards_of(c)));
    }
    for (const auto* n : nets) {
      for (const auto& nf : n->factors) {
        int at = first_containing_indexed(cliques, out.cliques_of_var, nf.factor.scope());
        Factor ind = map_positive_indicator(nf.factor);
        if (!nf.reciprocal) num_pot[at] = multiply(num_pot[at], ind);
        all_pot[at] = multiply(all_pot[at], ind);
      }
    }
    std::size_t ignore = 0;
    double num_mass = propagate(tl, num_pot, ignore)[0].sum();
    double all_mass = propagate(tl, all_pot, ignore)[0].sum();
    if (num_mass > all_mass + 0.5 + 1e-12 * num_mass)
      throw UndefinedQuotientError(
          "quotient undefined: denominator vanishes on part of the numerator support");
  }

  out.beliefs = propagate(tl, potentials, out.max_cells);
  out.tree = std::move(tl.tree);
  out.z = out.free_multiplier * scalar_acc * out.beliefs[0].sum();
  for (const auto& b : out.beliefs)
    if (!b.all_finite()) throw OverflowError("non-finite-result in calibration");
  if (!std::isfinite(out.z)) throw OverflowError("non-finite-result in calibration");
  return out;
}

Factor clique_sum_product(const CalibratedTree& tree, std::span<const int> target_scope) {
  std::vector<int> scope(target_scope.begin(), target_scope.end());
  std::sort(scope.begin(), scope.end());
  if (tree.tree.cliques.empty()) {
    if (!scope.empty()) throw StructureError("target scope not covered by any clique");
    return Factor::scalar(tree.z / tree.free_multiplier);
  }
  int at = first_containing_indexed(tree.tree.cliques, tree.cliques_of_var, scope);
  if (at < 0) throw StructureError("target scope not covered by any clique");
  return marginalize_to(tree.beliefs[at], scope);
}

double weighted_log_moment(const VariableTable& vars, std::span<const int> universe,
                           const std::vector<const MarkovNetwork*>& weight_nets,
                           std::span<const Factor> log_factors,
                           const CalibrationOptions& options) {
  if (log_factors.empty() || log_factors.size() > 2)
    throw StructureError("weighted_log_moment takes 1 or 2 log factors");
  CalibratedTree cal = calibrate(vars, universe, weight_nets, log_factors, options);
  return cal.z;
}

}  // namespace divkit
