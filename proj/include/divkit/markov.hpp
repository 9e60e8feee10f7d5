#ifndef DIVKIT_MARKOV_HPP_
#define DIVKIT_MARKOV_HPP_

#include <span>
#include <vector>

#include "divkit/factor.hpp"
#include "divkit/graph.hpp"
#include "divkit/variables.hpp"

namespace divkit {

// A factor of a Markov network. Reciprocal factors come from network
// quotients and are stored flagged rather than eagerly inverted, so the
// 0/0 = 0 convention can be applied when potentials are combined.
struct NetFactor {
  Factor factor;
  bool reciprocal = false;
};

// Chordal Markov network: a triangulated graph plus factors whose scopes
// each fit inside some maximal clique.
struct MarkovNetwork {
  ChordalGraph graph;
  std::vector<NetFactor> factors;

  // Validates scope containment and nonnegativity of unflagged factors.
  static MarkovNetwork make(ChordalGraph graph, std::vector<NetFactor> factors);
};

// Decomposable model: one clique probability table per maximal clique of a
// chordal graph; the CPT product is the normalized joint.
struct DecomposableModel {
  VariableTable variables;
  ChordalGraph graph;                     // vertex set equals the variable table
  std::vector<std::vector<int>> cliques;  // maximal cliques, lexicographic
  std::vector<Factor> cpts;               // aligned with cliques

  MarkovNetwork as_network() const;
};

struct SampleDataset {
  VariableTable variables;
  std::vector<std::vector<int>> rows;  // complete assignments, in-range
};

// Ensures the vertex set covers all variables (missing ones become isolated
// vertices) and re-derives the PEO.
ChordalGraph cover_all_variables(const ChordalGraph& g, const VariableTable& vars);

// Product of Markov networks: union of graphs re-triangulated, factor lists
// concatenated.
MarkovNetwork mn_product(std::span<const MarkovNetwork* const> nets,
                         EliminationOrder order = EliminationOrder::min_fill);

// Quotient of Markov networks: denominator factors join flagged reciprocal
// (flags flip, so a quotient of a quotient unwinds).
MarkovNetwork mn_quotient(const MarkovNetwork& num, const MarkovNetwork& den,
                          EliminationOrder order = EliminationOrder::min_fill);

// Fits clique marginals with Dirichlet pseudocounts, then forms CPTs along a
// clique tree rooted at the lexicographically smallest clique: the root keeps
// its smoothed marginal, every other clique divides out its own separator
// marginal toward the root. The product is exactly normalized.
DecomposableModel fit_parameters(const ChordalGraph& structure, const SampleDataset& data,
                                 double pseudocount);

// Maximum-spanning tree over smoothed pairwise mutual information; ties by
// lexicographic edge. Trees are chordal, so the result feeds fit_parameters
// directly.
ChordalGraph chow_liu_structure(const SampleDataset& data, double pseudocount);

// Product of CPT entries at a complete assignment (indexed by variable id).
double joint_probability(const DecomposableModel& model, std::span<const int> assignment);

// Log-likelihood of a dataset under a model; -inf rows propagate.
double log_likelihood(const DecomposableModel& model, const SampleDataset& data);

// Checks CPT ranges and, via calibration, that the CPT product is normalized
// to 1 +- 1e-9. Throws StructureError on violation.
void validate_model(const DecomposableModel& model);

}  // namespace divkit

#endif  // DIVKIT_MARKOV_HPP_
