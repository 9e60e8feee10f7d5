#ifndef DIVKIT_INFERENCE_HPP_
#define DIVKIT_INFERENCE_HPP_

#include <map>
#include <span>
#include <vector>

#include "divkit/markov.hpp"

namespace divkit {

struct CalibrationOptions {
  EliminationOrder order = EliminationOrder::min_fill;
};

// Result of calibrating a clique tree over a factor collection: one belief
// per maximal clique of the computation graph, each equal to the sum over
// all other universe variables of the product of every factor (reciprocal
// factors dividing under the 0/0 = 0 convention). Universe variables that
// appear in no clique contribute the free multiplier.
struct CalibratedTree {
  CliqueTree tree;
  std::vector<Factor> beliefs;  // aligned with tree.cliques
  double free_multiplier = 1.0;
  double z = 1.0;               // total sum including the free multiplier
  int tw = 0;                   // treewidth of the computation graph
  std::size_t max_cells = 1;    // largest table materialized

  // clique indices per variable, ascending; speeds up scope lookups
  std::map<int, std::vector<int>> cliques_of_var;
};

// Two-pass division-free calibration over the computation graph of the given
// networks. Extra factors may carry arbitrary signed values (log tables);
// their scopes are added to the computation graph as cliques. Throws
// UndefinedQuotientError when a reciprocal factor is zero somewhere the
// remaining factor product is positive, and OverflowError on non-finite
// results.
CalibratedTree calibrate(const VariableTable& vars, std::span<const int> universe,
                         const std::vector<const MarkovNetwork*>& nets,
                         std::span<const Factor> extra_factors = {},
                         const CalibrationOptions& options = {});

// Belief of the first clique containing the target scope, marginalized down
// to it. Does not include the free multiplier.
Factor clique_sum_product(const CalibratedTree& tree, std::span<const int> target_scope);

// Sum over the universe of (product of weight-network factors) x (product of
// the 1 or 2 log-valued factors). Empty weights mean weight 1, so only the
// log factor scopes constrain the sum and free variables multiply in.
double weighted_log_moment(const VariableTable& vars, std::span<const int> universe,
                           const std::vector<const MarkovNetwork*>& weight_nets,
                           std::span<const Factor> log_factors,
                           const CalibrationOptions& options = {});

}  // namespace divkit

#endif  // DIVKIT_INFERENCE_HPP_
