#ifndef DIVKIT_MARGINAL_HPP_
#define DIVKIT_MARGINAL_HPP_

#include <span>
#include <vector>

#include "divkit/markov.hpp"

namespace divkit {

// Grouping of a model's maximal cliques that isolates the variables to be
// summed out: cliques sharing an eliminated variable land in the same group
// (transitively), cliques touching none form singleton groups.
struct NPartition {
  std::vector<std::vector<int>> groups;         // vertex union per group, sorted
  std::vector<std::vector<int>> group_cliques;  // clique indices per group
  std::vector<int> kept;                        // Z, sorted
};

NPartition n_partition(const DecomposableModel& model, std::span<const int> kept);

// Sum of the group's CPT product over the group's eliminated variables,
// computed by variable elimination inside the group (min-fill order). Scope
// is group ∩ Z; an all-eliminated group yields a scalar.
Factor marginalized_factor(const DecomposableModel& model, const NPartition& partition,
                           std::size_t group_index, std::size_t* cell_tally = nullptr);

// Overload addressed by group vertex set (must be one of partition.groups).
Factor marginalized_factor(const DecomposableModel& model, const NPartition& partition,
                           std::span<const int> group, std::size_t* cell_tally = nullptr);

// Sets-to-cliques constructor: every vertex set becomes a clique.
UndirectedGraph kappa(const std::vector<std::vector<int>>& groups);

// kappa restricted to the kept variables; chordal by construction (the
// groups merge adjacent cliques of a clique tree).
ChordalGraph gamma(const NPartition& partition);

// Markov network whose factor product equals the exact marginal over Z.
MarkovNetwork marginal_network(const DecomposableModel& model, std::span<const int> kept,
                               std::size_t* cell_tally = nullptr);

// Quotient network M_{Y∪Z} / M_Z; factor product equals P(Y|Z) wherever
// P_Z > 0.
MarkovNetwork conditional_network(const DecomposableModel& model, std::span<const int> target,
                                  std::span<const int> given,
                                  EliminationOrder order = EliminationOrder::min_fill,
                                  std::size_t* cell_tally = nullptr);

}  // namespace divkit

#endif  // DIVKIT_MARGINAL_HPP_
