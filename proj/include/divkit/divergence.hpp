#ifndef DIVKIT_DIVERGENCE_HPP_
#define DIVKIT_DIVERGENCE_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "divkit/inference.hpp"
#include "divkit/marginal.hpp"
#include "divkit/markov.hpp"

namespace divkit {

// The five parameter branches of the alpha-beta divergence.
enum class Branch { general, alpha_only, opposite, beta_only, both_zero };

const char* branch_name(Branch b);

struct ABParams {
  double alpha = 1.0;
  double beta = 0.0;
  Branch branch = Branch::alpha_only;

  static ABParams make(double alpha, double beta);
};

struct DivergenceScope {
  enum class Kind { joint, marginal, conditional };
  Kind kind = Kind::joint;
  std::vector<int> target;  // Z for marginal, Y for conditional
  std::vector<int> given;   // Z for conditional

  static DivergenceScope joint() { return {}; }
  static DivergenceScope marginal(std::vector<int> z);
  static DivergenceScope conditional(std::vector<int> y, std::vector<int> z);
};

struct DivergenceRequest {
  ABParams params;
  DivergenceScope scope;
};

struct Diagnostics {
  std::vector<int> treewidths;        // one per calibration run
  std::size_t max_table_cells = 1;
  double millis = 0.0;
};

struct DivergenceResult {
  double value = 0.0;
  ABParams params;
  DivergenceScope scope;
  Diagnostics diagnostics;
};

struct EngineOptions {
  EliminationOrder order = EliminationOrder::min_fill;
};

// S(a,b) = sum over the universe of P^a Q^b (times the weight networks, used
// by the conditional reduction). Exponent 0 drops that side's factors.
double power_sum(const VariableTable& vars, std::span<const int> universe,
                 const MarkovNetwork& pnet, const MarkovNetwork& qnet, double a, double b,
                 const std::vector<const MarkovNetwork*>& weights = {},
                 const EngineOptions& options = {}, Diagnostics* diag = nullptr);

// T(a,b;c,d) = sum of P^a Q^b ln(P^c Q^d): one calibration for the weights,
// then a log-dot per factor. Reciprocal factors contribute negative logs.
double log_moment_sum(const VariableTable& vars, std::span<const int> universe,
                      const MarkovNetwork& pnet, const MarkovNetwork& qnet, double a, double b,
                      double c, double d, const std::vector<const MarkovNetwork*>& weights = {},
                      const EngineOptions& options = {}, Diagnostics* diag = nullptr);

// Sum of weight(x) * (ln prod P - ln prod Q)^2 via the pairwise expansion
// over the signed log-factor list.
double log_square_sum(const VariableTable& vars, std::span<const int> universe,
                      const MarkovNetwork& pnet, const MarkovNetwork& qnet,
                      const std::vector<const MarkovNetwork*>& weights = {},
                      const EngineOptions& options = {}, Diagnostics* diag = nullptr);

DivergenceResult ab_divergence(const DecomposableModel& p, const DecomposableModel& q,
                               const DivergenceRequest& request,
                               const EngineOptions& options = {});

enum class NamedDivergence { kl, reverse_kl, hellinger, itakura_saito, log_l2 };

std::optional<NamedDivergence> named_divergence_from(const std::string& name);
const char* to_string(NamedDivergence name);

// hellinger reports the Hellinger distance in [0, 1]; the others report the
// alpha-beta divergence at their parameter point.
DivergenceResult named_divergence(const DecomposableModel& p, const DecomposableModel& q,
                                  NamedDivergence name, const DivergenceScope& scope,
                                  const EngineOptions& options = {});

struct GridCell {
  std::vector<int> tuple;
  double value = 0.0;
};

// Marginal divergence for every variable tuple of the given order (or the
// provided tuples), in lexicographic tuple order. Tuples fan out across
// threads; ordering is independent of thread count.
std::vector<GridCell> divergence_grid(const DecomposableModel& p, const DecomposableModel& q,
                                      int order, NamedDivergence name,
                                      const std::vector<std::vector<int>>* tuples = nullptr,
                                      int threads = 0, const EngineOptions& options = {});

}  // namespace divkit

#endif  // DIVKIT_DIVERGENCE_HPP_
