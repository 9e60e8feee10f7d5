#ifndef DIVKIT_ORACLE_HPP_
#define DIVKIT_ORACLE_HPP_

#include "divkit/divergence.hpp"
#include "divkit/markov.hpp"

namespace divkit {

// Brute-force reference implementation over explicit joint tables. The
// ground truth every engine path is tested against; performance is a
// non-goal and domains are guarded.
struct JointTable {
  VariableTable variables;
  std::vector<double> probabilities;  // same indexing convention as Factor

  Factor as_factor() const;
};

inline constexpr double kOracleCellGuard = 16777216.0;  // 2^24

JointTable joint_table(const DecomposableModel& model);

// Literal evaluation of the divergence over the full domain: joint sums the
// pointwise terms, marginal sums tables down first, conditional weights
// slices by P_Z (zero-probability contexts contribute nothing).
double oracle_divergence(const JointTable& p, const JointTable& q,
                         const DivergenceRequest& request);

// Pointwise alpha-beta divergence kernel (exposed for tests).
double ab_pointwise(double p, double q, const ABParams& params);

}  // namespace divkit

#endif  // DIVKIT_ORACLE_HPP_
