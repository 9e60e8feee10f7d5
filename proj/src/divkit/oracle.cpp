#include "divkit/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace divkit {

Factor JointTable::as_factor() const {
  auto ids = variables.all_ids();
  return Factor(ids, variables.cards_of(ids), probabilities);
}

JointTable joint_table(const DecomposableModel& model) {
  auto ids = model.variables.all_ids();
  double cells = model.variables.domain_size(ids);
  if (cells > kOracleCellGuard)
    throw DomainGuardError("joint table would need " + std::to_string(cells) +
                           " cells (guard is 2^24)");
  std::vector<int> cards = model.variables.cards_of(ids);
  std::size_t total = 1;
  for (int c : cards) total *= static_cast<std::size_t>(c);

  JointTable table{model.variables, std::vector<double>(total, 0.0)};
  std::vector<int> assignment(ids.size(), 0);
  for (std::size_t i = 0; i < total; ++i) {
    table.probabilities[i] = joint_probability(model, assignment);
    for (int k = static_cast<int>(assignment.size()) - 1; k >= 0; --k) {
      if (++assignment[k] < cards[k]) break;
      assignment[k] = 0;
    }
  }
  return table;
}

double ab_pointwise(double p, double q, const ABParams& params) {
  const double a = params.alpha;
  const double b = params.beta;
  auto require_positive = [](double v) {
    if (v <= 0.0) throw PositivityError("log of nonpositive probability");
  };
  auto pw = [](double base, double e) {
    if (base == 0.0) {
      if (e < 0.0) throw PositivityError("negative power of zero probability");
      return 0.0;
    }
    return std::pow(base, e);
  };
  switch (params.branch) {
    case Branch::general:
      return -1.0 / (a * b) *
             (pw(p, a) * pw(q, b) - a / (a + b) * pw(p, a + b) - b / (a + b) * pw(q, a + b));
    case Branch::alpha_only:
      require_positive(p);
      require_positive(q);
      return 1.0 / (a * a) * (pw(p, a) * a * (std::log(p) - std::log(q)) - pw(p, a) + pw(q, a));
    case Branch::opposite:
      require_positive(p);
      require_positive(q);
      return 1.0 / (a * a) *
             (a * (std::log(q) - std::log(p)) + pw(p, a) * pw(q, -a) - 1.0);
    case Branch::beta_only:
      require_positive(p);
      require_positive(q);
      return 1.0 / (b * b) * (pw(q, b) * b * (std::log(q) - std::log(p)) - pw(q, b) + pw(p, b));
    case Branch::both_zero: {
      require_positive(p);
      require_positive(q);
      double d = std::log(p) - std::log(q);
      return 0.5 * d * d;
    }
  }
  return 0.0;
}

double oracle_divergence(const JointTable& p, const JointTable& q,
                         const DivergenceRequest& request) {
  if (!p.variables.same_as(q.variables))
    throw StructureError("joint tables are defined over different variable tables");
  ABParams params = ABParams::make(request.params.alpha, request.params.beta);
  const DivergenceScope& scope = request.scope;

  Factor pf = p.as_factor();
  Factor qf = q.as_factor();

  switch (scope.kind) {
    case DivergenceScope::Kind::joint: {
      double acc = 0.0;
      for (std::size_t i = 0; i < pf.values().size(); ++i)
        acc += ab_pointwise(pf.values()[i], qf.values()[i], params);
      return acc;
    }
    case DivergenceScope::Kind::marginal: {
      Factor pz = marginalize_to(pf, scope.target);
      Factor qz = marginalize_to(qf, scope.target);
      double acc = 0.0;
      for (std::size_t i = 0; i < pz.values().size(); ++i)
        acc += ab_pointwise(pz.values()[i], qz.values()[i], params);
      return acc;
    }
    case DivergenceScope::Kind::conditional: {
      std::vector<int> w;
      std::set_union(scope.target.begin(), scope.target.end(), scope.given.begin(),
                     scope.given.end(), std::back_inserter(w));
      Factor pw = marginalize_to(pf, w);
      Factor qw = marginalize_to(qf, w);
      Factor pz = marginalize_to(pw, scope.given);
      Factor qz = marginalize_to(qw, scope.given);

      // Walk the W table; per cell, look up the given-part marginals.
      const auto& wscope = pw.scope();
      std::vector<std::size_t> zpos;  // positions of given variables inside W
      for (int v : scope.given)
        zpos.push_back(static_cast<std::size_t>(
            std::lower_bound(wscope.begin(), wscope.end(), v) - wscope.begin()));

      double acc = 0.0;
      std::vector<int> zvals(scope.given.size());
      for (std::size_t i = 0; i < pw.values().size(); ++i) {
        std::vector<int> assignment = pw.assignment_of(i);
        for (std::size_t k = 0; k < zpos.size(); ++k) zvals[k] = assignment[zpos[k]];
        double pzv = scope.given.empty() ? 1.0 : pz.values()[pz.index_of(zvals)];
        if (pzv == 0.0) continue;
        double qzv = scope.given.empty() ? 1.0 : qz.values()[qz.index_of(zvals)];
        double pcond = pw.values()[i] / pzv;
        double qcond = qzv == 0.0 ? 0.0 : qw.values()[i] / qzv;
        acc += pzv * ab_pointwise(pcond, qcond, params);
      }
      return acc;
    }
  }
  throw StructureError("unknown divergence scope");
}

}  // namespace divkit
