#include "divkit/divergence.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

namespace divkit {

const char* branch_name(Branch b) {
  switch (b) {
    case Branch::general: return "general";
    case Branch::alpha_only: return "alpha-only";
    case Branch::opposite: return "opposite";
    case Branch::beta_only: return "beta-only";
    case Branch::both_zero: return "both-zero";
  }
  return "?";
}

ABParams ABParams::make(double alpha, double beta) {
  Branch branch;
  if (alpha == 0.0 && beta == 0.0)
    branch = Branch::both_zero;
  else if (beta == 0.0)
    branch = Branch::alpha_only;
  else if (alpha == 0.0)
    branch = Branch::beta_only;
  else if (alpha + beta == 0.0)
    branch = Branch::opposite;
  else
    branch = Branch::general;
  return ABParams{alpha, beta, branch};
}

DivergenceScope DivergenceScope::marginal(std::vector<int> z) {
  std::sort(z.begin(), z.end());
  z.erase(std::unique(z.begin(), z.end()), z.end());
  if (z.empty()) throw StructureError("marginal scope must be nonempty");
  return DivergenceScope{Kind::marginal, std::move(z), {}};
}

DivergenceScope DivergenceScope::conditional(std::vector<int> y, std::vector<int> z) {
  std::sort(y.begin(), y.end());
  y.erase(std::unique(y.begin(), y.end()), y.end());
  std::sort(z.begin(), z.end());
  z.erase(std::unique(z.begin(), z.end()), z.end());
  if (y.empty()) throw StructureError("conditional target must be nonempty");
  for (int v : y)
    if (std::binary_search(z.begin(), z.end(), v))
      throw StructureError("conditional target and given sets must be disjoint");
  return DivergenceScope{Kind::conditional, std::move(y), std::move(z)};
}

namespace {

void tally(Diagnostics* diag, const CalibratedTree& cal) {
  if (!diag) return;
  diag->treewidths.push_back(cal.tw);
  diag->max_table_cells = std::max(diag->max_table_cells, cal.max_cells);
}

// Raise every factor to a power; exponent 0 keeps the graph but drops the
// factors (variables it loses fall under the free-variable rule).
MarkovNetwork powered(const MarkovNetwork& net, double e) {
  MarkovNetwork out;
  out.graph = net.graph;
  if (e == 0.0) return out;
  out.factors.reserve(net.factors.size());
  for (const auto& nf : net.factors)
    out.factors.push_back({map_power(nf.factor, e), nf.reciprocal});
  return out;
}

}  // namespace

double power_sum(const VariableTable& vars, std::span<const int> universe,
                 const MarkovNetwork& pnet, const MarkovNetwork& qnet, double a, double b,
                 const std::vector<const MarkovNetwork*>& weights, const EngineOptions& options,
                 Diagnostics* diag) {
  MarkovNetwork pa = powered(pnet, a);
  MarkovNetwork qb = powered(qnet, b);
  std::vector<const MarkovNetwork*> nets = weights;
  nets.push_back(&pa);
  nets.push_back(&qb);
  CalibratedTree cal = calibrate(vars, universe, nets, {}, {options.order});
  tally(diag, cal);
  return cal.z;
}

double log_moment_sum(const VariableTable& vars, std::span<const int> universe,
                      const MarkovNetwork& pnet, const MarkovNetwork& qnet, double a, double b,
                      double c, double d, const std::vector<const MarkovNetwork*>& weights,
                      const EngineOptions& options, Diagnostics* diag) {
  MarkovNetwork pa = powered(pnet, a);
  MarkovNetwork qb = powered(qnet, b);
  std::vector<const MarkovNetwork*> nets = weights;
  nets.push_back(&pa);
  nets.push_back(&qb);
  CalibratedTree cal = calibrate(vars, universe, nets, {}, {options.order});
  tally(diag, cal);

  double total = 0.0;
  auto add_terms = [&](const MarkovNetwork& net, double coeff) {
    for (const auto& nf : net.factors) {
      Factor lf = map_log(nf.factor);
      Factor sp = clique_sum_product(cal, lf.scope());
      double sign = nf.reciprocal ? -coeff : coeff;
      total += sign * dot(lf, sp);
    }
  };
  if (c != 0.0) add_terms(pnet, c);
  if (d != 0.0) add_terms(qnet, d);
  double result = cal.free_multiplier * total;
  if (!std::isfinite(result)) throw OverflowError("non-finite-result in log moment");
  return result;
}

double log_square_sum(const VariableTable& vars, std::span<const int> universe,
                      const MarkovNetwork& pnet, const MarkovNetwork& qnet,
                      const std::vector<const MarkovNetwork*>& weights,
                      const EngineOptions& options, Diagnostics* diag) {
  struct SignedLog {
    Factor lf;
    double sign;
  };
  std::vector<SignedLog> terms;
  for (const auto& nf : pnet.factors)
    terms.push_back({map_log(nf.factor), nf.reciprocal ? -1.0 : 1.0});
  for (const auto& nf : qnet.factors)
    terms.push_back({map_log(nf.factor), nf.reciprocal ? 1.0 : -1.0});

  // The union graph must cover both networks so each pairwise moment sums
  // over the right universe even when a log scope is smaller than a clique.
  double total = 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (std::size_t j = i; j < terms.size(); ++j) {
      std::vector<Factor> pair{terms[i].lf, terms[j].lf};
      CalibratedTree cal = calibrate(vars, universe, weights, pair, {options.order});
      tally(diag, cal);
      double w = (i == j) ? 1.0 : 2.0;
      total += w * terms[i].sign * terms[j].sign * cal.z;
    }
  }
  if (!std::isfinite(total)) throw OverflowError("non-finite-result in log square sum");
  return total;
}

namespace {

struct ScopeSetup {
  MarkovNetwork pnet;
  MarkovNetwork qnet;
  std::vector<MarkovNetwork> weight_storage;
  std::vector<const MarkovNetwork*> weights;
  std::vector<int> universe;
  double point_count = 1.0;  // |X_scope| for joint/marginal, |Y| for conditional
};

ScopeSetup setup_scope(const DecomposableModel& p, const DecomposableModel& q,
                       const DivergenceScope& scope, const EngineOptions& options,
                       Diagnostics* diag) {
  ScopeSetup s;
  std::size_t* cells = diag ? &diag->max_table_cells : nullptr;
  switch (scope.kind) {
    case DivergenceScope::Kind::joint: {
      s.pnet = p.as_network();
      s.qnet = q.as_network();
      s.universe = p.variables.all_ids();
      s.point_count = p.variables.domain_size(s.universe);
      break;
    }
    case DivergenceScope::Kind::marginal: {
      for (int v : scope.target)
        if (!p.variables.contains(v))
          throw StructureError("marginal variable " + std::to_string(v) + " unknown");
      s.pnet = marginal_network(p, scope.target, cells);
      s.qnet = marginal_network(q, scope.target, cells);
      s.universe = scope.target;
      s.point_count = p.variables.domain_size(s.universe);
      break;
    }
    case DivergenceScope::Kind::conditional: {
      for (int v : scope.target)
        if (!p.variables.contains(v))
          throw StructureError("conditional variable " + std::to_string(v) + " unknown");
      for (int v : scope.given)
        if (!p.variables.contains(v))
          throw StructureError("conditional variable " + std::to_string(v) + " unknown");
      s.pnet = conditional_network(p, scope.target, scope.given, options.order, cells);
      s.qnet = conditional_network(q, scope.target, scope.given, options.order, cells);
      s.weight_storage.push_back(marginal_network(p, scope.given, cells));
      std::set_union(scope.target.begin(), scope.target.end(), scope.given.begin(),
                     scope.given.end(), std::back_inserter(s.universe));
      s.point_count = p.variables.domain_size(scope.target);
      break;
    }
  }
  for (const auto& w : s.weight_storage) s.weights.push_back(&w);
  return s;
}

}  // namespace

DivergenceResult ab_divergence(const DecomposableModel& p, const DecomposableModel& q,
                               const DivergenceRequest& request, const EngineOptions& options) {
  auto t0 = std::chrono::steady_clock::now();
  if (!p.variables.same_as(q.variables))
    throw StructureError("models are defined over different variable tables");

  DivergenceResult result;
  result.params = ABParams::make(request.params.alpha, request.params.beta);
  result.scope = request.scope;

  ScopeSetup s = setup_scope(p, q, request.scope, options, &result.diagnostics);
  const VariableTable& vars = p.variables;
  const double a = result.params.alpha;
  const double b = result.params.beta;
  Diagnostics* diag = &result.diagnostics;

  auto S = [&](double x, double y) {
    return power_sum(vars, s.universe, s.pnet, s.qnet, x, y, s.weights, options, diag);
  };
  auto T = [&](double wa, double wb, double lc, double ld) {
    return log_moment_sum(vars, s.universe, s.pnet, s.qnet, wa, wb, lc, ld, s.weights,
                          options, diag);
  };

  double value = 0.0;
  switch (result.params.branch) {
    case Branch::general:
      value = -1.0 / (a * b) *
              (S(a, b) - a / (a + b) * S(a + b, 0.0) - b / (a + b) * S(0.0, a + b));
      break;
    case Branch::alpha_only:
      value = 1.0 / (a * a) * (T(a, 0.0, a, -a) - S(a, 0.0) + S(0.0, a));
      break;
    case Branch::opposite:
      value = 1.0 / (a * a) * (T(0.0, 0.0, -a, a) + S(a, -a) - s.point_count);
      break;
    case Branch::beta_only:
      value = 1.0 / (b * b) * (T(0.0, b, -b, b) - S(0.0, b) + S(b, 0.0));
      break;
    case Branch::both_zero:
      value = 0.5 * log_square_sum(vars, s.universe, s.pnet, s.qnet, s.weights, options, diag);
      break;
  }
  if (!std::isfinite(value)) throw OverflowError("non-finite divergence value");

  result.value = value;
  result.diagnostics.millis =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

std::optional<NamedDivergence> named_divergence_from(const std::string& name) {
  if (name == "kl") return NamedDivergence::kl;
  if (name == "reverse-kl") return NamedDivergence::reverse_kl;
  if (name == "hellinger") return NamedDivergence::hellinger;
  if (name == "itakura-saito") return NamedDivergence::itakura_saito;
  if (name == "log-l2") return NamedDivergence::log_l2;
  return std::nullopt;
}

const char* to_string(NamedDivergence name) {
  switch (name) {
    case NamedDivergence::kl: return "kl";
    case NamedDivergence::reverse_kl: return "reverse-kl";
    case NamedDivergence::hellinger: return "hellinger";
    case NamedDivergence::itakura_saito: return "itakura-saito";
    case NamedDivergence::log_l2: return "log-l2";
  }
  return "?";
}

DivergenceResult named_divergence(const DecomposableModel& p, const DecomposableModel& q,
                                  NamedDivergence name, const DivergenceScope& scope,
                                  const EngineOptions& options) {
  DivergenceRequest request;
  request.scope = scope;
  switch (name) {
    case NamedDivergence::kl: request.params = ABParams::make(1.0, 0.0); break;
    case NamedDivergence::reverse_kl: request.params = ABParams::make(0.0, 1.0); break;
    case NamedDivergence::hellinger: request.params = ABParams::make(0.5, 0.5); break;
    case NamedDivergence::itakura_saito: request.params = ABParams::make(1.0, -1.0); break;
    case NamedDivergence::log_l2: request.params = ABParams::make(0.0, 0.0); break;
  }
  DivergenceResult result = ab_divergence(p, q, request, options);
  if (name == NamedDivergence::hellinger)
    result.value = std::sqrt(std::max(0.0, result.value / 4.0));
  return result;
}

std::vector<GridCell> divergence_grid(const DecomposableModel& p, const DecomposableModel& q,
                                      int order, NamedDivergence name,
                                      const std::vector<std::vector<int>>* tuples, int threads,
                                      const EngineOptions& options) {
  const int n = p.variables.size();
  std::vector<std::vector<int>> work;
  if (tuples) {
    for (auto t : *tuples) {
      std::sort(t.begin(), t.end());
      t.erase(std::unique(t.begin(), t.end()), t.end());
      if (t.empty()) throw StructureError("empty tuple in grid request");
      for (int v : t)
        if (!p.variables.contains(v))
          throw StructureError("tuple variable " + std::to_string(v) + " unknown");
      work.push_back(std::move(t));
    }
  } else {
    if (order < 1 || order > n) throw StructureError("grid order out of range");
    std::vector<int> combo(order);
    for (int i = 0; i < order; ++i) combo[i] = i;
    while (true) {
      work.push_back(combo);
      int k = order - 1;
      while (k >= 0 && combo[k] == n - order + k) --k;
      if (k < 0) break;
      ++combo[k];
      for (int j = k + 1; j < order; ++j) combo[j] = combo[j - 1] + 1;
    }
  }

  std::vector<GridCell> cells(work.size());
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min<int>(threads, static_cast<int>(work.size())));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= work.size()) return;
      try {
        DivergenceResult r = named_divergence(p, q, name, DivergenceScope::marginal(work[i]),
                                              options);
        cells[i] = GridCell{work[i], r.value};
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return cells;
}

}  // namespace divkit
