#include "qgce/dp.hpp"

#include <cmath>
#include <limits>

namespace qgce {

void DpProblem::validate() const {
  detail::require(!stages.empty(), "DpProblem: at least one stage required");
  for (const auto& options : stages)
    detail::require(!options.empty(), "DpProblem: empty option list at a stage");
  detail::require(sigma0.dim() == a0.dim(),
                  "DpProblem: sigma0 and a0 dimension mismatch");
}

RolloutResult rollout(const DpProblem& problem,
                      const std::vector<int>& choices) {
  problem.validate();
  detail::require(choices.size() == problem.stages.size(),
                  "rollout: one choice per stage required");

  RolloutResult out;
  out.states.push_back(problem.sigma0);
  out.estimators.push_back(problem.a0);
  out.stage_costs.resize(static_cast<long>(choices.size()));

  for (size_t n = 0; n < choices.size(); ++n) {
    const int c = choices[n];
    detail::require(c >= 0 && c < static_cast<int>(problem.stages[n].size()),
                    "rollout: choice index out of range");
    const Channel& ch = problem.stages[n][c];
    const GceResult res =
        gce(ProductKind::Jordan, out.states.back(), ch, out.estimators.back());
    out.stage_costs(static_cast<long>(n)) = res.min_divergence;
    out.states.push_back(ch.apply(out.states.back()));
    out.estimators.push_back(res.estimator);
  }
  out.total_cost = out.stage_costs.sum();
  return out;
}

namespace {

struct NodeResult {
  double cost_to_go = 0.0;
  std::vector<int> best_suffix;
};

// Depth-first backward induction.  Sibling branches are independent and
// evaluated in index order, so results are deterministic.
NodeResult solve_node(const DpProblem& problem, size_t stage,
                      const DensityOperator& state, const Operator& est,
                      std::vector<int>& prefix,
                      std::vector<DpValueEntry>& table) {
  if (stage == problem.stages.size()) return {0.0, {}};

  NodeResult best;
  best.cost_to_go = std::numeric_limits<double>::infinity();
  int best_option = -1;
  for (int c = 0; c < static_cast<int>(problem.stages[stage].size()); ++c) {
    const Channel& ch = problem.stages[stage][c];
    const GceResult res = gce(ProductKind::Jordan, state, ch, est);
    prefix.push_back(c);
    const NodeResult sub = solve_node(problem, stage + 1, ch.apply(state),
                                      res.estimator, prefix, table);
    prefix.pop_back();
    const double total = res.min_divergence + sub.cost_to_go;
    if (total < best.cost_to_go) {  // strict: keeps the smallest index on ties
      best.cost_to_go = total;
      best.best_suffix.clear();
      best.best_suffix.push_back(c);
      best.best_suffix.insert(best.best_suffix.end(), sub.best_suffix.begin(),
                              sub.best_suffix.end());
      best_option = c;
    }
  }
  table.push_back({prefix, best.cost_to_go, best_option});
  return best;
}

}  // namespace

DpSolution solve_dp(const DpProblem& problem) {
  problem.validate();
  std::vector<int> prefix;
  std::vector<DpValueEntry> table;
  const NodeResult root = solve_node(problem, 0, problem.sigma0, problem.a0,
                                     prefix, table);

  DpSolution sol;
  sol.policy = root.best_suffix;
  sol.value_table = std::move(table);
  const RolloutResult rr = rollout(problem, sol.policy);
  sol.stage_costs = rr.stage_costs;
  sol.total_cost = rr.total_cost;
  return sol;
}

DpSolution exhaustive_search(const DpProblem& problem) {
  problem.validate();
  long long count = 1;
  for (const auto& options : problem.stages) {
    count *= static_cast<long long>(options.size());
    detail::require(count <= 100000, "exhaustive_search: policy budget exceeded");
  }

  DpSolution best;
  best.total_cost = std::numeric_limits<double>::infinity();
  std::vector<int> choices(problem.stages.size(), 0);
  for (long long p = 0; p < count; ++p) {
    long long rem = p;
    for (int n = static_cast<int>(problem.stages.size()) - 1; n >= 0; --n) {
      choices[n] = static_cast<int>(rem % problem.stages[n].size());
      rem /= static_cast<long long>(problem.stages[n].size());
    }
    const RolloutResult rr = rollout(problem, choices);
    if (rr.total_cost < best.total_cost) {
      best.total_cost = rr.total_cost;
      best.policy = choices;
      best.stage_costs = rr.stage_costs;
    }
  }
  return best;
}

}  // namespace qgce
