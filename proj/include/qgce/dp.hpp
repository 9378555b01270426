#pragma once

#include <vector>

#include "qgce/gce.hpp"

namespace qgce {

// Channel-sequence selection: pick one channel per stage to minimize the sum
// of per-stage regrets, which equals the composed-chain divergence.
struct DpProblem {
  DensityOperator sigma0;
  Operator a0;
  std::vector<std::vector<Channel>> stages;

  void validate() const;
};

struct RolloutResult {
  std::vector<DensityOperator> states;   // sigma_1 .. sigma_{N+1}
  std::vector<Operator> estimators;      // A_1 .. A_{N+1}
  Vec stage_costs;                       // D_n per stage
  double total_cost = 0.0;
};

RolloutResult rollout(const DpProblem& problem, const std::vector<int>& choices);

struct DpValueEntry {
  std::vector<int> prefix;  // choices made before this node
  double cost_to_go = 0.0;
  int best_option = -1;
};

struct DpSolution {
  std::vector<int> policy;
  double total_cost = 0.0;
  Vec stage_costs;
  std::vector<DpValueEntry> value_table;
};

// Backward induction over the reachable state tree (nodes keyed by choice
// prefix; deterministic dynamics, no state merging).  Ties broken by the
// lexicographically smallest option tuple.
DpSolution solve_dp(const DpProblem& problem);

// Evaluates every policy by rollout.  Oracle for solve_dp; policy count is
// capped at 1e5.
DpSolution exhaustive_search(const DpProblem& problem);

}  // namespace qgce
