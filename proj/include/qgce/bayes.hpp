#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qgce/gce.hpp"

namespace qgce {

// Countable parameter grid, prior weights, conditional sensor states, and the
// parameter-of-interest values.
struct BayesModel {
  std::vector<std::string> labels;
  Vec prior;
  std::vector<DensityOperator> states;
  Vec values;

  void validate() const;
  int sensor_dim() const { return states.front().dim(); }
  int points() const { return static_cast<int>(states.size()); }

  DensityOperator prior_state() const;   // diag(prior)
  Operator value_operator() const;       // diag(values)
  DensityOperator mixture() const;       // sum_x P(x) rho_x
  double prior_mean() const;
  double prior_variance() const;
};

struct EstimatorReport {
  Operator estimator;
  double bayes_mse = 0.0;
  std::optional<double> regret;  // present when a second channel applies
};

// Optimal operator-valued Bayesian estimator (Jordan-product GCE through the
// classical-quantum channel) and the Bayesian error.
EstimatorReport personick(const BayesModel& model);

// Prior-averaged MSE of a von Neumann measurement of b, by outcome
// enumeration over the spectral measure of b.
double bayes_mse_of(const BayesModel& model, const Mat& b);

// Personick estimator after a further decoherence channel g, with the regret
// decomposition mse_after = mse_before + regret.
EstimatorReport personick_after(const BayesModel& model, const Channel& g);

struct WeakValueResult {
  Vec outcome_values;  // b(y) per POVM outcome
  EstimatorReport report;
};

// Per-outcome optimal estimate Re tr[M(y) X rho] / tr[M(y) rho] with X the
// Personick operator.  Zero-probability outcomes get the prior mean.
WeakValueResult weak_value_estimator(const BayesModel& model,
                                     const std::vector<Mat>& povm);

// Samples an eigenvalue of b with probability trace(proj * rho).
double von_neumann_sample(const Mat& b, const DensityOperator& rho,
                          std::uint64_t seed);

}  // namespace qgce
