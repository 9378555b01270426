#include "qgce/bayes.hpp"

#include <cmath>
#include <random>

namespace qgce {

void BayesModel::validate() const {
  detail::require(!states.empty(), "BayesModel: empty state list");
  detail::require(prior.size() == static_cast<long>(states.size()) &&
                      values.size() == static_cast<long>(states.size()),
                  "BayesModel: prior/states/values length mismatch");
  detail::require(labels.empty() ||
                      labels.size() == states.size(),
                  "BayesModel: label list length mismatch");
  detail::require(prior.minCoeff() >= 0.0,
                  "BayesModel: prior must be nonnegative");
  detail::require(std::abs(prior.sum() - 1.0) <= 1e-12,
                  "BayesModel: prior must sum to 1");
  const int d = states.front().dim();
  for (const auto& s : states)
    detail::require(s.dim() == d, "BayesModel: states of unequal dimension");
}

DensityOperator BayesModel::prior_state() const {
  Mat m = Mat::Zero(points(), points());
  for (int x = 0; x < points(); ++x) m(x, x) = prior(x);
  return DensityOperator(m);
}

Operator BayesModel::value_operator() const {
  Mat m = Mat::Zero(points(), points());
  for (int x = 0; x < points(); ++x) m(x, x) = values(x);
  return Operator(m, true);
}

DensityOperator BayesModel::mixture() const {
  Mat m = Mat::Zero(sensor_dim(), sensor_dim());
  for (int x = 0; x < points(); ++x) m += prior(x) * states[x].matrix();
  return DensityOperator(m);
}

double BayesModel::prior_mean() const { return prior.dot(values); }

double BayesModel::prior_variance() const {
  const double mean = prior_mean();
  double v = 0.0;
  for (int x = 0; x < points(); ++x)
    v += prior(x) * (values(x) - mean) * (values(x) - mean);
  return v;
}

EstimatorReport personick(const BayesModel& model) {
  model.validate();
  const GceResult res = gce(ProductKind::Jordan, model.prior_state(),
                            cq_channel(model.states), model.value_operator());
  EstimatorReport report;
  report.estimator = res.estimator;
  report.bayes_mse = res.min_divergence;
  return report;
}

double bayes_mse_of(const BayesModel& model, const Mat& b) {
  model.validate();
  detail::require(is_hermitian(b, 1e-10), "bayes_mse_of: estimator not Hermitian");
  detail::require(b.rows() == model.sensor_dim(),
                  "bayes_mse_of: estimator dimension mismatch");
  const SpectralMeasure sm = spectral(b);
  double mse = 0.0;
  for (int x = 0; x < model.points(); ++x) {
    for (size_t k = 0; k < sm.projectors.size(); ++k) {
      const double p =
          (sm.projectors[k] * model.states[x].matrix()).trace().real();
      const double err = sm.eigenvalues(k) - model.values(x);
      mse += model.prior(x) * p * err * err;
    }
  }
  return mse;
}

EstimatorReport personick_after(const BayesModel& model, const Channel& g) {
  model.validate();
  detail::require(g.dim_in == model.sensor_dim(),
                  "personick_after: channel input dim must equal sensor dim");
  const std::vector<Channel> chain = {cq_channel(model.states), g};
  const auto results = chain_gce(ProductKind::Jordan, model.prior_state(),
                                 chain, model.value_operator());
  EstimatorReport report;
  report.estimator = results.back().estimator;
  report.regret = results[1].min_divergence;
  report.bayes_mse = results[0].min_divergence + results[1].min_divergence;
  return report;
}

WeakValueResult weak_value_estimator(const BayesModel& model,
                                     const std::vector<Mat>& povm) {
  model.validate();
  const EstimatorReport base = personick(model);
  const Mat& x_op = base.estimator.entries;
  const Mat rho = model.mixture().matrix();

  const int ny = static_cast<int>(povm.size());
  Vec b(ny);
  for (int y = 0; y < ny; ++y) {
    const double prob = (povm[y] * rho).trace().real();
    if (prob < 1e-14) {
      b(y) = model.prior_mean();  // never affects the MSE
    } else {
      b(y) = (povm[y] * x_op * rho).trace().real() / prob;
    }
  }

  const Channel meas = measurement_channel(povm);
  Mat b_op = Mat::Zero(ny, ny);
  for (int y = 0; y < ny; ++y) b_op(y, y) = b(y);

  WeakValueResult out;
  out.outcome_values = b;
  out.report.estimator = Operator(b_op, true);
  out.report.bayes_mse = divergence(ProductKind::Jordan, model.prior_state(),
                                    compose(meas, cq_channel(model.states)),
                                    model.value_operator().entries, b_op);
  out.report.regret = out.report.bayes_mse - base.bayes_mse;
  return out;
}

double von_neumann_sample(const Mat& b, const DensityOperator& rho,
                          std::uint64_t seed) {
  detail::require(is_hermitian(b, 1e-10),
                  "von_neumann_sample: observable not Hermitian");
  detail::require(b.rows() == rho.dim(),
                  "von_neumann_sample: dimension mismatch");
  const SpectralMeasure sm = spectral(b);
  std::vector<double> probs;
  probs.reserve(sm.projectors.size());
  for (const auto& proj : sm.projectors)
    probs.push_back(std::max(0.0, (proj * rho.matrix()).trace().real()));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double total = 0.0;
  for (double p : probs) total += p;
  double u = unif(rng) * total;
  for (size_t k = 0; k < probs.size(); ++k) {
    u -= probs[k];
    if (u <= 0.0) return sm.eigenvalues(k);
  }
  return sm.eigenvalues(sm.eigenvalues.size() - 1);
}

}  // namespace qgce
