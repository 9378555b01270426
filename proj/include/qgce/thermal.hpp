#pragma once

#include <vector>

#include "qgce/operator_core.hpp"

namespace qgce {

// Truncated multimode thermal state: per-mode mean photon numbers and a
// shared per-mode Fock cutoff.
struct ThermalModel {
  int modes = 0;
  Vec spectrum;   // lambda_j > 0
  int cutoff = 0; // per-mode photon cutoff N

  void validate() const;
  int mode_dim() const { return cutoff + 1; }
  long long total_dim() const;
};

// Smallest cutoff N whose truncation tail mass stays below 1e-8 for the
// whole spectrum.
int choose_cutoff(const Vec& spectrum);
int choose_cutoff_single(double lambda, double tol);

// Truncated single-mode ladder/quadrature/number matrices, (N+1)-dim.
Mat annihilation_op(int cutoff);
Mat quadrature_op(int cutoff);           // (a + a^dag)/sqrt(2)
Mat number_op(int cutoff);

// Fock-diagonal product thermal state, renormalized after truncation.
DensityOperator thermal_state(const ThermalModel& model);

// (1/J) sum_j q_j^2 - 1/2 on the full truncated product space.
Mat homodyne_estimator(const ThermalModel& model);

// (1/J) sum_j n_j, diagonal in the Fock basis.
Mat photon_counting_estimator(const ThermalModel& model);

// Rank-1 projectors onto the product Fock states (fixed eigenmodes).
std::vector<Mat> fock_projectors(const ThermalModel& model);

struct ThermalCurveRow {
  double x = 0.0;
  double mse_homodyne_numeric = 0.0;
  double mse_homodyne_analytic = 0.0;
  double mse_counting_numeric = 0.0;
  double mse_counting_analytic = 0.0;
  double gap = 0.0;         // numeric MSE difference
  double divergence = 0.0;  // D(B, dephased B), computed independently
};

// Flat-spectrum MSE curve for the homodyne and photon-counting estimators.
// Works through per-mode tensor factors, so any J is fine.  cutoff <= 0
// selects the automatic chooser at the largest grid point.
std::vector<ThermalCurveRow> thermal_mse_curve(int modes,
                                               const std::vector<double>& xs,
                                               int cutoff = 0);

}  // namespace qgce
