#pragma once

#include <Eigen/Dense>

namespace qgce::gaussian {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Moment-level Gaussian state: mean of the 2s quadratures and their
// covariance.  The symplectic uncertainty relation is not validated.
struct GaussianState {
  int modes = 0;
  VectorXd mean;    // length 2s
  MatrixXd cov;     // 2s x 2s, symmetric PSD

  void validate() const;
};

// Gaussian channel (F, l, R): mean -> F m + l, cov -> F cov F^T + R.
struct GaussianChannel {
  MatrixXd F;   // 2t x 2s
  VectorXd l;   // 2t
  MatrixXd R;   // 2t x 2t, symmetric PSD

  void validate() const;
  int modes_out() const { return static_cast<int>(F.rows()) / 2; }
};

GaussianState gauss_apply(const GaussianChannel& ch, const GaussianState& st);

struct GaussGceResult {
  MatrixXd gain;        // K = Sigma F^T (F Sigma F^T + R)^{-1}
  VectorXd out_coeffs;  // v^T = u^T K on the output quadratures
  double offset = 0.0;  // u^T (m - K(Fm + l))
  double divergence = 0.0;
  bool pseudoinverse_used = false;
};

// Closed-form GCE of the quadrature u^T Q through a Gaussian channel with the
// Jordan product.  Falls back to a pseudoinverse (cutoff 1e-12 relative) when
// the output covariance is singular.
GaussGceResult gauss_gce(const GaussianState& st, const GaussianChannel& ch,
                         const VectorXd& u);

struct LgOracleResult {
  VectorXd coeffs;
  double offset = 0.0;
  double mse = 0.0;
};

// Independent classical oracle: conditional mean/error of u^T X given
// Y = F X + Z for jointly normal (X, Z), computed from the joint precision
// matrix rather than the gain formula.
LgOracleResult classical_lg_oracle(const VectorXd& m, const MatrixXd& Sigma,
                                   const MatrixXd& F, const VectorXd& l,
                                   const MatrixXd& R, const VectorXd& u);

}  // namespace qgce::gaussian
