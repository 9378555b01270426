#include "qgce/gaussian.hpp"

#include <cmath>
#include <stdexcept>

namespace qgce::gaussian {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Symmetric pseudoinverse with a relative eigenvalue cutoff.
MatrixXd sym_pinv(const MatrixXd& m, bool* degenerate) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es((m + m.transpose()) / 2.0);
  const VectorXd& vals = es.eigenvalues();
  const double cutoff = 1e-12 * std::max(vals.cwiseAbs().maxCoeff(), 1e-300);
  VectorXd inv = VectorXd::Zero(vals.size());
  bool deg = false;
  for (int i = 0; i < vals.size(); ++i) {
    if (std::abs(vals(i)) > cutoff) inv(i) = 1.0 / vals(i);
    else deg = true;
  }
  if (degenerate) *degenerate = deg;
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

void GaussianState::validate() const {
  require(modes > 0 && mean.size() == 2 * modes && cov.rows() == 2 * modes &&
              cov.cols() == 2 * modes,
          "GaussianState: size mismatch");
  require((cov - cov.transpose()).cwiseAbs().maxCoeff() <= 1e-12,
          "GaussianState: covariance must be symmetric");
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(cov);
  require(es.eigenvalues().minCoeff() >= -1e-10,
          "GaussianState: covariance must be PSD");
}

void GaussianChannel::validate() const {
  require(F.rows() > 0 && F.rows() % 2 == 0 && F.cols() % 2 == 0,
          "GaussianChannel: F must be 2t x 2s");
  require(l.size() == F.rows() && R.rows() == F.rows() && R.cols() == F.rows(),
          "GaussianChannel: l/R size mismatch");
  require((R - R.transpose()).cwiseAbs().maxCoeff() <= 1e-12,
          "GaussianChannel: R must be symmetric");
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(R);
  require(es.eigenvalues().minCoeff() >= -1e-10,
          "GaussianChannel: R must be PSD");
}

GaussianState gauss_apply(const GaussianChannel& ch, const GaussianState& st) {
  st.validate();
  ch.validate();
  require(ch.F.cols() == st.mean.size(), "gauss_apply: dimension mismatch");
  GaussianState out;
  out.modes = ch.modes_out();
  out.mean = ch.F * st.mean + ch.l;
  out.cov = ch.F * st.cov * ch.F.transpose() + ch.R;
  out.cov = (out.cov + out.cov.transpose()) / 2.0;
  return out;
}

GaussGceResult gauss_gce(const GaussianState& st, const GaussianChannel& ch,
                         const VectorXd& u) {
  st.validate();
  ch.validate();
  require(ch.F.cols() == st.mean.size() && u.size() == st.mean.size(),
          "gauss_gce: dimension mismatch");

  const MatrixXd out_cov = ch.F * st.cov * ch.F.transpose() + ch.R;
  GaussGceResult res;
  res.gain = st.cov * ch.F.transpose() * sym_pinv(out_cov,
                                                  &res.pseudoinverse_used);
  res.out_coeffs = res.gain.transpose() * u;
  res.offset = u.dot(st.mean - res.gain * (ch.F * st.mean + ch.l));
  res.divergence = u.dot((st.cov - res.gain * ch.F * st.cov) * u);
  return res;
}

LgOracleResult classical_lg_oracle(const VectorXd& m, const MatrixXd& Sigma,
                                   const MatrixXd& F, const VectorXd& l,
                                   const MatrixXd& R, const VectorXd& u) {
  const long nx = m.size();
  const long ny = l.size();
  require(Sigma.rows() == nx && Sigma.cols() == nx && F.rows() == ny &&
              F.cols() == nx && R.rows() == ny && R.cols() == ny &&
              u.size() == nx,
          "classical_lg_oracle: size mismatch");

  // Joint covariance of (X, Y) with Y = F X + Z.
  MatrixXd joint(nx + ny, nx + ny);
  joint.topLeftCorner(nx, nx) = Sigma;
  joint.topRightCorner(nx, ny) = Sigma * F.transpose();
  joint.bottomLeftCorner(ny, nx) = F * Sigma;
  joint.bottomRightCorner(ny, ny) = F * Sigma * F.transpose() + R;

  const MatrixXd cyy_inv = sym_pinv(joint.bottomRightCorner(ny, ny), nullptr);
  const MatrixXd cxy = joint.topRightCorner(nx, ny);

  LgOracleResult res;
  res.coeffs = cyy_inv * cxy.transpose() * u;
  res.offset = u.dot(m) - res.coeffs.dot(F * m + l);
  const MatrixXd cond_cov = Sigma - cxy * cyy_inv * cxy.transpose();
  res.mse = u.dot(cond_cov * u);
  return res;
}

}  // namespace qgce::gaussian
