#pragma once

// Independent reference implementations used only by the test suites.  These
// deliberately take different routes from the library code: dense vectorized
// least squares instead of the eigenbasis solve, joint-distribution
// enumeration instead of operator identities.

#include <random>
#include <vector>

#include <Eigen/SVD>

#include "qgce/bayes.hpp"
#include "qgce/channels.hpp"
#include "qgce/gce.hpp"

namespace oracles {

using qgce::Channel;
using qgce::Complex;
using qgce::DensityOperator;
using qgce::Mat;
using qgce::ProductKind;
using qgce::Vec;

using Rng = std::mt19937_64;

inline Mat random_complex(Rng& rng, int rows, int cols) {
  std::normal_distribution<double> g;
  Mat m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = Complex(g(rng), g(rng));
  return m;
}

inline Mat random_hermitian(Rng& rng, int d) {
  const Mat g = random_complex(rng, d, d);
  return (g + g.adjoint()) / 2.0;
}

inline Mat random_unitary(Rng& rng, int d) {
  const Mat g = random_complex(rng, d, d);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    const Complex rii = r(i, i);
    if (std::abs(rii) > 1e-14) q.col(i) *= rii / std::abs(rii);
  }
  return q;
}

inline DensityOperator random_density(Rng& rng, int d, int rank = 0) {
  if (rank <= 0 || rank > d) rank = d;
  const Mat g = random_complex(rng, d, rank);
  Mat rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityOperator((rho + rho.adjoint()) / 2.0);
}

// Random channel from a Haar-ish isometry split into kraus_count blocks.
inline Channel random_channel(Rng& rng, int dim_in, int dim_out,
                              int kraus_count) {
  const int big = dim_out * kraus_count;
  const Mat u = random_unitary(rng, std::max(big, dim_in));
  std::vector<Mat> kraus;
  for (int k = 0; k < kraus_count; ++k)
    kraus.push_back(u.block(k * dim_out, 0, dim_out, dim_in));
  return Channel::from_kraus(std::move(kraus), "random");
}

inline Vec random_simplex(Rng& rng, int n) {
  std::uniform_real_distribution<double> un(0.05, 1.0);
  Vec p(n);
  for (int i = 0; i < n; ++i) p(i) = un(rng);
  return p / p.sum();
}

// vec(E_rho(X)) = emap_matrix(product, rho) vec(X), column-major vec.
inline Mat emap_matrix(ProductKind product, const Mat& rho) {
  const int d = static_cast<int>(rho.rows());
  const Mat id = Mat::Identity(d, d);
  auto kron = [](const Mat& a, const Mat& b) { return qgce::tensor(a, b); };
  switch (product) {
    case ProductKind::Jordan:
      return (kron(id, rho) + kron(rho.transpose(), id)) / 2.0;
    case ProductKind::Left:
      return kron(id, rho);
    case ProductKind::Root: {
      Eigen::SelfAdjointEigenSolver<Mat> es(rho);
      const Mat root = es.operatorSqrt();
      return kron(root.transpose(), root);
    }
  }
  return Mat();
}

// vec(F(A)) = channel_matrix(ch) vec(A).
inline Mat channel_matrix(const Channel& ch) {
  const int din = ch.dim_in, dout = ch.dim_out;
  Mat m = Mat::Zero(dout * dout, din * din);
  for (const auto& k : ch.kraus)
    m += qgce::tensor(k.conjugate(), k);
  return m;
}

struct LsqGce {
  Mat estimator;
  double residual = 0.0;
  double min_divergence = 0.0;
};

// Minimum-norm least-squares solve of the vectorized defining equation.
inline LsqGce lsq_gce(ProductKind product, const DensityOperator& sigma,
                      const Channel& ch, const Mat& a) {
  const DensityOperator out = ch.apply(sigma);
  const Mat lhs = emap_matrix(product, out.matrix());
  Mat target_mat =
      ch.apply_mat(qgce::emap(product, sigma, a));
  Eigen::Map<qgce::CVec> target(target_mat.data(),
                                target_mat.size());

  Eigen::JacobiSVD<Mat> svd(lhs, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-12);
  const qgce::CVec xv = svd.solve(target);

  LsqGce res;
  res.estimator = Eigen::Map<const Mat>(xv.data(), ch.dim_out, ch.dim_out);
  if (product == ProductKind::Jordan && qgce::is_hermitian(a, 1e-10))
    res.estimator = (res.estimator + res.estimator.adjoint()) / 2.0;
  res.residual = (lhs * xv - target).norm();
  res.min_divergence =
      qgce::weighted_norm_sq(product, sigma, a) -
      qgce::weighted_norm_sq(product, out, res.estimator);
  return res;
}

// Brute-force weighted inner product straight from the definition in the
// eigenbasis of rho, bypassing emap entirely.
inline Complex inner_eigenbasis(ProductKind product, const DensityOperator& rho,
                                const Mat& b, const Mat& a) {
  const Vec& d = rho.eigenvalues();
  const Mat& v = rho.eigenvectors();
  const Mat ae = v.adjoint() * a * v;
  const Mat be = v.adjoint() * b * v;
  Complex sum = 0.0;
  for (int i = 0; i < d.size(); ++i)
    for (int j = 0; j < d.size(); ++j) {
      double w = 0.0;
      switch (product) {
        case ProductKind::Jordan: w = (d(i) + d(j)) / 2.0; break;
        case ProductKind::Left: w = d(i); break;
        case ProductKind::Root: w = std::sqrt(d(i) * d(j)); break;
      }
      sum += std::conj(be(i, j)) * ae(i, j) * w;
    }
  return sum;
}

// Posterior-mean oracle for a diagonal (classical) model: enumerates the
// joint distribution P(x, y) induced by measuring the spectral projectors.
inline Vec posterior_means(const qgce::BayesModel& model,
                           const std::vector<Mat>& povm) {
  const int ny = static_cast<int>(povm.size());
  Vec num = Vec::Zero(ny), den = Vec::Zero(ny);
  for (int x = 0; x < model.points(); ++x)
    for (int y = 0; y < ny; ++y) {
      const double pxy =
          model.prior(x) *
          (povm[y] * model.states[x].matrix()).trace().real();
      num(y) += pxy * model.values(x);
      den(y) += pxy;
    }
  Vec out(ny);
  for (int y = 0; y < ny; ++y)
    out(y) = den(y) > 1e-15 ? num(y) / den(y) : model.prior_mean();
  return out;
}

}  // namespace oracles
