#include "qgce/channels.hpp"

#include <cmath>

namespace qgce {

namespace {

void check_trace_preserving(const std::vector<Mat>& kraus, int dim_in) {
  Mat sum = Mat::Zero(dim_in, dim_in);
  for (const auto& k : kraus) sum += k.adjoint() * k;
  const double dev = (sum - Mat::Identity(dim_in, dim_in)).cwiseAbs().maxCoeff();
  detail::require(dev <= 1e-10,
                  "Channel: Kraus elements violate trace preservation (dev=" +
                      std::to_string(dev) + ")");
}

}  // namespace

Channel Channel::from_kraus(std::vector<Mat> kraus, std::string label) {
  detail::require(!kraus.empty(), "Channel: needs at least one Kraus element");
  const int dim_out = static_cast<int>(kraus.front().rows());
  const int dim_in = static_cast<int>(kraus.front().cols());
  for (const auto& k : kraus) {
    detail::require(k.rows() == dim_out && k.cols() == dim_in,
                    "Channel: inconsistent Kraus element shapes");
  }
  check_trace_preserving(kraus, dim_in);
  Channel ch;
  ch.dim_in = dim_in;
  ch.dim_out = dim_out;
  ch.kraus = std::move(kraus);
  ch.label = std::move(label);
  return ch;
}

Mat Channel::apply_mat(const Mat& a) const {
  detail::require(a.rows() == dim_in && a.cols() == dim_in,
                  "Channel::apply: dimension mismatch");
  Mat out = Mat::Zero(dim_out, dim_out);
  for (const auto& k : kraus) out += k * a * k.adjoint();
  return out;
}

DensityOperator Channel::apply(const DensityOperator& rho) const {
  return DensityOperator(apply_mat(rho.matrix()));
}

Mat Channel::adjoint_apply(const Mat& b) const {
  detail::require(b.rows() == dim_out && b.cols() == dim_out,
                  "Channel::adjoint_apply: dimension mismatch");
  Mat out = Mat::Zero(dim_in, dim_in);
  for (const auto& k : kraus) out += k.adjoint() * b * k;
  return out;
}

Channel identity_channel(int dim) {
  return Channel::from_kraus({Mat::Identity(dim, dim)}, "identity");
}

Channel unitary_channel(const Mat& u, std::string label) {
  detail::require_square(u, "unitary_channel");
  const double dev =
      (u.adjoint() * u - Mat::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
  detail::require(dev <= 1e-10, "unitary_channel: matrix is not unitary");
  return Channel::from_kraus({u}, std::move(label));
}

Channel depolarizing_channel(int dim) {
  // Output I/dim for every input state: K_{ij} = |i><j| / sqrt(dim).
  std::vector<Mat> kraus;
  const double s = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      Mat k = Mat::Zero(dim, dim);
      k(i, j) = s;
      kraus.push_back(std::move(k));
    }
  return Channel::from_kraus(std::move(kraus), "depolarizing");
}

Channel compose(const Channel& g, const Channel& f) {
  detail::require(f.dim_out == g.dim_in,
                  "compose: inner dimensions do not match");
  std::vector<Mat> kraus;
  for (const auto& kg : g.kraus)
    for (const auto& kf : f.kraus) {
      Mat k = kg * kf;
      if (k.norm() >= 1e-14) kraus.push_back(std::move(k));
    }
  return Channel::from_kraus(std::move(kraus), g.label + "*" + f.label);
}

Channel cq_channel(const std::vector<DensityOperator>& states) {
  detail::require(!states.empty(), "cq_channel: empty state list");
  const int dim_in = static_cast<int>(states.size());
  const int dim_out = states.front().dim();
  for (const auto& s : states)
    detail::require(s.dim() == dim_out, "cq_channel: states of unequal dim");

  std::vector<Mat> kraus;
  for (int x = 0; x < dim_in; ++x) {
    const auto& st = states[x];
    for (int k = 0; k < st.dim(); ++k) {
      const double lam = st.eigenvalues()(k);
      if (lam <= 0.0) continue;
      Mat kr = Mat::Zero(dim_out, dim_in);
      kr.col(x) = std::sqrt(lam) * st.eigenvectors().col(k);
      kraus.push_back(std::move(kr));
    }
  }
  return Channel::from_kraus(std::move(kraus), "cq");
}

Channel measurement_channel(const std::vector<Mat>& povm) {
  detail::require(!povm.empty(), "measurement_channel: empty POVM");
  const int dim_in = static_cast<int>(povm.front().rows());
  Mat sum = Mat::Zero(dim_in, dim_in);
  for (const auto& m : povm) {
    detail::require(m.rows() == dim_in && m.cols() == dim_in,
                    "measurement_channel: POVM element shape mismatch");
    detail::require(is_hermitian(m, 1e-10),
                    "measurement_channel: POVM element not Hermitian");
    sum += m;
  }
  detail::require(
      (sum - Mat::Identity(dim_in, dim_in)).cwiseAbs().maxCoeff() <= 1e-10,
      "measurement_channel: POVM completeness violation");

  const int dim_out = static_cast<int>(povm.size());
  std::vector<Mat> kraus;
  for (int y = 0; y < dim_out; ++y) {
    Eigen::SelfAdjointEigenSolver<Mat> es(povm[y]);
    detail::require(es.eigenvalues().minCoeff() >= -1e-10,
                    "measurement_channel: POVM element not PSD");
    for (int k = 0; k < dim_in; ++k) {
      const double lam = es.eigenvalues()(k);
      if (lam <= 1e-14) continue;
      Mat kr = Mat::Zero(dim_out, dim_in);
      kr.row(y) = std::sqrt(lam) * es.eigenvectors().col(k).adjoint();
      kraus.push_back(std::move(kr));
    }
  }
  return Channel::from_kraus(std::move(kraus), "measurement");
}

Channel ancilla_discard_channel(int dim1, int dim0) {
  detail::require(dim1 > 0 && dim0 > 0, "ancilla_discard_channel: bad dims");
  std::vector<Mat> kraus;
  for (int j = 0; j < dim0; ++j) {
    Mat k = Mat::Zero(dim1, dim1 * dim0);
    for (int i = 0; i < dim1; ++i) k(i, i * dim0 + j) = 1.0;
    kraus.push_back(std::move(k));
  }
  return Channel::from_kraus(std::move(kraus), "ancilla_discard");
}

Channel random_unitary_channel(const std::vector<Mat>& unitaries,
                               const Vec& weights) {
  detail::require(!unitaries.empty() &&
                      weights.size() == static_cast<long>(unitaries.size()),
                  "random_unitary_channel: unitaries/weights mismatch");
  detail::require(weights.minCoeff() >= 0.0 &&
                      std::abs(weights.sum() - 1.0) <= 1e-12,
                  "random_unitary_channel: weights must form a distribution");
  std::vector<Mat> kraus;
  for (size_t z = 0; z < unitaries.size(); ++z) {
    if (weights(z) <= 0.0) continue;
    kraus.push_back(std::sqrt(weights(z)) * unitaries[z]);
  }
  return Channel::from_kraus(std::move(kraus), "random_unitary");
}

Channel block_dephasing_channel(const std::vector<Mat>& projectors) {
  detail::require(!projectors.empty(), "block_dephasing_channel: no projectors");
  const int dim = static_cast<int>(projectors.front().rows());
  Mat sum = Mat::Zero(dim, dim);
  for (const auto& p : projectors) {
    detail::require(p.rows() == dim && p.cols() == dim,
                    "block_dephasing_channel: projector shape mismatch");
    detail::require((p * p - p).cwiseAbs().maxCoeff() <= 1e-10 &&
                        is_hermitian(p, 1e-10),
                    "block_dephasing_channel: element is not a projector");
    sum += p;
  }
  detail::require(
      (sum - Mat::Identity(dim, dim)).cwiseAbs().maxCoeff() <= 1e-10,
      "block_dephasing_channel: projectors must sum to identity");
  for (size_t i = 0; i < projectors.size(); ++i)
    for (size_t j = i + 1; j < projectors.size(); ++j)
      detail::require(
          (projectors[i] * projectors[j]).cwiseAbs().maxCoeff() <= 1e-10,
          "block_dephasing_channel: projectors not mutually orthogonal");
  return Channel::from_kraus(projectors, "block_dephasing");
}

}  // namespace qgce
