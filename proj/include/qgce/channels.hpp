#pragma once

#include <string>
#include <vector>

#include "qgce/operator_core.hpp"

namespace qgce {

// CPTP map in Kraus form.  Trace preservation (sum K^dag K = I) is checked at
// construction; complete positivity holds by construction.
struct Channel {
  int dim_in = 0;
  int dim_out = 0;
  std::vector<Mat> kraus;
  std::string label;

  static Channel from_kraus(std::vector<Mat> kraus, std::string label = "kraus");

  Mat apply_mat(const Mat& a) const;
  DensityOperator apply(const DensityOperator& rho) const;

  // Hilbert-Schmidt adjoint: sum K^dag b K.  Unital.
  Mat adjoint_apply(const Mat& b) const;
};

Channel identity_channel(int dim);
Channel unitary_channel(const Mat& u, std::string label = "unitary");
Channel depolarizing_channel(int dim);

// g after f.  Kraus elements with Frobenius norm < 1e-14 are dropped.
Channel compose(const Channel& g, const Channel& f);

// Classical-quantum channel: maps the diagonal weights of the input to the
// corresponding mixture of states; input coherences are dephased first so the
// map is CPTP on the whole input space.
Channel cq_channel(const std::vector<DensityOperator>& states);

// Measurement as a channel: output is diagonal in the outcome basis with
// entries trace(M(y) tau).
Channel measurement_channel(const std::vector<Mat>& povm);

// Partial trace over an ancilla of dimension dim0 appended after dim1.
Channel ancilla_discard_channel(int dim1, int dim0);

Channel random_unitary_channel(const std::vector<Mat>& unitaries,
                               const Vec& weights);

Channel block_dephasing_channel(const std::vector<Mat>& projectors);

}  // namespace qgce
