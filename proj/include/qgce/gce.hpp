#pragma once

#include <vector>

#include "qgce/channels.hpp"
#include "qgce/operator_core.hpp"

namespace qgce {

struct GceResult {
  Operator estimator;     // on the channel output space
  double residual = 0.0;  // Frobenius defect of the defining equation
  double min_divergence = 0.0;
  ProductKind product = ProductKind::Jordan;
};

// Residual above this signals a genuinely inconsistent instance rather than
// equivalence-class freedom on the kernel of F(sigma).
constexpr double kGceResidualTol = 1e-8;

// Solves E_{F sigma}(X) = F(E_sigma(a)) for X.  Canonical representative:
// solve on the support of F(sigma), zero the kernel-kernel block, and
// symmetrize when the product is Jordan and a is Hermitian.
GceResult gce(ProductKind product, const DensityOperator& sigma,
              const Channel& ch, const Operator& a);

// ||a||^2_sigma - 2 Re<F* b, a>_sigma + ||b||^2_{F sigma}
double divergence(ProductKind product, const DensityOperator& sigma,
                  const Channel& ch, const Mat& a, const Mat& b);

// Optimal prediction: the Hilbert-Schmidt adjoint of the channel.
Mat predict(ProductKind product, const DensityOperator& sigma,
            const Channel& ch, const Mat& b);

// GCE through a chain of channels; result[n] is the GCE of result[n-1]'s
// estimator under the pushed-forward state.
std::vector<GceResult> chain_gce(ProductKind product,
                                 const DensityOperator& sigma,
                                 const std::vector<Channel>& chain,
                                 const Operator& a);

struct PythagorasCheck {
  double lhs = 0.0;  // D_{sigma,GF}(A, (GF)_* A)
  double rhs = 0.0;  // D_{sigma,F} + D_{F sigma,G}
  double gap = 0.0;
};

PythagorasCheck pythagoras_check(ProductKind product,
                                 const DensityOperator& sigma, const Channel& f,
                                 const Channel& g, const Operator& a);

}  // namespace qgce
