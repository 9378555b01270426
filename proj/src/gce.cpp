#include "qgce/gce.hpp"

#include <cmath>

namespace qgce {

namespace {

double pair_coefficient(ProductKind product, double di, double dj) {
  switch (product) {
    case ProductKind::Jordan: return (di + dj) / 2.0;
    case ProductKind::Left: return di;
    case ProductKind::Root: return std::sqrt(di) * std::sqrt(dj);
  }
  return 0.0;
}

}  // namespace

GceResult gce(ProductKind product, const DensityOperator& sigma,
              const Channel& ch, const Operator& a) {
  detail::require(sigma.dim() == ch.dim_in && a.dim() == ch.dim_in,
                  "gce: input dimensions do not match the channel");

  const DensityOperator out_state = ch.apply(sigma);
  const Mat target = ch.apply_mat(emap(product, sigma, a.entries));

  // Solve in the eigenbasis of F(sigma): the E-map acts entrywise there, so
  // the pseudoinverse solution with a relative cutoff is a diagonal division.
  const Vec& d = out_state.eigenvalues();
  const Mat& v = out_state.eigenvectors();
  const int n = out_state.dim();
  const Mat target_eb = v.adjoint() * target * v;

  double cmax = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      cmax = std::max(cmax, pair_coefficient(product, d(i), d(j)));
  const double cutoff = 1e-12 * cmax;

  Mat x_eb = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double c = pair_coefficient(product, d(i), d(j));
      if (c > cutoff) x_eb(i, j) = target_eb(i, j) / c;
    }
  Mat x = v * x_eb * v.adjoint();

  const bool hermitian_out = product == ProductKind::Jordan && a.hermitian;
  if (hermitian_out) x = (x + x.adjoint()) / 2.0;

  const double residual = (emap(product, out_state, x) - target).norm();
  if (residual > kGceResidualTol) {
    throw std::runtime_error(
        "gce: defining equation residual " + std::to_string(residual) +
        " exceeds tolerance; instance is inconsistent");
  }

  GceResult res;
  res.estimator = Operator(std::move(x), hermitian_out);
  res.residual = residual;
  res.min_divergence = weighted_norm_sq(product, sigma, a.entries) -
                       weighted_norm_sq(product, out_state, res.estimator.entries);
  res.product = product;
  return res;
}

double divergence(ProductKind product, const DensityOperator& sigma,
                  const Channel& ch, const Mat& a, const Mat& b) {
  detail::require(a.rows() == ch.dim_in && b.rows() == ch.dim_out,
                  "divergence: operand dimensions do not match the channel");
  const DensityOperator out_state = ch.apply(sigma);
  const double na = weighted_inner(product, sigma, a, a).real();
  const double nb = weighted_inner(product, out_state, b, b).real();
  const double cross =
      weighted_inner(product, sigma, ch.adjoint_apply(b), a).real();
  return na - 2.0 * cross + nb;
}

Mat predict(ProductKind product, const DensityOperator& sigma,
            const Channel& ch, const Mat& b) {
  (void)product;
  (void)sigma;
  detail::require(b.rows() == ch.dim_out && b.cols() == ch.dim_out,
                  "predict: operand must live on the output space");
  return ch.adjoint_apply(b);
}

std::vector<GceResult> chain_gce(ProductKind product,
                                 const DensityOperator& sigma,
                                 const std::vector<Channel>& chain,
                                 const Operator& a) {
  std::vector<GceResult> results;
  results.reserve(chain.size());
  DensityOperator state = sigma;
  Operator current = a;
  for (const auto& ch : chain) {
    results.push_back(gce(product, state, ch, current));
    current = results.back().estimator;
    state = ch.apply(state);
  }
  return results;
}

PythagorasCheck pythagoras_check(ProductKind product,
                                 const DensityOperator& sigma, const Channel& f,
                                 const Channel& g, const Operator& a) {
  const Channel gf = compose(g, f);
  const GceResult whole = gce(product, sigma, gf, a);
  const GceResult first = gce(product, sigma, f, a);
  const DensityOperator mid = f.apply(sigma);
  const GceResult second = gce(product, mid, g, first.estimator);

  PythagorasCheck out;
  out.lhs = whole.min_divergence;
  out.rhs = first.min_divergence + second.min_divergence;
  out.gap = std::abs(out.lhs - out.rhs);
  return out;
}

}  // namespace qgce
