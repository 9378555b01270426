#include "qgce/thermal.hpp"

#include <cmath>

namespace qgce {

namespace {

// Normalized single-mode thermal weights p_m over 0..N.
Vec mode_weights(double lambda, int cutoff) {
  const double r = lambda / (1.0 + lambda);
  Vec p(cutoff + 1);
  double w = 1.0;
  for (int m = 0; m <= cutoff; ++m) {
    p(m) = w;
    w *= r;
  }
  return p / p.sum();
}

double tail_deviation(const Vec& spectrum, int cutoff) {
  double keep = 1.0;
  for (int j = 0; j < spectrum.size(); ++j) {
    const double r = spectrum(j) / (1.0 + spectrum(j));
    keep *= 1.0 - std::pow(r, cutoff + 1);
  }
  return 1.0 - keep;
}

}  // namespace

void ThermalModel::validate() const {
  detail::require(modes > 0 && spectrum.size() == modes,
                  "ThermalModel: spectrum length must equal mode count");
  detail::require(spectrum.minCoeff() > 0.0,
                  "ThermalModel: spectrum must be positive");
  detail::require(cutoff >= 1, "ThermalModel: cutoff must be >= 1");
  detail::require(tail_deviation(spectrum, cutoff) < 1e-8,
                  "ThermalModel: truncation tail above tolerance");
}

long long ThermalModel::total_dim() const {
  long long d = 1;
  for (int j = 0; j < modes; ++j) d *= mode_dim();
  return d;
}

int choose_cutoff_single(double lambda, double tol) {
  const double r = lambda / (1.0 + lambda);
  const int n = static_cast<int>(std::ceil(std::log(tol) / std::log(r)));
  return std::max(n, 2);
}

int choose_cutoff(const Vec& spectrum) {
  int cutoff = 2;
  for (int j = 0; j < spectrum.size(); ++j)
    cutoff = std::max(cutoff, choose_cutoff_single(spectrum(j), 1e-8));
  while (tail_deviation(spectrum, cutoff) >= 1e-8) ++cutoff;
  return cutoff;
}

Mat annihilation_op(int cutoff) {
  Mat a = Mat::Zero(cutoff + 1, cutoff + 1);
  for (int m = 1; m <= cutoff; ++m) a(m - 1, m) = std::sqrt(double(m));
  return a;
}

Mat quadrature_op(int cutoff) {
  const Mat a = annihilation_op(cutoff);
  return (a + a.adjoint()) / std::sqrt(2.0);
}

Mat number_op(int cutoff) {
  Mat n = Mat::Zero(cutoff + 1, cutoff + 1);
  for (int m = 0; m <= cutoff; ++m) n(m, m) = m;
  return n;
}

DensityOperator thermal_state(const ThermalModel& model) {
  model.validate();
  detail::require(model.total_dim() <= 4096,
                  "thermal_state: dimension budget exceeded");
  Mat rho = Mat::Identity(1, 1);
  for (int j = 0; j < model.modes; ++j) {
    const Vec p = mode_weights(model.spectrum(j), model.cutoff);
    Mat mode = Mat::Zero(model.mode_dim(), model.mode_dim());
    for (int m = 0; m < p.size(); ++m) mode(m, m) = p(m);
    rho = tensor(rho, mode);
  }
  return DensityOperator(rho);
}

namespace {

Mat embed_single_mode(const Mat& op, int slot, int modes, int mode_dim) {
  Mat out = Mat::Identity(1, 1);
  for (int j = 0; j < modes; ++j) {
    out = tensor(out, j == slot ? op : Mat::Identity(mode_dim, mode_dim));
  }
  return out;
}

}  // namespace

Mat homodyne_estimator(const ThermalModel& model) {
  model.validate();
  detail::require(model.total_dim() <= 4096,
                  "homodyne_estimator: dimension budget exceeded");
  const Mat q2 = quadrature_op(model.cutoff) * quadrature_op(model.cutoff);
  const long long d = model.total_dim();
  Mat out = Mat::Zero(d, d);
  for (int j = 0; j < model.modes; ++j)
    out += embed_single_mode(q2, j, model.modes, model.mode_dim());
  out /= static_cast<double>(model.modes);
  out -= 0.5 * Mat::Identity(d, d);
  return out;
}

Mat photon_counting_estimator(const ThermalModel& model) {
  model.validate();
  detail::require(model.total_dim() <= 4096,
                  "photon_counting_estimator: dimension budget exceeded");
  const Mat n = number_op(model.cutoff);
  const long long d = model.total_dim();
  Mat out = Mat::Zero(d, d);
  for (int j = 0; j < model.modes; ++j)
    out += embed_single_mode(n, j, model.modes, model.mode_dim());
  return out / static_cast<double>(model.modes);
}

std::vector<Mat> fock_projectors(const ThermalModel& model) {
  const long long d = model.total_dim();
  std::vector<Mat> projs;
  projs.reserve(d);
  for (long long k = 0; k < d; ++k) {
    Mat p = Mat::Zero(d, d);
    p(k, k) = 1.0;
    projs.push_back(std::move(p));
  }
  return projs;
}

std::vector<ThermalCurveRow> thermal_mse_curve(int modes,
                                               const std::vector<double>& xs,
                                               int cutoff) {
  detail::require(modes > 0, "thermal_mse_curve: modes must be positive");
  detail::require(!xs.empty(), "thermal_mse_curve: empty grid");
  for (double x : xs)
    detail::require(x > 0.0, "thermal_mse_curve: grid must be positive");

  const double j = static_cast<double>(modes);
  std::vector<ThermalCurveRow> rows;
  rows.reserve(xs.size());
  for (double x : xs) {
    int n_cut = cutoff;
    if (n_cut <= 0) n_cut = choose_cutoff(Vec::Constant(modes, x));
    detail::require(tail_deviation(Vec::Constant(modes, x), n_cut) < 1e-8,
                    "thermal_mse_curve: truncation tail above tolerance");

    // Everything decomposes over iid modes: with B - xI = (1/J) sum_j c_j,
    // the MSE is (1/J) tr(rho c^2) + ((J-1)/J) (tr rho c)^2 per mode.
    const Vec p = mode_weights(x, n_cut);
    Mat rho_m = Mat::Zero(n_cut + 1, n_cut + 1);
    for (int m = 0; m <= n_cut; ++m) rho_m(m, m) = p(m);
    const DensityOperator rho(rho_m);

    const Mat id = Mat::Identity(n_cut + 1, n_cut + 1);
    const Mat h = quadrature_op(n_cut) * quadrature_op(n_cut) - 0.5 * id;
    const Mat c_hom = h - x * id;
    const Mat c_cnt = number_op(n_cut) - x * id;

    auto mode_mse = [&](const Mat& c) {
      const double second = (rho.matrix() * c * c).trace().real();
      const double first = (rho.matrix() * c).trace().real();
      return second / j + (j - 1.0) / j * first * first;
    };

    ThermalCurveRow row;
    row.x = x;
    row.mse_homodyne_numeric = mode_mse(c_hom);
    row.mse_counting_numeric = mode_mse(c_cnt);
    row.mse_homodyne_analytic = 2.0 / j * (x + 0.5) * (x + 0.5);
    row.mse_counting_analytic = (x * x + x) / j;
    row.gap = row.mse_homodyne_numeric - row.mse_counting_numeric;

    // Divergence between B and its Fock-dephased image, from the three-term
    // formula rather than the MSE difference.  Cross terms between distinct
    // modes cancel because the dephasing preserves every first moment, so
    // D = D_single / J.
    Mat h_diag = Mat::Zero(n_cut + 1, n_cut + 1);
    for (int m = 0; m <= n_cut; ++m) h_diag(m, m) = h(m, m);
    const double d_single =
        weighted_inner(ProductKind::Jordan, rho, h, h).real() -
        2.0 * weighted_inner(ProductKind::Jordan, rho, h_diag, h).real() +
        weighted_inner(ProductKind::Jordan, rho, h_diag, h_diag).real();
    row.divergence = d_single / j;

    rows.push_back(row);
  }
  return rows;
}

}  // namespace qgce
