#include "qgce/rao_blackwell.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qgce {

void FreqModel::validate() const {
  detail::require(!states.empty(), "FreqModel: empty grid");
  detail::require(grid.size() == static_cast<long>(states.size()) &&
                      values.size() == static_cast<long>(states.size()),
                  "FreqModel: grid/states/values length mismatch");
  const int d = states.front().dim();
  for (const auto& s : states)
    detail::require(s.dim() == d, "FreqModel: states of unequal dimension");
}

Vec freq_mse(const FreqModel& model, const Mat& b) {
  model.validate();
  detail::require(is_hermitian(b, 1e-10), "freq_mse: estimator not Hermitian");
  detail::require(b.rows() == model.dim(), "freq_mse: dimension mismatch");
  Vec mse(model.points());
  const Mat id = Mat::Identity(b.rows(), b.cols());
  for (int x = 0; x < model.points(); ++x) {
    mse(x) = weighted_norm_sq(ProductKind::Jordan, model.states[x],
                              b - model.values(x) * id);
  }
  return mse;
}

Mat rb_ancilla(const Mat& b, int dim1, const DensityOperator& tau) {
  detail::require(dim1 > 0 && b.rows() % dim1 == 0,
                  "rb_ancilla: estimator dim does not factor through dim1");
  const int dim0 = static_cast<int>(b.rows()) / dim1;
  detail::require(tau.dim() == dim0,
                  "rb_ancilla: ancilla state dim mismatch");
  const Mat weighted =
      tensor(Mat::Identity(dim1, dim1), tau.matrix()) * b;
  return partial_trace(weighted, {dim1, dim0}, {0});
}

Mat rb_symmetrize(const Mat& b, const std::vector<Mat>& unitaries,
                  const Vec& weights) {
  detail::require(!unitaries.empty() &&
                      weights.size() == static_cast<long>(unitaries.size()),
                  "rb_symmetrize: unitaries/weights mismatch");
  detail::require(weights.minCoeff() >= 0.0 &&
                      std::abs(weights.sum() - 1.0) <= 1e-12,
                  "rb_symmetrize: weights must form a distribution");
  Mat out = Mat::Zero(b.rows(), b.cols());
  for (size_t z = 0; z < unitaries.size(); ++z)
    out += weights(z) * unitaries[z] * b * unitaries[z].adjoint();
  return out;
}

Mat permutation_unitary(const std::vector<int>& perm, int subsystem_dim) {
  const int n = static_cast<int>(perm.size());
  long long dim = 1;
  for (int i = 0; i < n; ++i) dim *= subsystem_dim;

  std::vector<int> inv(n);
  for (int i = 0; i < n; ++i) inv[perm[i]] = i;

  Mat u = Mat::Zero(dim, dim);
  std::vector<int> digits(n);
  for (long long col = 0; col < dim; ++col) {
    long long rem = col;
    for (int k = n - 1; k >= 0; --k) {
      digits[k] = static_cast<int>(rem % subsystem_dim);
      rem /= subsystem_dim;
    }
    long long row = 0;
    for (int k = 0; k < n; ++k) row = row * subsystem_dim + digits[inv[k]];
    u(row, col) = 1.0;
  }
  return u;
}

Mat rb_permutation_haar(const Mat& b, int n, int subsystem_dim) {
  detail::require(n >= 1 && n <= 6, "rb_permutation_haar: n out of range [1,6]");
  long long dim = 1;
  for (int i = 0; i < n; ++i) dim *= subsystem_dim;
  detail::require(b.rows() == dim,
                  "rb_permutation_haar: estimator dim mismatch");

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Mat out = Mat::Zero(dim, dim);
  long long count = 0;
  do {
    const Mat u = permutation_unitary(perm, subsystem_dim);
    out += u * b * u.adjoint();
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out / static_cast<double>(count);
}

Mat rb_direct_sum(const Mat& b, const std::vector<Mat>& projectors) {
  const Channel check = block_dephasing_channel(projectors);  // validates
  detail::require(b.rows() == check.dim_in, "rb_direct_sum: dim mismatch");
  Mat out = Mat::Zero(b.rows(), b.cols());
  for (const auto& p : projectors) out += p * b * p;
  return out;
}

Mat rb_sinha(const Mat& b, const std::vector<Mat>& projectors,
             const std::vector<Mat>& sigma_blocks) {
  block_dephasing_channel(projectors);  // validates the projector family
  detail::require(projectors.size() == sigma_blocks.size(),
                  "rb_sinha: projector/sigma block count mismatch");
  Mat out = Mat::Zero(b.rows(), b.cols());
  for (size_t s = 0; s < projectors.size(); ++s) {
    const Mat& proj = projectors[s];
    detail::require(sigma_blocks[s].rows() == b.rows() &&
                        sigma_blocks[s].cols() == b.cols(),
                    "rb_sinha: sigma blocks must be embedded at full dimension");
    detail::require((b * proj - proj * b).cwiseAbs().maxCoeff() <= 1e-10,
                    "rb_sinha: estimator does not commute with the projectors");
    const Mat block = proj * b * proj;
    const double weight = sigma_blocks[s].trace().real();
    detail::require(weight > 1e-14, "rb_sinha: zero-trace sigma block");
    out += ((sigma_blocks[s] * block).trace().real() / weight) * proj;
  }
  return out;
}

namespace {

long long binomial(int n, int m) {
  long long r = 1;
  for (int i = 0; i < m; ++i) r = r * (n - i) / (i + 1);
  return r;
}

// Applies c to the subsystems listed in `slots` (ascending) and c_prime to
// the rest, by direct digit bookkeeping on the product basis.
Mat embed_pair(const Mat& c, const Mat& c_prime, int n, int subsystem_dim,
               const std::vector<int>& slots) {
  long long dim = 1;
  for (int i = 0; i < n; ++i) dim *= subsystem_dim;
  std::vector<char> in_c(n, 0);
  for (int s : slots) in_c[s] = 1;

  auto split = [&](long long flat, long long& idx_c, long long& idx_cp) {
    std::vector<int> digits(n);
    for (int k = n - 1; k >= 0; --k) {
      digits[k] = static_cast<int>(flat % subsystem_dim);
      flat /= subsystem_dim;
    }
    idx_c = 0;
    idx_cp = 0;
    for (int k = 0; k < n; ++k) {
      if (in_c[k]) idx_c = idx_c * subsystem_dim + digits[k];
      else idx_cp = idx_cp * subsystem_dim + digits[k];
    }
  };

  Mat out(dim, dim);
  for (long long r = 0; r < dim; ++r) {
    long long rc, rcp;
    split(r, rc, rcp);
    for (long long col = 0; col < dim; ++col) {
      long long cc, ccp;
      split(col, cc, ccp);
      out(r, col) = c(rc, cc) * c_prime(rcp, ccp);
    }
  }
  return out;
}

}  // namespace

Mat u_statistic(const Mat& c, const Mat& c_prime, int n, int m,
                int subsystem_dim) {
  detail::require(m >= 0 && m <= n, "u_statistic: need 0 <= m <= n");
  long long dim_c = 1, dim_cp = 1;
  for (int i = 0; i < m; ++i) dim_c *= subsystem_dim;
  for (int i = 0; i < n - m; ++i) dim_cp *= subsystem_dim;
  detail::require(c.rows() == dim_c && c_prime.rows() == dim_cp,
                  "u_statistic: factor dims do not match (n, m)");

  const Mat cs = m >= 2 ? rb_permutation_haar(c, m, subsystem_dim) : c;
  const Mat cps =
      n - m >= 2 ? rb_permutation_haar(c_prime, n - m, subsystem_dim) : c_prime;

  // Enumerate m-combinations of {0,...,n-1}.
  std::vector<int> slots(m);
  std::iota(slots.begin(), slots.end(), 0);
  long long dim = 1;
  for (int i = 0; i < n; ++i) dim *= subsystem_dim;
  Mat out = Mat::Zero(dim, dim);
  while (true) {
    out += embed_pair(cs, cps, n, subsystem_dim, slots);
    int i = m - 1;
    while (i >= 0 && slots[i] == n - m + i) --i;
    if (i < 0) break;
    ++slots[i];
    for (int j = i + 1; j < m; ++j) slots[j] = slots[j - 1] + 1;
  }
  return out / static_cast<double>(binomial(n, m));
}

namespace {

struct ConstructionRealization {
  Channel channel;
  Mat estimator;
};

ConstructionRealization realize(const FreqModel& model, const Mat& b,
                                const RbConstruction& construction) {
  if (const auto* anc = std::get_if<AncillaConstruction>(&construction)) {
    const int dim0 = static_cast<int>(b.rows()) / anc->dim1;
    return {ancilla_discard_channel(anc->dim1, dim0),
            rb_ancilla(b, anc->dim1, anc->tau)};
  }
  if (const auto* sym = std::get_if<SymmetrizeConstruction>(&construction)) {
    return {random_unitary_channel(sym->unitaries, sym->weights),
            rb_symmetrize(b, sym->unitaries, sym->weights)};
  }
  if (const auto* perm = std::get_if<PermutationConstruction>(&construction)) {
    std::vector<int> p(perm->n);
    std::iota(p.begin(), p.end(), 0);
    std::vector<Mat> unitaries;
    do {
      unitaries.push_back(permutation_unitary(p, perm->subsystem_dim));
    } while (std::next_permutation(p.begin(), p.end()));
    Vec weights = Vec::Constant(static_cast<long>(unitaries.size()),
                                1.0 / static_cast<double>(unitaries.size()));
    return {random_unitary_channel(unitaries, weights),
            rb_permutation_haar(b, perm->n, perm->subsystem_dim)};
  }
  if (const auto* ds = std::get_if<DirectSumConstruction>(&construction)) {
    return {block_dephasing_channel(ds->projectors),
            rb_direct_sum(b, ds->projectors)};
  }
  const auto& chc = std::get<ChannelConstruction>(construction);
  // The construction is only valid when the GCE is parameter-independent.
  Mat first;
  for (int x = 0; x < model.points(); ++x) {
    const GceResult res = gce(ProductKind::Jordan, model.states[x],
                              chc.channel, Operator(b, true));
    if (x == 0) {
      first = res.estimator.entries;
    } else if ((res.estimator.entries - first).norm() > 1e-8) {
      throw std::runtime_error(
          "rb_apply: GCE depends on the parameter; channel is not a valid "
          "Rao-Blackwell construction for this model");
    }
  }
  return {chc.channel, first};
}

}  // namespace

RbOutcome rb_apply(const FreqModel& model, const Mat& b,
                   const RbConstruction& construction) {
  model.validate();
  detail::require(is_hermitian(b, 1e-10), "rb_apply: estimator not Hermitian");

  const ConstructionRealization real = realize(model, b, construction);
  const Channel& g = real.channel;
  detail::require(g.dim_in == model.dim(), "rb_apply: channel dim mismatch");

  RbOutcome out;
  out.estimator = Operator(real.estimator, true);
  out.original_mse = freq_mse(model, b);

  FreqModel pushed;
  pushed.grid = model.grid;
  pushed.values = model.values;
  for (const auto& s : model.states) pushed.states.push_back(g.apply(s));
  out.rb_mse = freq_mse(pushed, real.estimator);
  out.gap = out.original_mse - out.rb_mse;

  for (int x = 0; x < model.points(); ++x) {
    const double div = divergence(ProductKind::Jordan, model.states[x], g, b,
                                  real.estimator);
    const double tol = 1e-8 * std::max(1.0, std::abs(out.original_mse(x)));
    if (std::abs(out.gap(x) - div) > tol) {
      throw std::runtime_error(
          "rb_apply: gap does not match the divergence at grid point " +
          std::to_string(x));
    }
  }
  return out;
}

ClassicalRbResult classical_rb(const Eigen::MatrixXd& pyx,
                               const Eigen::MatrixXd& pzy, const Vec& b,
                               const Vec& a, const Vec& grid) {
  const int nx = static_cast<int>(pyx.cols());
  const int ny = static_cast<int>(pyx.rows());
  const int nz = static_cast<int>(pzy.rows());
  detail::require(pzy.cols() == ny, "classical_rb: pzy/pyx shape mismatch");
  detail::require(b.size() == ny && a.size() == nx && grid.size() == nx,
                  "classical_rb: vector length mismatch");
  for (int x = 0; x < nx; ++x)
    detail::require(std::abs(pyx.col(x).sum() - 1.0) <= 1e-12 &&
                        pyx.col(x).minCoeff() >= 0.0,
                    "classical_rb: pyx columns must be stochastic");
  for (int y = 0; y < ny; ++y)
    detail::require(std::abs(pzy.col(y).sum() - 1.0) <= 1e-12 &&
                        pzy.col(y).minCoeff() >= 0.0,
                    "classical_rb: pzy columns must be stochastic");

  const Eigen::MatrixXd pzx = pzy * pyx;

  ClassicalRbResult res;
  res.c_by_x = Eigen::MatrixXd::Zero(nz, nx);
  Eigen::MatrixXd defined = Eigen::MatrixXd::Zero(nz, nx);
  for (int z = 0; z < nz; ++z)
    for (int x = 0; x < nx; ++x) {
      if (pzx(z, x) <= 1e-300) continue;
      double num = 0.0;
      for (int y = 0; y < ny; ++y) num += pzy(z, y) * pyx(y, x) * b(y);
      res.c_by_x(z, x) = num / pzx(z, x);
      defined(z, x) = 1.0;
    }

  res.c = Vec::Zero(nz);
  for (int z = 0; z < nz; ++z) {
    double lo = 0.0, hi = 0.0;
    bool any = false;
    for (int x = 0; x < nx; ++x) {
      if (defined(z, x) == 0.0) continue;
      const double v = res.c_by_x(z, x);
      if (!any) { lo = hi = v; any = true; }
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      res.c(z) = v;
    }
    if (any && hi - lo > 1e-9) res.x_independent = false;
  }

  res.mse_original = Vec::Zero(nx);
  res.mse_rb = Vec::Zero(nx);
  for (int x = 0; x < nx; ++x) {
    for (int y = 0; y < ny; ++y)
      res.mse_original(x) += pyx(y, x) * (b(y) - a(x)) * (b(y) - a(x));
    for (int z = 0; z < nz; ++z)
      res.mse_rb(x) += pzx(z, x) * (res.c(z) - a(x)) * (res.c(z) - a(x));
  }
  return res;
}

}  // namespace qgce
