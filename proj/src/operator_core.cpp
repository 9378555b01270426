#include "qgce/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qgce {

std::string to_string(ProductKind p) {
  switch (p) {
    case ProductKind::Jordan: return "jordan";
    case ProductKind::Left: return "left";
    case ProductKind::Root: return "root";
  }
  return "?";
}

ProductKind product_from_string(const std::string& s) {
  if (s == "jordan") return ProductKind::Jordan;
  if (s == "left") return ProductKind::Left;
  if (s == "root") return ProductKind::Root;
  throw std::invalid_argument("unknown product kind: " + s);
}

namespace detail {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void require_square(const Mat& m, const std::string& who) {
  require(m.rows() == m.cols() && m.rows() > 0,
          who + ": operator must be a nonempty square matrix");
}

void require_same_dim(const Mat& a, const Mat& b, const std::string& who) {
  require(a.rows() == b.rows() && a.cols() == b.cols(),
          who + ": dimension mismatch");
}

}  // namespace detail

bool is_hermitian(const Mat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Operator::Operator(Mat m, bool herm) : entries(std::move(m)), hermitian(herm) {
  detail::require_square(entries, "Operator");
  if (hermitian) {
    detail::require(is_hermitian(entries),
                    "Operator: hermitian flag set but matrix is not Hermitian");
  }
}

Operator Operator::identity(int d) {
  return Operator(Mat::Identity(d, d), true);
}

DensityOperator::DensityOperator(const Mat& rho) {
  detail::require_square(rho, "DensityOperator");
  detail::require(is_hermitian(rho, 1e-10),
                  "DensityOperator: matrix is not Hermitian");
  const double tr = rho.trace().real();
  detail::require(std::abs(tr - 1.0) <= 1e-10,
                  "DensityOperator: trace must be 1 (got " + std::to_string(tr) +
                      ")");

  Eigen::SelfAdjointEigenSolver<Mat> es((rho + rho.adjoint()) / 2.0);
  Vec vals = es.eigenvalues();
  detail::require(vals.minCoeff() >= -kEigClampTol,
                  "DensityOperator: negative eigenvalue beyond clamp tolerance");
  for (int i = 0; i < vals.size(); ++i) {
    if (vals(i) < 0.0) vals(i) = 0.0;
  }
  vals /= vals.sum();

  // Store descending.
  const int d = static_cast<int>(vals.size());
  eigvals_.resize(d);
  eigvecs_.resize(d, d);
  for (int i = 0; i < d; ++i) {
    eigvals_(i) = vals(d - 1 - i);
    eigvecs_.col(i) = es.eigenvectors().col(d - 1 - i);
  }
  mat_ = eigvecs_ * eigvals_.asDiagonal() * eigvecs_.adjoint();
  mat_ = (mat_ + mat_.adjoint()) / 2.0;

  support_rank_ = 0;
  for (int i = 0; i < d; ++i) {
    if (eigvals_(i) > kEigClampTol) ++support_rank_;
  }
  sqrt_ = eigvecs_ * eigvals_.cwiseSqrt().asDiagonal() * eigvecs_.adjoint();
}

Mat emap(ProductKind product, const DensityOperator& rho, const Mat& a) {
  detail::require_same_dim(rho.matrix(), a, "emap");
  switch (product) {
    case ProductKind::Jordan:
      return (rho.matrix() * a + a * rho.matrix()) / 2.0;
    case ProductKind::Left:
      return rho.matrix() * a;
    case ProductKind::Root:
      return rho.sqrt() * a * rho.sqrt();
  }
  throw std::logic_error("emap: unreachable");
}

Complex weighted_inner(ProductKind product, const DensityOperator& rho,
                       const Mat& b, const Mat& a) {
  detail::require_same_dim(b, a, "weighted_inner");
  return (b.adjoint() * emap(product, rho, a)).trace();
}

double weighted_norm_sq(ProductKind product, const DensityOperator& rho,
                        const Mat& a) {
  const double v = weighted_inner(product, rho, a, a).real();
  return std::max(v, 0.0);
}

Mat tensor(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat direct_sum(const std::vector<Mat>& blocks) {
  detail::require(!blocks.empty(), "direct_sum: empty block list");
  int total = 0;
  for (const auto& blk : blocks) {
    detail::require_square(blk, "direct_sum");
    total += static_cast<int>(blk.rows());
  }
  Mat out = Mat::Zero(total, total);
  int off = 0;
  for (const auto& blk : blocks) {
    out.block(off, off, blk.rows(), blk.cols()) = blk;
    off += static_cast<int>(blk.rows());
  }
  return out;
}

Mat partial_trace(const Mat& a, const std::vector<int>& dims,
                  const std::vector<int>& keep) {
  const int n = static_cast<int>(dims.size());
  long long total = 1;
  for (int d : dims) {
    detail::require(d > 0, "partial_trace: factor dims must be positive");
    total *= d;
  }
  detail::require(a.rows() == total && a.cols() == total,
                  "partial_trace: operator dim does not match factor dims");
  std::vector<char> keep_mask(n, 0);
  for (int k : keep) {
    detail::require(k >= 0 && k < n, "partial_trace: keep index out of range");
    keep_mask[k] = 1;
  }

  long long kept_dim = 1, traced_dim = 1;
  for (int i = 0; i < n; ++i) (keep_mask[i] ? kept_dim : traced_dim) *= dims[i];

  // Row-major mixed-radix index helpers: slot 0 is the most significant.
  std::vector<long long> stride(n, 1);
  for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * dims[i + 1];

  auto compose = [&](const std::vector<int>& kept_digits,
                     const std::vector<int>& traced_digits) {
    long long idx = 0;
    int ki = 0, ti = 0;
    for (int i = 0; i < n; ++i)
      idx += stride[i] * (keep_mask[i] ? kept_digits[ki++] : traced_digits[ti++]);
    return idx;
  };

  std::vector<int> kept_dims, traced_dims;
  for (int i = 0; i < n; ++i)
    (keep_mask[i] ? kept_dims : traced_dims).push_back(dims[i]);

  auto unflatten = [](long long flat, const std::vector<int>& ds) {
    std::vector<int> digits(ds.size(), 0);
    for (int i = static_cast<int>(ds.size()) - 1; i >= 0; --i) {
      digits[i] = static_cast<int>(flat % ds[i]);
      flat /= ds[i];
    }
    return digits;
  };

  Mat out = Mat::Zero(kept_dim, kept_dim);
  for (long long r = 0; r < kept_dim; ++r) {
    const auto rd = unflatten(r, kept_dims);
    for (long long c = 0; c < kept_dim; ++c) {
      const auto cd = unflatten(c, kept_dims);
      Complex sum = 0.0;
      for (long long t = 0; t < traced_dim; ++t) {
        const auto td = unflatten(t, traced_dims);
        sum += a(compose(rd, td), compose(cd, td));
      }
      out(r, c) = sum;
    }
  }
  return out;
}

SpectralMeasure spectral(const Mat& a) {
  detail::require_square(a, "spectral");
  detail::require(is_hermitian(a, 1e-10), "spectral: operator is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es((a + a.adjoint()) / 2.0);
  const Vec& vals = es.eigenvalues();  // ascending
  const Mat& vecs = es.eigenvectors();

  SpectralMeasure sm;
  const int d = static_cast<int>(vals.size());
  int i = 0;
  std::vector<double> merged;
  while (i < d) {
    int j = i;
    while (j + 1 < d && vals(j + 1) - vals(j) <= kDegenerateMergeTol) ++j;
    Mat proj = Mat::Zero(d, d);
    double sum = 0.0;
    for (int k = i; k <= j; ++k) {
      proj += vecs.col(k) * vecs.col(k).adjoint();
      sum += vals(k);
    }
    merged.push_back(sum / (j - i + 1));
    sm.projectors.push_back(std::move(proj));
    i = j + 1;
  }
  sm.eigenvalues = Eigen::Map<Vec>(merged.data(), merged.size());
  return sm;
}

}  // namespace qgce
