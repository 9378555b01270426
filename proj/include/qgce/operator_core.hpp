#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qgce {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;

// Operator product used by the E-map.  Jordan is the default everywhere an
// error or MSE is computed; the metrology layers refuse the others.
enum class ProductKind { Jordan, Left, Root };

std::string to_string(ProductKind p);
ProductKind product_from_string(const std::string& s);

constexpr double kHermTol = 1e-12;
constexpr double kEigClampTol = 1e-12;
constexpr double kDegenerateMergeTol = 1e-9;

bool is_hermitian(const Mat& m, double tol = kHermTol);

// Dense complex square matrix with an optional Hermiticity flag.
struct Operator {
  Mat entries;
  bool hermitian = false;

  Operator() = default;
  Operator(Mat m, bool herm = false);

  int dim() const { return static_cast<int>(entries.rows()); }

  static Operator identity(int d);
};

// Positive-semidefinite unit-trace operator with a cached eigendecomposition.
// Eigenvalues in [-1e-12, 0) are clamped to zero and the state renormalized;
// larger negativity or a trace off by more than 1e-12 is an error.
class DensityOperator {
 public:
  explicit DensityOperator(const Mat& rho);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Mat& matrix() const { return mat_; }
  const Vec& eigenvalues() const { return eigvals_; }  // descending
  const Mat& eigenvectors() const { return eigvecs_; } // columns match eigvals
  int support_rank() const { return support_rank_; }

  // Principal square root from the cached eigendecomposition.
  const Mat& sqrt() const { return sqrt_; }

 private:
  Mat mat_;
  Vec eigvals_;
  Mat eigvecs_;
  Mat sqrt_;
  int support_rank_ = 0;
};

// Spectral decomposition of a Hermitian operator with degenerate eigenvalues
// merged (tolerance 1e-9) so the outcome set is distinct.
struct SpectralMeasure {
  Vec eigenvalues;               // distinct, ascending
  std::vector<Mat> projectors;   // mutually orthogonal, sum to identity
};

// E-map: (rho a + a rho)/2, rho a, or sqrt(rho) a sqrt(rho).
Mat emap(ProductKind product, const DensityOperator& rho, const Mat& a);

// trace(b^dagger E_rho(a))
Complex weighted_inner(ProductKind product, const DensityOperator& rho,
                       const Mat& b, const Mat& a);

// Re<a,a>_rho, clamped at zero from below.
double weighted_norm_sq(ProductKind product, const DensityOperator& rho,
                        const Mat& a);

Mat tensor(const Mat& a, const Mat& b);
Mat direct_sum(const std::vector<Mat>& blocks);

// Partial trace of an operator on a tensor product with factor dimensions
// `dims`, keeping the factors listed in `keep` (ascending order of slots).
Mat partial_trace(const Mat& a, const std::vector<int>& dims,
                  const std::vector<int>& keep);

SpectralMeasure spectral(const Mat& a);

namespace detail {
void require(bool cond, const std::string& msg);
void require_square(const Mat& m, const std::string& who);
void require_same_dim(const Mat& a, const Mat& b, const std::string& who);
}  // namespace detail

}  // namespace qgce
