#pragma once

#include <variant>
#include <vector>

#include "qgce/gce.hpp"

namespace qgce {

// Frequentist model: a family of states over a parameter grid with a real
// parameter of interest.
struct FreqModel {
  Vec grid;
  std::vector<DensityOperator> states;
  Vec values;  // a(x)

  void validate() const;
  int dim() const { return states.front().dim(); }
  int points() const { return static_cast<int>(states.size()); }
};

// Local MSE per grid point: ||b - a(x) I||^2_{rho_x} with the Jordan product.
Vec freq_mse(const FreqModel& model, const Mat& b);

// Closed-form Rao-Blackwell constructions.  Each is a parameter-independent
// solution of the GCE through the matching sufficient channel.
Mat rb_ancilla(const Mat& b, int dim1, const DensityOperator& tau);
Mat rb_symmetrize(const Mat& b, const std::vector<Mat>& unitaries,
                  const Vec& weights);
Mat rb_permutation_haar(const Mat& b, int n, int subsystem_dim);
Mat rb_direct_sum(const Mat& b, const std::vector<Mat>& projectors);
Mat rb_sinha(const Mat& b, const std::vector<Mat>& projectors,
             const std::vector<Mat>& sigma_blocks);

// Binomial-weighted U-statistic embedding of c (on m subsystems) and c_prime
// (on n-m subsystems) into n subsystems; equals the full Haar symmetrization
// of c (x) c_prime.  Non-symmetric factors are symmetrized first.
Mat u_statistic(const Mat& c, const Mat& c_prime, int n, int m,
                int subsystem_dim);

// Permutation unitary on (subsystem_dim)^n product space.
Mat permutation_unitary(const std::vector<int>& perm, int subsystem_dim);

struct AncillaConstruction {
  int dim1 = 0;
  DensityOperator tau;
};
struct SymmetrizeConstruction {
  std::vector<Mat> unitaries;
  Vec weights;
};
struct PermutationConstruction {
  int n = 0;
  int subsystem_dim = 0;
};
struct DirectSumConstruction {
  std::vector<Mat> projectors;
};
// Arbitrary user channel: the GCE is computed per grid point and accepted
// only if it is parameter-independent within 1e-8.
struct ChannelConstruction {
  Channel channel;
};

using RbConstruction =
    std::variant<AncillaConstruction, SymmetrizeConstruction,
                 PermutationConstruction, DirectSumConstruction,
                 ChannelConstruction>;

struct RbOutcome {
  Vec original_mse;
  Vec rb_mse;
  Vec gap;
  Operator estimator;
};

// Evaluates both MSE vectors and checks the gap against the divergence
// identity per grid point.
RbOutcome rb_apply(const FreqModel& model, const Mat& b,
                   const RbConstruction& construction);

struct ClassicalRbResult {
  bool x_independent = true;
  Vec c;                        // c(z) when x-independent
  Eigen::MatrixXd c_by_x;       // c(z, x), points x cols
  Vec mse_original;
  Vec mse_rb;                   // valid when x_independent
};

// Classical reduction: Y ~ pyx(:,x), statistic Z ~ pzy(:,y), estimator b(y).
// pyx is |Y| x |X| column-stochastic, pzy is |Z| x |Y| column-stochastic.
ClassicalRbResult classical_rb(const Eigen::MatrixXd& pyx,
                               const Eigen::MatrixXd& pzy, const Vec& b,
                               const Vec& a, const Vec& grid);

}  // namespace qgce
