// Release gate: one check per shipped guarantee, one pass/fail line each.
// Exits nonzero if any line fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "oracles.hpp"
#include "qgce/bayes.hpp"
#include "qgce/dp.hpp"
#include "qgce/gaussian.hpp"
#include "qgce/rao_blackwell.hpp"
#include "qgce/thermal.hpp"

using namespace qgce;

namespace {

int failures = 0;

void report(int idx, const std::string& name, bool ok,
            const std::string& detail = "") {
  std::printf("[%s] %d. %s%s%s\n", ok ? "PASS" : "FAIL", idx, name.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!ok) ++failures;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// 1. Truncated thermal MSE curves match the closed forms and photon counting
//    dominates homodyne, J in {1,2}, inside 30 s.
void criterion_thermal() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  const std::vector<double> xs{0.1, 0.5, 1.0, 2.0, 5.0, 10.0};
  for (int modes : {1, 2}) {
    const auto curve = thermal_mse_curve(modes, xs);
    for (const auto& r : curve) {
      const double rel_h =
          std::abs(r.mse_homodyne_numeric - r.mse_homodyne_analytic) /
          r.mse_homodyne_analytic;
      const double rel_c =
          std::abs(r.mse_counting_numeric - r.mse_counting_analytic) /
          r.mse_counting_analytic;
      if (rel_h >= 1e-4 || rel_c >= 1e-4 ||
          r.mse_counting_numeric >= r.mse_homodyne_numeric) {
        ok = false;
        detail = "J=" + std::to_string(modes) + " x=" + std::to_string(r.x);
      }
    }
  }
  const double dt = elapsed_s(t0);
  if (dt >= 30.0) {
    ok = false;
    detail += " runtime " + std::to_string(dt) + "s";
  }
  report(1, "thermal MSE curves match closed forms (J=1,2; 6 grid points)", ok,
         detail);
}

// 2. Worked two-hypothesis qubit model: estimator matrix, Bayes error, and
//    per-outcome values, each within 1e-10, cross-checked against the
//    vectorized least-squares route.
void criterion_worked_model() {
  Mat rho0 = Mat::Zero(2, 2), rho1 = Mat::Zero(2, 2);
  rho0(0, 0) = 1.0;
  rho1.setConstant(0.5);
  BayesModel model{{"0", "1"},
                   (Vec(2) << 0.5, 0.5).finished(),
                   {DensityOperator(rho0), DensityOperator(rho1)},
                   (Vec(2) << 0.0, 1.0).finished()};
  const EstimatorReport rep = personick(model);

  Mat expected(2, 2);
  expected << 0.25, 0.25, 0.25, 0.75;
  bool ok = (rep.estimator.entries - expected).cwiseAbs().maxCoeff() < 1e-10 &&
            std::abs(rep.bayes_mse - 0.125) < 1e-10;

  const oracles::LsqGce ref =
      oracles::lsq_gce(ProductKind::Jordan, model.prior_state(),
                       cq_channel(model.states), model.value_operator().entries);
  ok = ok && (rep.estimator.entries - ref.estimator).norm() < 1e-10 &&
       std::abs(rep.bayes_mse - ref.min_divergence) < 1e-10;

  Mat p0 = Mat::Zero(2, 2), p1 = Mat::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  const WeakValueResult wv = weak_value_estimator(model, {p0, p1});
  ok = ok && std::abs(wv.outcome_values(0) - 1.0 / 3.0) < 1e-10 &&
       std::abs(wv.outcome_values(1) - 1.0) < 1e-10;
  report(2, "worked qubit model (estimator, error 0.125, outcomes 1/3 and 1)",
         ok);
}

// 3. Structural identities on 200 random instances, dims <= 6, inside 60 s:
//    two-step decomposition, chain additivity, monotonicity, mean
//    preservation, variance decomposition.
void criterion_identities() {
  const auto t0 = std::chrono::steady_clock::now();
  oracles::Rng rng(2026);
  bool ok = true;
  std::string detail;
  constexpr ProductKind products[] = {ProductKind::Jordan, ProductKind::Left,
                                      ProductKind::Root};
  for (int trial = 0; trial < 200 && ok; ++trial) {
    const int d = 2 + int(rng() % 5);  // dims 2..6
    const DensityOperator sigma =
        oracles::random_density(rng, d, trial % 5 == 0 ? 1 + d / 2 : d);
    const Channel f = oracles::random_channel(rng, d, d, 2);
    const Channel g = oracles::random_channel(rng, d, d, 2);
    const Operator a(oracles::random_hermitian(rng, d), true);
    const ProductKind p = products[trial % 3];

    const PythagorasCheck py = pythagoras_check(p, sigma, f, g, a);
    if (py.gap >= 1e-8) {
      ok = false;
      detail = "two-step gap " + std::to_string(py.gap);
      break;
    }

    const auto chain = chain_gce(p, sigma, {f, g}, a);
    const GceResult whole = gce(p, sigma, compose(g, f), a);
    const double chain_gap =
        std::abs(chain[0].min_divergence + chain[1].min_divergence -
                 whole.min_divergence);
    if (chain_gap >= 1e-8) {
      ok = false;
      detail = "chain additivity gap " + std::to_string(chain_gap);
      break;
    }

    const double one = gce(p, sigma, f, a).min_divergence;
    if (whole.min_divergence - one < -1e-9) {
      ok = false;
      detail = "monotonicity violated by " +
               std::to_string(one - whole.min_divergence);
      break;
    }

    // Mean preservation: tr[F(sigma) X] = tr[sigma A] for Jordan.
    if (p == ProductKind::Jordan) {
      const GceResult res = gce(p, sigma, f, a);
      const double before = (sigma.matrix() * a.entries).trace().real();
      const double after =
          (f.apply(sigma).matrix() * res.estimator.entries).trace().real();
      if (std::abs(before - after) >= 1e-10) {
        ok = false;
        detail = "mean drift " + std::to_string(std::abs(before - after));
        break;
      }

      // Variance decomposition: ||A||^2 = ||X||^2 + D_min.
      const double na = weighted_norm_sq(p, sigma, a.entries);
      const double nx =
          weighted_norm_sq(p, f.apply(sigma), res.estimator.entries);
      if (std::abs(na - nx - res.min_divergence) >= 1e-9) {
        ok = false;
        detail = "variance decomposition gap";
        break;
      }
    }
  }
  const double dt = elapsed_s(t0);
  if (dt >= 60.0) {
    ok = false;
    detail += " runtime " + std::to_string(dt) + "s";
  }
  report(3, "structural identities on 200 random instances (dims <= 6)", ok,
         detail);
}

// 4. The four estimator-improvement constructions: pointwise domination with
//    gap = divergence on 100 random models, and the closed forms solve the
//    defining equation under all three products.
void criterion_rao_blackwell() {
  oracles::Rng rng(2027);
  bool ok = true;
  std::string detail;
  constexpr ProductKind products[] = {ProductKind::Jordan, ProductKind::Left,
                                      ProductKind::Root};

  for (int trial = 0; trial < 100 && ok; ++trial) {
    const int kind = trial % 4;
    try {
      switch (kind) {
        case 0: {  // ancilla discard
          const int d1 = 2, d0 = 2;
          const DensityOperator tau = oracles::random_density(rng, d0);
          FreqModel m;
          m.grid = Vec::LinSpaced(3, 0.0, 1.0);
          m.values = Vec::Random(3);
          for (int x = 0; x < 3; ++x)
            m.states.emplace_back(tensor(
                oracles::random_density(rng, d1).matrix(), tau.matrix()));
          const Mat b = oracles::random_hermitian(rng, d1 * d0);
          const RbOutcome out = rb_apply(m, b, AncillaConstruction{d1, tau});
          for (int x = 0; x < 3; ++x)
            if (out.rb_mse(x) > out.original_mse(x) + 1e-9 ||
                std::abs(out.gap(x) - (out.original_mse(x) - out.rb_mse(x))) >
                    1e-8)
              ok = false;
          // Defining equation under every product.
          const Mat xo = rb_ancilla(b, d1, tau);
          const Channel disc = ancilla_discard_channel(d1, d0);
          for (auto p : products)
            for (const auto& st : m.states) {
              const double res =
                  (emap(p, disc.apply(st), xo) - disc.apply_mat(emap(p, st, b)))
                      .norm();
              if (res >= 1e-8) ok = false;
            }
          break;
        }
        case 1: {  // phase-group averaging
          const int d = 3;
          Mat u = Mat::Identity(d, d);
          u(1, 1) = Complex(0.0, 1.0);
          u(2, 2) = Complex(-1.0, 0.0);
          std::vector<Mat> us;
          Mat pw = Mat::Identity(d, d);
          for (int k = 0; k < 4; ++k) {
            us.push_back(pw);
            pw = pw * u;
          }
          const Vec w = Vec::Constant(4, 0.25);
          FreqModel m;
          m.grid = Vec::LinSpaced(3, 0.0, 1.0);
          m.values = Vec::Random(3);
          for (int x = 0; x < 3; ++x) {
            Vec p = oracles::random_simplex(rng, d);
            Mat rho = Mat::Zero(d, d);
            for (int i = 0; i < d; ++i) rho(i, i) = p(i);
            m.states.emplace_back(rho);
          }
          const Mat b = oracles::random_hermitian(rng, d);
          const RbOutcome out =
              rb_apply(m, b, SymmetrizeConstruction{us, w});
          for (int x = 0; x < 3; ++x)
            if (out.rb_mse(x) > out.original_mse(x) + 1e-9 ||
                std::abs(out.gap(x) - (out.original_mse(x) - out.rb_mse(x))) >
                    1e-8)
              ok = false;
          const Mat xo = rb_symmetrize(b, us, w);
          const Channel ch = random_unitary_channel(us, w);
          for (auto p : products)
            for (const auto& st : m.states) {
              const double res =
                  (emap(p, ch.apply(st), xo) - ch.apply_mat(emap(p, st, b)))
                      .norm();
              if (res >= 1e-8) ok = false;
            }
          break;
        }
        case 2: {  // permutation averaging on iid copies
          const int n = 2, d = 2;
          FreqModel m;
          m.grid = Vec::LinSpaced(3, 0.0, 1.0);
          m.values = Vec::Random(3);
          for (int x = 0; x < 3; ++x) {
            const DensityOperator one = oracles::random_density(rng, d);
            m.states.emplace_back(tensor(one.matrix(), one.matrix()));
          }
          const Mat b = oracles::random_hermitian(rng, d * d);
          const RbOutcome out =
              rb_apply(m, b, PermutationConstruction{n, d});
          for (int x = 0; x < 3; ++x)
            if (out.rb_mse(x) > out.original_mse(x) + 1e-9 ||
                std::abs(out.gap(x) - (out.original_mse(x) - out.rb_mse(x))) >
                    1e-8)
              ok = false;
          const Mat xo = rb_permutation_haar(b, n, d);
          const Mat swap = permutation_unitary({1, 0}, d);
          const Channel ch = random_unitary_channel(
              {Mat::Identity(d * d, d * d), swap}, Vec::Constant(2, 0.5));
          for (auto p : products)
            for (const auto& st : m.states) {
              const double res =
                  (emap(p, ch.apply(st), xo) - ch.apply_mat(emap(p, st, b)))
                      .norm();
              if (res >= 1e-8) ok = false;
            }
          break;
        }
        case 3: {  // block dephasing
          const int d = 4;
          Mat p0 = Mat::Zero(d, d), p1 = Mat::Zero(d, d);
          p0(0, 0) = p0(1, 1) = 1.0;
          p1(2, 2) = p1(3, 3) = 1.0;
          const std::vector<Mat> projs{p0, p1};
          FreqModel m;
          m.grid = Vec::LinSpaced(3, 0.0, 1.0);
          m.values = Vec::Random(3);
          for (int x = 0; x < 3; ++x) {
            Mat blk = Mat::Zero(d, d);
            std::uniform_real_distribution<double> uw(0.2, 0.8);
            const double w = uw(rng);
            blk.topLeftCorner(2, 2) =
                w * oracles::random_density(rng, 2).matrix();
            blk.bottomRightCorner(2, 2) =
                (1.0 - w) * oracles::random_density(rng, 2).matrix();
            m.states.emplace_back(blk);
          }
          const Mat b = oracles::random_hermitian(rng, d);
          const RbOutcome out =
              rb_apply(m, b, DirectSumConstruction{projs});
          for (int x = 0; x < 3; ++x)
            if (out.rb_mse(x) > out.original_mse(x) + 1e-9 ||
                std::abs(out.gap(x) - (out.original_mse(x) - out.rb_mse(x))) >
                    1e-8)
              ok = false;
          const Mat xo = rb_direct_sum(b, projs);
          const Channel ch = block_dephasing_channel(projs);
          for (auto p : products)
            for (const auto& st : m.states) {
              const double res =
                  (emap(p, ch.apply(st), xo) - ch.apply_mat(emap(p, st, b)))
                      .norm();
              if (res >= 1e-8) ok = false;
            }
          break;
        }
      }
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    if (!ok && detail.empty())
      detail = "construction " + std::to_string(kind) + " trial " +
               std::to_string(trial);
  }
  report(4, "estimator improvement: 4 constructions x 100 random models", ok,
         detail);
}

// 5. Linear-Gaussian solver vs joint-covariance conditioning, 100 instances,
//    plus the identity hand example.
void criterion_gaussian() {
  using gaussian::MatrixXd;
  using gaussian::VectorXd;
  oracles::Rng rng(2028);
  std::normal_distribution<double> g;
  bool ok = true;
  std::string detail;
  for (int trial = 0; trial < 100 && ok; ++trial) {
    const int s = 1 + int(rng() % 4), t = 1 + int(rng() % 4);
    auto rnd = [&](int r, int c) {
      MatrixXd m(r, c);
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = g(rng);
      return m;
    };
    const MatrixXd sa = rnd(2 * s, 2 * s), ra = rnd(2 * t, 2 * t);
    gaussian::GaussianState st{s, rnd(2 * s, 1).col(0),
                               MatrixXd(sa * sa.transpose())};
    gaussian::GaussianChannel ch{rnd(2 * t, 2 * s), rnd(2 * t, 1).col(0),
                                 MatrixXd(ra * ra.transpose())};
    const VectorXd u = rnd(2 * s, 1).col(0);
    const auto res = gaussian::gauss_gce(st, ch, u);
    const auto ref = gaussian::classical_lg_oracle(st.mean, st.cov, ch.F, ch.l,
                                                   ch.R, u);
    if ((res.out_coeffs - ref.coeffs).cwiseAbs().maxCoeff() >= 1e-10 ||
        std::abs(res.offset - ref.offset) >= 1e-10 ||
        std::abs(res.divergence - ref.mse) >= 1e-10) {
      ok = false;
      detail = "trial " + std::to_string(trial);
    }
  }
  const MatrixXd id = MatrixXd::Identity(2, 2);
  gaussian::GaussianState st{1, VectorXd::Zero(2), id};
  gaussian::GaussianChannel ch{id, VectorXd::Zero(2), id};
  const auto hand =
      gaussian::gauss_gce(st, ch, (VectorXd(2) << 1.0, 0.0).finished());
  if ((hand.gain - 0.5 * id).cwiseAbs().maxCoeff() >= 1e-12 ||
      std::abs(hand.divergence - 0.5) >= 1e-12) {
    ok = false;
    detail = "identity hand example";
  }
  report(5, "linear-Gaussian solver agrees with conditioning oracle (100x)",
         ok, detail);
}

// 6. Classical reductions: diagonal models reduce to posterior means; the
//    Bernoulli sufficient-statistic pair halves the MSE exactly.
void criterion_classical() {
  oracles::Rng rng(2029);
  bool ok = true;
  std::string detail;

  for (int trial = 0; trial < 20 && ok; ++trial) {
    const int d = 3;
    BayesModel m;
    m.prior = oracles::random_simplex(rng, d);
    std::uniform_real_distribution<double> uv(-1.0, 1.0);
    m.values = Vec::NullaryExpr(d, [&](int) { return uv(rng); });
    for (int x = 0; x < d; ++x) {
      Vec p = oracles::random_simplex(rng, d);
      Mat rho = Mat::Zero(d, d);
      for (int i = 0; i < d; ++i) rho(i, i) = p(i);
      m.states.emplace_back(rho);
      m.labels.push_back(std::to_string(x));
    }
    std::vector<Mat> povm;
    for (int y = 0; y < d; ++y) {
      Mat e = Mat::Zero(d, d);
      e(y, y) = 1.0;
      povm.push_back(e);
    }
    const WeakValueResult wv = weak_value_estimator(m, povm);
    const Vec ref = oracles::posterior_means(m, povm);
    if ((wv.outcome_values - ref).cwiseAbs().maxCoeff() >= 1e-12) {
      ok = false;
      detail = "posterior means, trial " + std::to_string(trial);
    }
  }

  // Bernoulli pair with the sum statistic.
  RMat pzy = RMat::Zero(3, 4);
  pzy(0, 0) = pzy(1, 1) = pzy(1, 2) = pzy(2, 3) = 1.0;
  const Vec thetas = (Vec(2) << 0.3, 0.8).finished();
  RMat pyx(4, 2);
  for (int x = 0; x < 2; ++x) {
    const double t = thetas(x);
    pyx(0, x) = (1 - t) * (1 - t);
    pyx(1, x) = (1 - t) * t;
    pyx(2, x) = t * (1 - t);
    pyx(3, x) = t * t;
  }
  const Vec b = (Vec(4) << 0.0, 0.0, 1.0, 1.0).finished();
  const ClassicalRbResult res = classical_rb(
      pyx, pzy, b, thetas, (Vec(2) << 0.0, 1.0).finished());
  for (int x = 0; x < 2; ++x) {
    const double var = thetas(x) * (1.0 - thetas(x));
    if (std::abs(res.mse_original(x) - var) >= 1e-12 ||
        std::abs(res.mse_rb(x) - var / 2.0) >= 1e-12) {
      ok = false;
      detail = "Bernoulli pair";
    }
  }
  report(6, "classical reductions (posterior means, Bernoulli pair halving)",
         ok, detail);
}

// 7. Backward induction equals exhaustive enumeration on 20 random 3x3
//    problems, with stage costs summing to the composed divergence.
void criterion_dp() {
  oracles::Rng rng(2030);
  bool ok = true;
  std::string detail;
  for (int trial = 0; trial < 20 && ok; ++trial) {
    DpProblem p{oracles::random_density(rng, 2),
                Operator(oracles::random_hermitian(rng, 2), true),
                {}};
    for (int n = 0; n < 3; ++n) {
      std::vector<Channel> options;
      for (int k = 0; k < 3; ++k)
        options.push_back(oracles::random_channel(rng, 2, 2, 2));
      p.stages.push_back(std::move(options));
    }
    const DpSolution dp = solve_dp(p);
    const DpSolution brute = exhaustive_search(p);
    if (dp.policy != brute.policy || dp.total_cost != brute.total_cost) {
      ok = false;
      detail = "policy mismatch, trial " + std::to_string(trial);
      break;
    }
    Channel composed = p.stages[0][dp.policy[0]];
    for (int n = 1; n < 3; ++n)
      composed = compose(p.stages[n][dp.policy[n]], composed);
    const double whole =
        gce(ProductKind::Jordan, p.sigma0, composed, p.a0).min_divergence;
    if (std::abs(dp.total_cost - whole) >= 1e-8) {
      ok = false;
      detail = "additivity, trial " + std::to_string(trial);
    }
  }
  report(7, "planner matches exhaustive search on 20 random 3x3 problems", ok,
         detail);
}

// 8. Few-copy embeddings equal the full symmetrization (n <= 5) and the
//    single-copy case divides the variance by n on product states.
void criterion_u_statistics() {
  oracles::Rng rng(2031);
  bool ok = true;
  std::string detail;
  const int d = 2;
  for (int n = 2; n <= 5 && ok; ++n) {
    for (int m = 1; m < n && ok; ++m) {
      const Mat c = oracles::random_hermitian(rng, 1 << m);
      const Mat cp = oracles::random_hermitian(rng, 1 << (n - m));
      const Mat u = u_statistic(c, cp, n, m, d);
      const Mat full = rb_permutation_haar(tensor(c, cp), n, d);
      if ((u - full).norm() >= 1e-12 * std::max(1.0, full.norm())) {
        ok = false;
        detail = "n=" + std::to_string(n) + " m=" + std::to_string(m);
      }
    }
  }
  for (int n = 2; n <= 5 && ok; ++n) {
    const Mat c = oracles::random_hermitian(rng, d);
    const DensityOperator one = oracles::random_density(rng, d);
    const double mean = (one.matrix() * c).trace().real();
    const double var = (one.matrix() * c * c).trace().real() - mean * mean;
    const Mat id = Mat::Identity(1 << (n - 1), 1 << (n - 1));
    const Mat u = u_statistic(c, id, n, 1, d);
    Mat joint = one.matrix();
    for (int k = 1; k < n; ++k) joint = tensor(joint, one.matrix());
    const Mat dev = u - mean * Mat::Identity(u.rows(), u.cols());
    const double uvar = (joint * dev * dev).trace().real();
    if (std::abs(uvar - var / n) >= 1e-9) {
      ok = false;
      detail = "variance at n=" + std::to_string(n);
    }
  }
  report(8, "few-copy embeddings (equality to full averaging, variance / n)",
         ok, detail);
}

}  // namespace

int main() {
  criterion_thermal();
  criterion_worked_model();
  criterion_identities();
  criterion_rao_blackwell();
  criterion_gaussian();
  criterion_classical();
  criterion_dp();
  criterion_u_statistics();
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures ? 1 : 0;
}
