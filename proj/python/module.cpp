#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qgce/bayes.hpp"
#include "qgce/dp.hpp"
#include "qgce/gaussian.hpp"
#include "qgce/gce.hpp"
#include "qgce/rao_blackwell.hpp"
#include "qgce/thermal.hpp"

namespace py = pybind11;
using namespace qgce;

namespace {

Channel channel_from_kraus(const std::vector<Mat>& kraus) {
  return Channel::from_kraus(kraus);
}

std::vector<DensityOperator> to_states(const std::vector<Mat>& mats) {
  std::vector<DensityOperator> out;
  out.reserve(mats.size());
  for (const auto& m : mats) out.emplace_back(m);
  return out;
}

}  // namespace

PYBIND11_MODULE(_qgce, mod) {
  mod.doc() = "Conditional-expectation calculus for quantum estimation";

  py::enum_<ProductKind>(mod, "ProductKind")
      .value("JORDAN", ProductKind::Jordan)
      .value("LEFT", ProductKind::Left)
      .value("ROOT", ProductKind::Root);

  mod.def(
      "gce",
      [](ProductKind product, const Mat& sigma,
         const std::vector<Mat>& kraus, const Mat& observable) {
        const GceResult res =
            gce(product, DensityOperator(sigma), channel_from_kraus(kraus),
                Operator(observable, is_hermitian(observable, 1e-10)));
        return py::make_tuple(res.estimator.entries, res.min_divergence,
                              res.residual);
      },
      py::arg("product"), py::arg("sigma"), py::arg("kraus"),
      py::arg("observable"),
      "Conditional expectation of an observable through a Kraus channel; "
      "returns (estimator, min_divergence, residual).");

  mod.def(
      "divergence",
      [](ProductKind product, const Mat& sigma,
         const std::vector<Mat>& kraus, const Mat& a, const Mat& b) {
        return divergence(product, DensityOperator(sigma),
                          channel_from_kraus(kraus), a, b);
      },
      py::arg("product"), py::arg("sigma"), py::arg("kraus"), py::arg("a"),
      py::arg("b"));

  mod.def(
      "personick",
      [](const Vec& prior, const std::vector<Mat>& states, const Vec& values) {
        BayesModel model;
        model.prior = prior;
        model.values = values;
        model.states = to_states(states);
        for (int x = 0; x < model.points(); ++x)
          model.labels.push_back(std::to_string(x));
        const EstimatorReport rep = personick(model);
        return py::make_tuple(rep.estimator.entries, rep.bayes_mse);
      },
      py::arg("prior"), py::arg("states"), py::arg("values"),
      "Optimal operator-valued Bayesian estimator; returns "
      "(estimator, bayes_mse).");

  mod.def(
      "weak_values",
      [](const Vec& prior, const std::vector<Mat>& states, const Vec& values,
         const std::vector<Mat>& povm) {
        BayesModel model;
        model.prior = prior;
        model.values = values;
        model.states = to_states(states);
        for (int x = 0; x < model.points(); ++x)
          model.labels.push_back(std::to_string(x));
        const WeakValueResult wv = weak_value_estimator(model, povm);
        return py::make_tuple(wv.outcome_values, wv.report.bayes_mse);
      },
      py::arg("prior"), py::arg("states"), py::arg("values"), py::arg("povm"));

  mod.def(
      "solve_dp",
      [](const Mat& sigma0, const Mat& a0,
         const std::vector<std::vector<std::vector<Mat>>>& stages) {
        DpProblem p{DensityOperator(sigma0),
                    Operator(a0, is_hermitian(a0, 1e-10)),
                    {}};
        for (const auto& stage : stages) {
          std::vector<Channel> options;
          for (const auto& kraus : stage)
            options.push_back(channel_from_kraus(kraus));
          p.stages.push_back(std::move(options));
        }
        const DpSolution sol = solve_dp(p);
        return py::make_tuple(sol.policy, sol.total_cost, sol.stage_costs);
      },
      py::arg("sigma0"), py::arg("a0"), py::arg("stages"),
      "Channel-sequence selection; stages is a list of lists of Kraus sets. "
      "Returns (policy, total_cost, stage_costs).");

  mod.def("u_statistic", &u_statistic, py::arg("c"), py::arg("c_prime"),
          py::arg("n"), py::arg("m"), py::arg("subsystem_dim"));

  mod.def("permutation_average", &rb_permutation_haar, py::arg("b"),
          py::arg("n"), py::arg("subsystem_dim"));

  mod.def(
      "gauss_gce",
      [](const Vec& mean, const RMat& cov, const RMat& F, const Vec& l,
         const RMat& R, const Vec& u) {
        gaussian::GaussianState st{static_cast<int>(mean.size()) / 2, mean,
                                   cov};
        gaussian::GaussianChannel ch{F, l, R};
        const auto res = gaussian::gauss_gce(st, ch, u);
        return py::make_tuple(res.gain, res.out_coeffs, res.offset,
                              res.divergence);
      },
      py::arg("mean"), py::arg("cov"), py::arg("F"), py::arg("l"),
      py::arg("R"), py::arg("u"),
      "Linear-Gaussian conditional expectation; returns "
      "(gain, coeffs, offset, divergence).");

  mod.def(
      "thermal_curve",
      [](int modes, const std::vector<double>& xs, int cutoff) {
        const auto rows = thermal_mse_curve(modes, xs, cutoff);
        py::list out;
        for (const auto& r : rows) {
          py::dict d;
          d["x"] = r.x;
          d["mse_homodyne_numeric"] = r.mse_homodyne_numeric;
          d["mse_homodyne_analytic"] = r.mse_homodyne_analytic;
          d["mse_counting_numeric"] = r.mse_counting_numeric;
          d["mse_counting_analytic"] = r.mse_counting_analytic;
          d["gap"] = r.gap;
          d["divergence"] = r.divergence;
          out.append(d);
        }
        return out;
      },
      py::arg("modes"), py::arg("xs"), py::arg("cutoff") = 0);
}
