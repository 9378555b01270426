#include "qgce/scenario.hpp"

#include <cmath>
#include <fstream>

#include "qgce/bayes.hpp"
#include "qgce/dp.hpp"
#include "qgce/gaussian.hpp"
#include "qgce/gce.hpp"
#include "qgce/rao_blackwell.hpp"
#include "qgce/thermal.hpp"

namespace qgce {

namespace {

const Json& field(const Json& j, const std::string& key,
                  const std::string& who) {
  detail::require(j.is_object() && j.contains(key),
                  who + ": missing field '" + key + "'");
  return j[key];
}

ProductKind product_of(const Json& payload) {
  if (!payload.contains("product")) return ProductKind::Jordan;
  detail::require(payload["product"].is_string(),
                  "scenario: 'product' must be a string");
  return product_from_string(payload["product"].get<std::string>());
}

Json gce_result_json(const GceResult& r) {
  return Json{{"estimator", mat_to_json(r.estimator.entries)},
              {"residual", r.residual},
              {"min_divergence", r.min_divergence},
              {"product", to_string(r.product)}};
}

std::vector<std::string> run_gce(const Json& p, const std::string& out_dir) {
  const DensityOperator sigma(mat_from_json(field(p, "sigma", "gce"), "gce/sigma"));
  const Mat a = mat_from_json(field(p, "observable", "gce"), "gce/observable");
  const Operator obs(a, is_hermitian(a, 1e-10));
  const ProductKind product = product_of(p);

  Json out;
  if (p.contains("channels")) {
    detail::require(p["channels"].is_array() && !p["channels"].empty(),
                    "gce: 'channels' must be a non-empty array");
    std::vector<Channel> chain;
    for (const auto& cj : p["channels"]) chain.push_back(channel_from_json(cj));
    Json steps = Json::array();
    for (const auto& r : chain_gce(product, sigma, chain, obs))
      steps.push_back(gce_result_json(r));
    out = Json{{"chain", steps}};
  } else {
    const Channel ch = channel_from_json(field(p, "channel", "gce"));
    out = gce_result_json(gce(product, sigma, ch, obs));
  }
  const std::string path = out_dir + "/gce.json";
  emit_json(out, path);
  return {path};
}

BayesModel bayes_model_from_json(const Json& p) {
  BayesModel model;
  model.prior = vec_from_json(field(p, "prior", "bayes"), "bayes/prior");
  model.values = vec_from_json(field(p, "values", "bayes"), "bayes/values");
  const Json& states = field(p, "states", "bayes");
  detail::require(states.is_array() && !states.empty(),
                  "bayes: 'states' must be a non-empty array");
  for (const auto& s : states)
    model.states.emplace_back(mat_from_json(s, "bayes/states"));
  if (p.contains("labels")) {
    for (const auto& l : p["labels"]) {
      detail::require(l.is_string(), "bayes: labels must be strings");
      model.labels.push_back(l.get<std::string>());
    }
  } else {
    for (int x = 0; x < model.points(); ++x)
      model.labels.push_back(std::to_string(x));
  }
  model.validate();
  return model;
}

std::vector<std::string> run_bayes(const Json& p, const std::string& out_dir) {
  const BayesModel model = bayes_model_from_json(p);
  EstimatorReport report = p.contains("channel")
                               ? personick_after(model, channel_from_json(p["channel"]))
                               : personick(model);
  Json out{{"estimator", mat_to_json(report.estimator.entries)},
           {"bayes_mse", report.bayes_mse}};
  if (report.regret) out["regret"] = *report.regret;

  std::vector<std::string> written;
  if (p.contains("povm")) {
    std::vector<Mat> povm;
    for (const auto& m : p["povm"]) povm.push_back(mat_from_json(m, "bayes/povm"));
    const WeakValueResult wv = weak_value_estimator(model, povm);
    out["weak_value_mse"] = wv.report.bayes_mse;
    std::vector<std::vector<double>> rows;
    for (int y = 0; y < wv.outcome_values.size(); ++y)
      rows.push_back({double(y), wv.outcome_values(y)});
    const std::string csv = out_dir + "/weak_values.csv";
    emit_csv({"outcome", "estimate"}, rows, csv);
    written.push_back(csv);
  }
  const std::string path = out_dir + "/bayes.json";
  emit_json(out, path);
  written.push_back(path);
  return written;
}

std::vector<std::string> run_dp(const Json& p, const std::string& out_dir) {
  DpProblem prob{
      DensityOperator(mat_from_json(field(p, "sigma0", "dp"), "dp/sigma0")),
      Operator(mat_from_json(field(p, "a0", "dp"), "dp/a0"), true), {}};
  prob.a0.hermitian = is_hermitian(prob.a0.entries, 1e-10);
  const Json& stages = field(p, "stages", "dp");
  detail::require(stages.is_array() && !stages.empty(),
                  "dp: 'stages' must be a non-empty array");
  for (const auto& stage : stages) {
    detail::require(stage.is_array() && !stage.empty(),
                    "dp: every stage needs at least one channel");
    std::vector<Channel> options;
    for (const auto& cj : stage) options.push_back(channel_from_json(cj));
    prob.stages.push_back(std::move(options));
  }
  const DpSolution sol = solve_dp(prob);

  Json table = Json::array();
  for (const auto& entry : sol.value_table)
    table.push_back(Json{{"prefix", entry.prefix},
                         {"cost_to_go", entry.cost_to_go},
                         {"best_option", entry.best_option}});
  Json out{{"policy", sol.policy},
           {"stage_costs", vec_to_json(sol.stage_costs)},
           {"total_cost", sol.total_cost},
           {"value_table", table}};
  const std::string path = out_dir + "/dp.json";
  emit_json(out, path);
  return {path};
}

RbConstruction rb_construction_from_json(const Json& j) {
  detail::require(j.is_object() && j.contains("kind") && j["kind"].is_string(),
                  "rb: construction needs string 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "ancilla") {
    return AncillaConstruction{
        field(j, "dim1", "rb/ancilla").get<int>(),
        DensityOperator(mat_from_json(field(j, "tau", "rb/ancilla"),
                                      "rb/ancilla tau"))};
  }
  if (kind == "symmetrize") {
    SymmetrizeConstruction c;
    for (const auto& u : field(j, "unitaries", "rb/symmetrize"))
      c.unitaries.push_back(mat_from_json(u, "rb/symmetrize"));
    c.weights = vec_from_json(field(j, "weights", "rb/symmetrize"),
                              "rb/symmetrize weights");
    return c;
  }
  if (kind == "permutation") {
    return PermutationConstruction{
        field(j, "n", "rb/permutation").get<int>(),
        field(j, "subsystem_dim", "rb/permutation").get<int>()};
  }
  if (kind == "direct_sum") {
    DirectSumConstruction c;
    for (const auto& pr : field(j, "projectors", "rb/direct_sum"))
      c.projectors.push_back(mat_from_json(pr, "rb/direct_sum"));
    return c;
  }
  if (kind == "channel") {
    return ChannelConstruction{
        channel_from_json(field(j, "channel", "rb/channel"))};
  }
  detail::require(false, "rb: unknown construction kind '" + kind + "'");
  return PermutationConstruction{};
}

std::vector<std::string> run_rb(const Json& p, const std::string& out_dir) {
  const Json& mj = field(p, "model", "rb");
  FreqModel model;
  model.grid = vec_from_json(field(mj, "grid", "rb/model"), "rb grid");
  model.values = vec_from_json(field(mj, "values", "rb/model"), "rb values");
  for (const auto& s : field(mj, "states", "rb/model"))
    model.states.emplace_back(mat_from_json(s, "rb/model states"));
  model.validate();
  const Mat b = mat_from_json(field(p, "estimator", "rb"), "rb/estimator");
  const RbOutcome outcome =
      rb_apply(model, b, rb_construction_from_json(field(p, "construction", "rb")));

  std::vector<std::vector<double>> rows;
  for (int x = 0; x < model.points(); ++x)
    rows.push_back({model.grid(x), outcome.original_mse(x), outcome.rb_mse(x),
                    outcome.gap(x)});
  const std::string path = out_dir + "/rb.csv";
  emit_csv({"x", "mse_original", "mse_rb", "gap"}, rows, path);
  return {path};
}

std::vector<std::string> run_gauss(const Json& p, const std::string& out_dir) {
  using gaussian::MatrixXd;
  using gaussian::VectorXd;
  const Vec m = vec_from_json(field(p, "m", "gauss"), "gauss/m");
  const RMat Sigma = rmat_from_json(field(p, "Sigma", "gauss"), "gauss/Sigma");
  const RMat F = rmat_from_json(field(p, "F", "gauss"), "gauss/F");
  const Vec l = vec_from_json(field(p, "l", "gauss"), "gauss/l");
  const RMat R = rmat_from_json(field(p, "R", "gauss"), "gauss/R");
  const Vec u = vec_from_json(field(p, "u", "gauss"), "gauss/u");

  gaussian::GaussianState st{static_cast<int>(m.size()) / 2, m, Sigma};
  detail::require(m.size() % 2 == 0, "gauss: mean length must be even");
  gaussian::GaussianChannel ch{F, l, R};
  const auto res = gaussian::gauss_gce(st, ch, u);
  const auto oracle = gaussian::classical_lg_oracle(m, Sigma, F, l, R, u);

  Json out{{"K", rmat_to_json(res.gain)},
           {"offset", res.offset},
           {"v", vec_to_json(res.out_coeffs)},
           {"divergence", res.divergence},
           {"oracle_divergence", oracle.mse},
           {"pseudoinverse_used", res.pseudoinverse_used}};
  const std::string path = out_dir + "/gauss.json";
  emit_json(out, path);
  return {path};
}

std::vector<std::string> run_thermal(const Json& p, const std::string& out_dir) {
  const int modes = field(p, "J", "thermal").get<int>();
  const double xmin = field(p, "xmin", "thermal").get<double>();
  const double xmax = field(p, "xmax", "thermal").get<double>();
  const int points = field(p, "points", "thermal").get<int>();
  detail::require(points > 0 && xmin > 0.0 && xmax >= xmin,
                  "thermal: need points > 0 and 0 < xmin <= xmax");
  int cutoff = 0;
  if (p.contains("cutoff") && !(p["cutoff"].is_string() &&
                                p["cutoff"].get<std::string>() == "auto")) {
    detail::require(p["cutoff"].is_number_integer(),
                    "thermal: cutoff must be \"auto\" or an integer");
    cutoff = p["cutoff"].get<int>();
    detail::require(cutoff >= 1, "thermal: cutoff must be >= 1");
  }

  std::vector<double> xs;
  for (int i = 0; i < points; ++i)
    xs.push_back(points == 1 ? xmin
                             : xmin + (xmax - xmin) * i / double(points - 1));
  const auto curve = thermal_mse_curve(modes, xs, cutoff);

  std::vector<std::vector<double>> rows;
  for (const auto& r : curve)
    rows.push_back({r.x, r.mse_homodyne_numeric, r.mse_homodyne_analytic,
                    r.mse_counting_numeric, r.mse_counting_analytic, r.gap,
                    r.divergence});
  const std::string path = out_dir + "/thermal.csv";
  emit_csv({"x", "mse_homodyne_numeric", "mse_homodyne_analytic",
            "mse_counting_numeric", "mse_counting_analytic", "gap",
            "divergence"},
           rows, path);
  return {path};
}

void check(bool cond, const std::string& what) {
  if (!cond) throw std::runtime_error("selftest: " + what);
}

}  // namespace

void run_selftest() {
  // Two-hypothesis qubit model with a uniform prior.
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
  check((rep.estimator.entries - expected).cwiseAbs().maxCoeff() < 1e-10,
        "Bayesian estimator for the qubit model is off");
  check(std::abs(rep.bayes_mse - 0.125) < 1e-10,
        "Bayesian error for the qubit model is off");

  std::vector<Mat> povm{rho0, Mat::Identity(2, 2) - rho0};
  const WeakValueResult wv = weak_value_estimator(model, povm);
  check(std::abs(wv.outcome_values(0) - 1.0 / 3.0) < 1e-10 &&
            std::abs(wv.outcome_values(1) - 1.0) < 1e-10,
        "per-outcome estimates for the qubit model are off");

  // Estimator mean matches the prior mean through the model channel.
  const DensityOperator mix = model.mixture();
  check(std::abs((mix.matrix() * rep.estimator.entries).trace().real() -
                 model.prior_mean()) < 1e-10,
        "estimator mean drifted from the prior mean");

  // Scalar Gaussian example: identity everything, estimate the first
  // quadrature.
  const RMat id2 = RMat::Identity(2, 2);
  gaussian::GaussianState st{1, Vec::Zero(2), id2};
  gaussian::GaussianChannel ch{id2, Vec::Zero(2), id2};
  const auto g = gaussian::gauss_gce(st, ch, (Vec(2) << 1.0, 0.0).finished());
  check((g.gain - 0.5 * id2).cwiseAbs().maxCoeff() < 1e-12,
        "Gaussian gain for the identity example is off");
  check(std::abs(g.divergence - 0.5) < 1e-12,
        "Gaussian divergence for the identity example is off");

  // Single-mode thermal point x = 1.
  const auto curve = thermal_mse_curve(1, {1.0});
  check(std::abs(curve[0].mse_homodyne_numeric - 4.5) < 4.5e-4,
        "thermal homodyne MSE at x=1 is off");
  check(std::abs(curve[0].mse_counting_numeric - 2.0) < 2e-4,
        "thermal photon-counting MSE at x=1 is off");

  // Two-step chain decomposition on the qubit model.
  const Channel f = cq_channel(model.states);
  const Channel g2 = depolarizing_channel(2);
  const PythagorasCheck py = pythagoras_check(
      ProductKind::Jordan, model.prior_state(), f, g2,
      model.value_operator());
  check(std::abs(py.gap) < 1e-8, "two-step error decomposition gap too large");
}

Scenario Scenario::from_json(const Json& j) {
  detail::require(j.is_object(), "scenario: document must be a JSON object");
  Scenario sc;
  detail::require(j.contains("version") && j["version"].is_number_integer() &&
                      j["version"].get<int>() == 1,
                  "scenario: 'version' must be the integer 1");
  detail::require(j.contains("command") && j["command"].is_string(),
                  "scenario: missing string 'command'");
  sc.command = j["command"].get<std::string>();
  sc.payload = j.value("payload", Json::object());
  if (j.contains("seed")) {
    detail::require(j["seed"].is_number_integer(),
                    "scenario: 'seed' must be an integer");
    sc.seed = j["seed"].get<std::uint64_t>();
  }
  return sc;
}

Scenario Scenario::from_file(const std::string& path) {
  std::ifstream f(path);
  detail::require(bool(f), "scenario: cannot read " + path);
  Json j;
  try {
    j = Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(std::string("scenario: JSON parse error: ") +
                                e.what());
  }
  return from_json(j);
}

std::vector<std::string> run_scenario(const Scenario& sc,
                                      const std::string& out_dir) {
  if (sc.command == "gce") return run_gce(sc.payload, out_dir);
  if (sc.command == "bayes") return run_bayes(sc.payload, out_dir);
  if (sc.command == "dp") return run_dp(sc.payload, out_dir);
  if (sc.command == "rb") return run_rb(sc.payload, out_dir);
  if (sc.command == "gauss") return run_gauss(sc.payload, out_dir);
  if (sc.command == "thermal") return run_thermal(sc.payload, out_dir);
  if (sc.command == "selftest") {
    run_selftest();
    const std::string path = out_dir + "/selftest.json";
    emit_json(Json{{"status", "ok"}}, path);
    return {path};
  }
  detail::require(false, "scenario: unknown command '" + sc.command + "'");
  return {};
}

}  // namespace qgce
