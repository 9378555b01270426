#include <cstdlib>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "qgce/scenario.hpp"

namespace {

struct CommonOpts {
  std::string scenario_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
};

void add_common(CLI::App* sub, CommonOpts& opts, bool scenario_required) {
  auto* sc = sub->add_option("--scenario", opts.scenario_path,
                             "Scenario JSON file");
  if (scenario_required) sc->required();
  sub->add_option("--out", opts.out_dir, "Output directory");
  sub->add_option("--seed", opts.seed, "Random seed override")
      ->each([&opts](const std::string&) { opts.seed_set = true; });
  sub->add_option("--threads", opts.threads, "Worker thread count");
}

int run(const std::string& command, const CommonOpts& opts,
        const qgce::Json* inline_payload) {
  if (opts.threads > 0) {
    Eigen::setNbThreads(opts.threads);
  } else if (const char* env = std::getenv("GCE_METROLOGY_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) Eigen::setNbThreads(n);
  }

  try {
    qgce::Scenario sc;
    if (!opts.scenario_path.empty()) {
      sc = qgce::Scenario::from_file(opts.scenario_path);
      if (sc.command != command)
        throw std::invalid_argument("scenario: command '" + sc.command +
                                    "' does not match subcommand '" + command +
                                    "'");
    } else {
      sc.command = command;
      if (inline_payload) sc.payload = *inline_payload;
    }
    if (opts.seed_set) sc.seed = opts.seed;
    for (const auto& path : qgce::run_scenario(sc, opts.out_dir))
      std::cout << path << "\n";
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum conditional-expectation metrology toolkit"};
  app.require_subcommand(1);

  struct SubDef {
    const char* name;
    const char* help;
    bool scenario_required;
  };
  const SubDef defs[] = {
      {"gce", "Conditional expectation of an observable through a channel", true},
      {"bayes", "Operator-valued Bayesian estimation", true},
      {"dp", "Channel-sequence selection by backward induction", true},
      {"rb", "Estimator improvement through a sufficient channel", true},
      {"gauss", "Linear-Gaussian conditional expectation", true},
      {"selftest", "Run the built-in invariant suite", false},
  };

  std::vector<std::unique_ptr<CommonOpts>> opt_store;
  for (const auto& def : defs) {
    auto* sub = app.add_subcommand(def.name, def.help);
    opt_store.push_back(std::make_unique<CommonOpts>());
    add_common(sub, *opt_store.back(), def.scenario_required);
    CommonOpts* opts = opt_store.back().get();
    std::string name = def.name;
    sub->callback([name, opts]() { std::exit(run(name, *opts, nullptr)); });
  }

  auto* thermal = app.add_subcommand(
      "thermal", "Mean-photon-number estimation MSE curves");
  auto thermal_opts = std::make_unique<CommonOpts>();
  add_common(thermal, *thermal_opts, false);
  auto modes = std::make_shared<int>(1);
  auto xmin = std::make_shared<double>(0.1);
  auto xmax = std::make_shared<double>(10.0);
  auto points = std::make_shared<int>(25);
  auto cutoff = std::make_shared<std::string>("auto");
  thermal->add_option("--J", *modes, "Number of modes");
  thermal->add_option("--xmin", *xmin, "Smallest mean photon number");
  thermal->add_option("--xmax", *xmax, "Largest mean photon number");
  thermal->add_option("--points", *points, "Grid size");
  thermal->add_option("--cutoff", *cutoff, "Per-mode Fock cutoff: auto or N");
  CommonOpts* topts = thermal_opts.get();
  thermal->callback([=]() {
    qgce::Json payload{{"J", *modes},
                       {"xmin", *xmin},
                       {"xmax", *xmax},
                       {"points", *points}};
    if (*cutoff == "auto") {
      payload["cutoff"] = "auto";
    } else {
      try {
        payload["cutoff"] = std::stoi(*cutoff);
      } catch (...) {
        std::cerr << "validation error: --cutoff must be auto or an integer\n";
        std::exit(2);
      }
    }
    std::exit(run("thermal", *topts, &payload));
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}
