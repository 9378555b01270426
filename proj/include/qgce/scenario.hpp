#pragma once

#include <cstdint>
#include <string>

#include "qgce/serialize.hpp"

namespace qgce {

// One scenario per process.  version must be 1; command selects the payload
// schema.  Validation problems throw std::invalid_argument (exit 2),
// tolerance failures std::runtime_error (exit 3).
struct Scenario {
  int version = 1;
  std::string command;
  Json payload;
  std::uint64_t seed = 0;

  static Scenario from_json(const Json& j);
  static Scenario from_file(const std::string& path);
};

// Runs the scenario and writes artifacts under out_dir.  Returns the list of
// files written.
std::vector<std::string> run_scenario(const Scenario& sc,
                                      const std::string& out_dir);

// Deterministic invariant suite used by the selftest command; throws on the
// first violated invariant.
void run_selftest();

}  // namespace qgce
