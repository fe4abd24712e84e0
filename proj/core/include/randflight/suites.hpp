#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "randflight/verify.hpp"

namespace randflight {

// Knobs shared by the named verification suites. Fields not used by a given
// suite are ignored.
struct SuiteConfig {
  int d = 3;
  int n = 1;
  int j = 1;
  int h = 1;
  int i = 0;
  double c = 1.0;
  double t = 1.0;
  double lambda = 1.0;
  std::size_t count = 100000;
  std::uint64_t seed = 0;
  double level = 0.01;
  int threads = 0;
};

// Suite names accepted by run_suite.
std::vector<std::string> suite_names();

// Runs a named simulation-versus-formula verification suite and returns one
// report per check. Throws std::invalid_argument for an unknown name.
std::vector<TestReport> run_suite(const std::string& name,
                                  const SuiteConfig& sc);

}  // namespace randflight
