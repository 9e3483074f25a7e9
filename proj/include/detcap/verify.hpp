#pragma once
// Named invariant checks over the whole toolkit, runnable from the CLI.
// The fast subset covers the exact identities and small enumerations; the
// full suite adds the statistical checks with large replicate counts.

#include <cstdint>
#include <string>
#include <vector>

namespace detcap {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::vector<CheckResult> run_invariant_suite(bool fast,
                                             std::uint64_t seed = 20240801);

}  // namespace detcap
