#pragma once

// Self-check suite behind `ckosc verify`: algebra laws, the derivation
// catalogue, geometry and classification invariants, integrator quality and
// family geometry. Results depend only on the seed.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace ckosc::verify {

struct CheckResult {
  std::string group;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Options {
  std::uint64_t seed = 42;
  /// Restrict to one group; empty runs all.
  std::string only;
  /// Fault injection for negative controls. "mul-table" runs the algebra
  /// laws against a multiplication with j3*j2 = -j2*j3.
  std::string expect_fail;
};

const std::vector<std::string>& groups();

/// Throws ConfigError for an unknown group or fault mode.
std::vector<CheckResult> run(const Options& opts);

void print_report(std::ostream& os, const std::vector<CheckResult>& results);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace ckosc::verify
