#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace wickmix::cli {

struct SelftestOptions {
  std::uint64_t seed = 20240601;
  unsigned threads = 1;
  /// Debug hook: the random covariance matrices handed to the suites get an
  /// asymmetric off-diagonal entry, which must make the run fail.
  bool corrupt_covariance_symmetry = false;
};

struct SuiteResult {
  std::string name;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string first_failure;
  std::vector<std::string> details;  // extra deterministic lines to print
};

/// Runs every property suite. Output depends only on the seed; it contains
/// no timings and is byte-identical for any thread count.
std::vector<SuiteResult> run_selftest_suites(const SelftestOptions& options);

/// Prints the pass/fail table; returns true iff every suite passed.
bool run_selftest(std::ostream& out, const SelftestOptions& options);

}  // namespace wickmix::cli
