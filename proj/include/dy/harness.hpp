#pragma once

// Suite registry, configuration, runs and report rendering for the CLI.

#include <cstdint>
#include <string>
#include <vector>

#include "dy/report.hpp"

namespace dy {

struct SuiteConfig {
  int m = 1;
  int n = 1;
  int N = 2;    // series order
  int H = 2;    // h-order
  int cap = 0;  // level cap L; 0 picks default_cap(N, H)
  std::vector<std::string> suites;  // "all" expands to the registry
  std::uint64_t seed = 1;
  int jobs = 1;
  std::string cache_dir;  // empty: no rule cache
  std::string format = "text";
  bool timings = false;  // wall times make output run-dependent, so opt-in
};

// Fixed run order.  delta-sl exists only for m = n.
const std::vector<std::string>& suite_registry();

// 2(N + H) + 10: the measured need of every suite, with the confluence probe
// (words of length 6 at levels <= 3) as the largest.
int default_cap(int N, int H);

// Fills the cap, expands "all", orders suites as in the registry and drops
// duplicates.  Throws UsageError with a message on anything invalid.
SuiteConfig validate(SuiteConfig config);

struct SuiteResult {
  std::string name;
  ReportFragment fragment;
  double seconds = 0.0;
};

struct Report {
  SuiteConfig config;  // as validated
  std::vector<SuiteResult> suites;

  std::size_t passed() const;
  std::size_t failed() const;
  bool ok() const { return failed() == 0; }
};

// Validates, then runs the selected suites.  A suite that hits the level cap
// fails with the cap message as its counterexample instead of aborting.
// Rule caches are read and written when config.cache_dir is set.
Report run(const SuiteConfig& config);

// "text" or "json"; deterministic unless timings were requested.
std::string emit(const Report& report, const std::string& format);

}  // namespace dy
