#pragma once

#include <string>
#include <vector>

#include "smp/report.hpp"
#include "smp/zoo.hpp"

namespace smp {

/// Analytic verification suites, each producing check records at the pinned
/// sweep sizes. Monte Carlo tests live in paths.hpp; the `simulate` command
/// wraps those.
const std::vector<std::string>& suite_names();

void run_suite(const std::string& suite, const Example& ex, const RunConfig& config,
               std::vector<CheckRecord>& records, int& skipped);

/// Runs the selected suites over the selected examples. Deterministic given
/// the config.
SuiteReport cmd_verify(const RunConfig& config);

}  // namespace smp
