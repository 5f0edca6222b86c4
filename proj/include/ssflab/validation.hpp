#pragma once

// The acceptance suite: one check per criterion, each writing a result table.

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "ssflab/cli.hpp"

namespace ssflab::validation {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string summary;
  double seconds = 0.0;
};

struct SuiteOptions {
  /// Supplies the d = 1 scenario (U, V, x0, D, h), the seed and the oracle
  /// cap; lengths, energies and sample sizes are fixed per criterion.
  cli::ScenarioConfig config;
  int threads = 1;
  std::filesystem::path out_dir;
  /// Criterion ids to run; empty runs 1-10.
  std::vector<int> only;
  /// Also rerun everything with a different thread count and compare the
  /// result tables byte for byte (criterion 11).
  bool determinism = true;
};

struct SuiteReport {
  std::vector<CriterionResult> results;
  bool passed() const;
};

using ResultCallback = std::function<void(const CriterionResult&)>;

SuiteReport run_suite(const SuiteOptions& options, const ResultCallback& on_result = {});

/// "PASS  7 mc-trace-agreement: ... (12.3 s)".
std::string format_result(const CriterionResult& result);

std::string criterion_name(int id);

}  // namespace ssflab::validation
