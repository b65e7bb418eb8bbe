#pragma once

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace dmspec::acceptance {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  /// "<id>.<sub-check>" for every failed sub-check, e.g. "3.hausdorff".
  std::vector<std::string> failed_checks;
  double seconds = 0.0;
  double limit_seconds = 0.0;
};

struct Options {
  int threads = 1;
  /// Criteria to run (1-8); empty runs all of them.
  std::vector<int> only;
  /// Called after each criterion finishes, e.g. for progress output.
  std::function<void(const CheckResult&)> on_result;
};

std::vector<CheckResult> run(const Options& options = {});

/// One line per criterion: "PASS [3] name (1.2 s / 120 s): detail".
std::string format_line(const CheckResult& r);
nlohmann::json to_json(const std::vector<CheckResult>& results);

}  // namespace dmspec::acceptance
