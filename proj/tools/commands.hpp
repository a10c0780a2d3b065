#pragma once

#include <string>

#include "scenario.hpp"

namespace crdiscs::tool {

struct RunOptions {
  std::string out_dir = ".";
  bool svg = false;
};

// Exit codes of the tool. Audit failures are reported with kAuditFailure
// after all outputs are written.
inline constexpr int kOk = 0;
inline constexpr int kAuditFailure = 1;
inline constexpr int kConfigError = 2;
inline constexpr int kSolverError = 3;
inline constexpr int kConstructionError = 4;

// Each command writes its CSV files and summary.txt into out_dir and
// returns kOk or kAuditFailure. Library errors propagate to the caller.
int cmd_classify(const ScenarioConfig& cfg, const RunOptions& opts);
int cmd_attach(const ScenarioConfig& cfg, const RunOptions& opts);
int cmd_family(const ScenarioConfig& cfg, const RunOptions& opts);

}  // namespace crdiscs::tool
