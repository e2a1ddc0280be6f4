#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "lord/graph.hpp"
#include "lord/metrics.hpp"
#include "lord/solver.hpp"
#include "lord/synth.hpp"

namespace lord {

inline constexpr int kReportSchemaVersion = 1;

/// Resolved run description; rerunning a manifest reproduces outputs
/// bit-for-bit.
struct RunManifest {
  std::string command;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  SolverConfig config;
  std::string mu_mode;   // uniform | from-labels | file
  std::string tau_rule;  // fixed | n-rule | b-rule | grid
  std::string tool_version;
};

nlohmann::json to_json(const RunManifest& manifest);
nlohmann::json to_json(const SolverConfig& config);
nlohmann::json to_json(const SpectralBounds& bounds);
nlohmann::json to_json(const EvalReport& report);
nlohmann::json to_json(const RobustnessRow& row);

// Per-run one-line summary for R^2 scatter data.
struct RestartSummary {
  int index = 0;
  std::uint64_t seed = 0;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  std::optional<double> acc;
};

nlohmann::json to_json(const RestartSummary& summary);

// Full solver-result record (without the V payload; labels and
// posteriors are attached by the caller when requested).
nlohmann::json solver_record(const SolverResult& result);

}  // namespace lord
