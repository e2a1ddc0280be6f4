#include "lord/report.hpp"

namespace lord {

nlohmann::json to_json(const SolverConfig& config) {
  return {{"model", model_name(config.model)},
          {"tau", config.tau},
          {"t_max", config.t_max},
          {"delta_v", config.delta_v},
          {"restarts", config.restarts},
          {"seed", config.seed},
          {"dykstra_b_max", config.dykstra_b_max},
          {"dykstra_delta_d", config.dykstra_delta_d},
          {"sinkhorn_s_max", config.sinkhorn_s_max},
          {"sinkhorn_delta_s", config.sinkhorn_delta_s},
          {"threads", config.threads}};
}

nlohmann::json to_json(const RunManifest& manifest) {
  return {{"record", "manifest"},
          {"schema_version", kReportSchemaVersion},
          {"command", manifest.command},
          {"inputs", manifest.inputs},
          {"outputs", manifest.outputs},
          {"config", to_json(manifest.config)},
          {"mu_mode", manifest.mu_mode},
          {"tau_rule", manifest.tau_rule},
          {"tool_version", manifest.tool_version}};
}

nlohmann::json to_json(const SpectralBounds& bounds) {
  return {{"lambda_max", bounds.lambda_max},
          {"lambda_min", bounds.lambda_min},
          {"op_norm", bounds.op_norm()},
          {"tol", bounds.tol}};
}

nlohmann::json to_json(const EvalReport& report) {
  nlohmann::json confusion = nlohmann::json::array();
  for (int i = 0; i < report.confusion.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < report.confusion.cols(); ++j)
      row.push_back(report.confusion(i, j));
    confusion.push_back(std::move(row));
  }
  return {{"acc", report.acc},
          {"nmi", report.nmi},
          {"pur", report.pur},
          {"f1", report.f1},
          {"confusion", std::move(confusion)}};
}

nlohmann::json to_json(const RobustnessRow& row) {
  return {{"counts", row.counts},
          {"ibr", row.ibr},
          {"model", model_name(row.model)},
          {"mu_mode", row.mu_star ? "from-labels" : "uniform"},
          {"tau", row.tau},
          {"objective", row.objective},
          {"metrics", to_json(row.metrics)}};
}

nlohmann::json to_json(const RestartSummary& summary) {
  nlohmann::json record = {{"record", "restart"},
                           {"index", summary.index},
                           {"seed", summary.seed},
                           {"objective", summary.objective},
                           {"iterations", summary.iterations},
                           {"converged", summary.converged}};
  if (summary.acc) record["acc"] = *summary.acc;
  return record;
}

nlohmann::json solver_record(const SolverResult& result) {
  return {{"record", "solve"},
          {"objective", result.objective},
          {"objective_trace", result.objective_trace},
          {"step_norms", result.step_norms},
          {"iterations", result.iterations},
          {"converged", result.converged},
          {"dykstra_iters_avg", result.dykstra_iters_avg},
          {"dykstra_warning", result.dykstra_warning},
          {"seed", result.seed},
          {"gamma", result.gamma},
          {"feasibility",
           {{"max_negativity", result.feasibility.max_negativity},
            {"column_residual", result.feasibility.column_residual},
            {"row_residual", result.feasibility.row_residual}}}};
}

}  // namespace lord
