// Batch front end for the LoRD / B-LoRD clustering toolkit.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "lord/dataset.hpp"
#include "lord/graph.hpp"
#include "lord/metrics.hpp"
#include "lord/probability.hpp"
#include "lord/report.hpp"
#include "lord/similarity.hpp"
#include "lord/solver.hpp"
#include "lord/synth.hpp"

namespace {

constexpr const char* kToolVersion = "0.1.0";

using nlohmann::json;

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    double lo = 0, hi = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream stream(text);
    if (!(stream >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' ||
        step <= 0)
      throw CLI::ValidationError("--grid", "expected lo:hi:step");
    for (double v = lo; v <= hi + 1e-12; v += step)
      grid.push_back(std::min(v, 1.0));
  } else {
    std::istringstream stream(text);
    std::string field;
    while (std::getline(stream, field, ',')) grid.push_back(std::stod(field));
  }
  if (grid.empty()) throw CLI::ValidationError("--grid", "empty grid");
  return grid;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write output file: " + path);
  file.precision(17);
  return file;
}

struct ClusterInputs {
  lord::SparseSimilarity graph;      // as loaded/built (unnormalized)
  std::optional<std::vector<int>> truth;
  Eigen::Index n = 0;
};

ClusterInputs load_cluster_inputs(const std::string& input_csv,
                                  const std::string& graph_file,
                                  bool label_column, int q) {
  ClusterInputs inputs;
  if (!input_csv.empty()) {
    lord::Dataset data = lord::load_csv(input_csv, label_column);
    inputs.graph = lord::build_knn_graph(data, q);
    inputs.truth = data.labels;
    inputs.n = data.n();
  } else {
    inputs.graph = lord::load_triplets(graph_file);
    inputs.n = inputs.graph.n();
  }
  return inputs;
}

lord::ClassPrior resolve_prior(const std::string& mu_mode,
                               const std::string& mu_file, int k,
                               const std::optional<std::vector<int>>& truth) {
  if (mu_mode == "uniform") return lord::uniform_prior(k);
  if (mu_mode == "from-labels") {
    if (!truth)
      throw std::runtime_error("--mu from-labels requires a label column");
    return lord::prior_from_labels(*truth, k);
  }
  if (mu_mode == "file") {
    const auto raw = lord::load_labels(mu_file);  // reused numeric reader
    std::ifstream file(mu_file);
    Eigen::VectorXd mu(k);
    double value = 0;
    int i = 0;
    while (file >> value && i < k) mu[i++] = value;
    if (i != k) throw std::runtime_error("mu file must contain k values");
    (void)raw;
    return lord::make_prior(std::move(mu));
  }
  throw std::runtime_error("unknown mu mode: " + mu_mode);
}

int run_cluster(const std::string& input_csv, const std::string& graph_file,
                int k, const std::string& model_name,
                const std::string& mu_mode, const std::string& mu_file,
                double tau, const std::string& tau_rule, int inits,
                std::uint64_t seed, int t_max, double delta_v, int q,
                bool label_column, int threads, const std::string& out_path,
                bool with_posteriors) {
  const lord::Model model = lord::parse_model(model_name);
  ClusterInputs inputs =
      load_cluster_inputs(input_csv, graph_file, label_column, q);
  const lord::SparseSimilarity working =
      model == lord::Model::kLord ? lord::normalize_total(inputs.graph)
                                  : inputs.graph;
  const lord::SpectralBounds bounds = lord::spectral_bounds(working);

  lord::SolverConfig config;
  config.model = model;
  config.t_max = t_max;
  config.delta_v = delta_v;
  config.restarts = inits;
  config.seed = seed;
  config.threads = threads;

  std::vector<double> taus;
  if (model == lord::Model::kBlord) {
    if (tau_rule == "fixed") {
      taus = {tau};
    } else if (tau_rule == "n-rule") {
      taus = {lord::tau_rule_n(inputs.n)};
    } else if (tau_rule == "b-rule") {
      const double b = lord::block_diagonality_metric(inputs.graph, k);
      taus = {lord::tau_rule_nb(inputs.n, b)};
    } else if (tau_rule == "grid") {
      taus = parse_grid("0.1:1.0:0.1");
    } else {
      throw std::runtime_error("unknown tau rule: " + tau_rule);
    }
  } else {
    taus = {0.0};
  }

  lord::RunManifest manifest;
  manifest.command = "cluster";
  if (!input_csv.empty()) manifest.inputs.push_back(input_csv);
  if (!graph_file.empty()) manifest.inputs.push_back(graph_file);
  manifest.outputs.push_back(out_path);
  config.tau = taus.front();
  manifest.config = config;
  manifest.mu_mode = mu_mode;
  manifest.tau_rule = tau_rule;
  manifest.tool_version = kToolVersion;
  std::cout << lord::to_json(manifest).dump() << "\n";

  const lord::ClassPrior mu = resolve_prior(mu_mode, mu_file, k, inputs.truth);

  // grid rule: prefer ACC when truth is available, objective otherwise
  lord::MultiRestartResult best_run;
  double best_tau = taus.front();
  double best_score = 0.0;
  bool have = false;
  for (double t : taus) {
    config.tau = t;
    lord::MultiRestartResult run =
        lord::multi_restart(working, bounds, mu, config);
    double score;
    if (inputs.truth) {
      score = lord::clustering_accuracy(lord::hard_labels(run.best.V),
                                        *inputs.truth);
    } else {
      score = model == lord::Model::kLord ? -run.best.objective
                                          : run.best.objective;
    }
    if (!have || score > best_score) {
      have = true;
      best_score = score;
      best_tau = t;
      best_run = std::move(run);
    }
  }

  std::ofstream out = open_output(out_path);
  out << lord::to_json(manifest).dump() << "\n";
  json solve = lord::solver_record(best_run.best);
  solve["tau"] = best_tau;
  solve["spectral_bounds"] = lord::to_json(bounds);
  out << solve.dump() << "\n";

  const std::vector<int> labels = lord::hard_labels(best_run.best.V);
  out << json{{"record", "labels"}, {"labels", labels}}.dump() << "\n";
  if (with_posteriors) {
    const Eigen::MatrixXd P = lord::class_posteriors(best_run.best.V, mu);
    json rows = json::array();
    for (Eigen::Index i = 0; i < P.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < P.cols(); ++j) row.push_back(P(i, j));
      rows.push_back(std::move(row));
    }
    out << json{{"record", "posteriors"}, {"P", std::move(rows)}}.dump()
        << "\n";
  }
  if (inputs.truth) {
    out << json{{"record", "metrics"},
                {"metrics",
                 lord::to_json(lord::evaluate(labels, *inputs.truth))}}
               .dump()
        << "\n";
  }
  for (size_t i = 0; i < best_run.all.size(); ++i) {
    lord::RestartSummary summary;
    summary.index = static_cast<int>(i);
    summary.seed = best_run.all[i].seed;
    summary.objective = best_run.all[i].objective;
    summary.iterations = best_run.all[i].iterations;
    summary.converged = best_run.all[i].converged;
    if (inputs.truth)
      summary.acc = lord::clustering_accuracy(
          lord::hard_labels(best_run.all[i].V), *inputs.truth);
    out << lord::to_json(summary).dump() << "\n";
  }
  if (inputs.truth && best_run.all.size() >= 3) {
    std::vector<double> objectives, accs;
    for (const auto& run : best_run.all) {
      objectives.push_back(run.objective);
      accs.push_back(lord::clustering_accuracy(lord::hard_labels(run.V),
                                               *inputs.truth));
    }
    out << json{{"record", "r2"},
                {"r2", lord::objective_acc_r2(objectives, accs,
                                              model == lord::Model::kLord)}}
               .dump()
        << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LoRD / B-LoRD sparse-graph clustering toolkit"};
  app.require_subcommand(1);

  // ---- graph ----
  std::string g_input, g_out = "graph.txt";
  int g_q = lord::kAutoNeighbors;
  bool g_labels = false, g_normalize = false;
  auto* cmd_graph = app.add_subcommand("graph", "build a q-NN similarity graph");
  cmd_graph->add_option("--input", g_input, "input CSV")->required();
  cmd_graph->add_option("--out", g_out, "output triplet file");
  cmd_graph->add_option("--q", g_q, "neighbor count (default floor(log2 n)+1)");
  cmd_graph->add_flag("--labels", g_labels, "final CSV column is a label");
  cmd_graph->add_flag("--normalize", g_normalize, "divide S by 1'S1");

  // ---- cluster ----
  std::string c_input, c_graph, c_model = "lord", c_mu = "uniform", c_mu_file,
              c_tau_rule = "fixed", c_out = "report.jsonl";
  int c_k = 0, c_inits = 50, c_tmax = 4000, c_q = lord::kAutoNeighbors,
      c_threads = 0;
  double c_tau = 0.5, c_tol = 1e-4;
  std::uint64_t c_seed = 0;
  bool c_labels = false, c_posteriors = false;
  auto* cmd_cluster = app.add_subcommand("cluster", "run LoRD or B-LoRD");
  cmd_cluster->add_option("--input", c_input, "input CSV");
  cmd_cluster->add_option("--graph", c_graph, "input graph triplet file");
  cmd_cluster->add_option("--k", c_k, "number of clusters")->required();
  cmd_cluster->add_option("--model", c_model, "lord | blord");
  cmd_cluster->add_option("--mu", c_mu, "uniform | from-labels | file");
  cmd_cluster->add_option("--mu-file", c_mu_file, "prior file for --mu file");
  cmd_cluster->add_option("--tau", c_tau, "B-LoRD tau in [0,1]");
  cmd_cluster->add_option("--tau-rule", c_tau_rule,
                          "fixed | n-rule | b-rule | grid");
  cmd_cluster->add_option("--inits", c_inits, "random restarts");
  cmd_cluster->add_option("--seed", c_seed, "master seed")->required();
  cmd_cluster->add_option("--tmax", c_tmax, "max PGD iterations");
  cmd_cluster->add_option("--tol", c_tol, "relative step tolerance");
  cmd_cluster->add_option("--q", c_q, "neighbor count for graph building");
  cmd_cluster->add_option("--threads", c_threads,
                          "worker threads (default: all, or LORD_THREADS)");
  cmd_cluster->add_flag("--labels", c_labels, "final CSV column is a label");
  cmd_cluster->add_flag("--posteriors", c_posteriors,
                        "emit posterior rows in the report");
  cmd_cluster->add_option("--out", c_out, "report path (JSON lines)");

  // ---- sweep-tau ----
  std::string s_input, s_graph, s_grid = "0.05:1.0:0.05",
              s_out = "sweep.csv";
  int s_k = 0, s_inits = 10, s_q = lord::kAutoNeighbors, s_threads = 0;
  std::uint64_t s_seed = 0;
  bool s_labels = false;
  auto* cmd_sweep =
      app.add_subcommand("sweep-tau", "B-LoRD objective/ACC across a tau grid");
  cmd_sweep->add_option("--input", s_input, "input CSV");
  cmd_sweep->add_option("--graph", s_graph, "input graph triplet file");
  cmd_sweep->add_option("--k", s_k, "number of clusters")->required();
  cmd_sweep->add_option("--grid", s_grid, "lo:hi:step or comma list");
  cmd_sweep->add_option("--inits", s_inits, "restarts per grid point");
  cmd_sweep->add_option("--seed", s_seed, "master seed")->required();
  cmd_sweep->add_option("--q", s_q, "neighbor count for graph building");
  cmd_sweep->add_option("--threads", s_threads, "worker threads");
  cmd_sweep->add_flag("--labels", s_labels, "final CSV column is a label");
  cmd_sweep->add_option("--out", s_out, "output CSV (tau,objective,acc)");

  // ---- synth ----
  std::string y_counts = "50,50,50,50", y_out = "synth.csv", y_table;
  std::uint64_t y_seed = 0;
  int y_inits = 50, y_threads = 0;
  bool y_robustness = false;
  auto* cmd_synth =
      app.add_subcommand("synth", "four-Gaussian synthetic benchmark");
  cmd_synth->add_option("--counts", y_counts, "four class counts");
  cmd_synth->add_option("--seed", y_seed, "master seed")->required();
  cmd_synth->add_option("--out", y_out, "dataset CSV output");
  cmd_synth->add_flag("--robustness", y_robustness,
                      "run the full mu robustness experiment");
  cmd_synth->add_option("--table", y_table, "robustness table CSV output");
  cmd_synth->add_option("--inits", y_inits, "restarts per configuration");
  cmd_synth->add_option("--threads", y_threads, "worker threads");

  // ---- eval ----
  std::string e_pred, e_truth;
  auto* cmd_eval = app.add_subcommand("eval", "score predicted labels");
  cmd_eval->add_option("--pred", e_pred, "predicted labels CSV")->required();
  cmd_eval->add_option("--truth", e_truth, "ground-truth labels CSV")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_graph) {
      lord::RunManifest manifest;
      manifest.command = "graph";
      manifest.inputs = {g_input};
      manifest.outputs = {g_out};
      manifest.mu_mode = "n/a";
      manifest.tau_rule = "n/a";
      manifest.tool_version = kToolVersion;
      std::cout << lord::to_json(manifest).dump() << "\n";

      lord::Dataset data = lord::load_csv(g_input, g_labels);
      lord::SparseSimilarity sim = lord::build_knn_graph(data, g_q);
      if (g_normalize) sim = lord::normalize_total(sim);
      lord::save_triplets(sim, g_out);
      std::cout << nlohmann::json{{"record", "graph"},
                                  {"n", sim.n()},
                                  {"nnz", sim.nnz()},
                                  {"total_sum", sim.total_sum}}
                       .dump()
                << "\n";
      return 0;
    }
    if (*cmd_cluster) {
      if (c_input.empty() == c_graph.empty())
        throw std::runtime_error("give exactly one of --input or --graph");
      return run_cluster(c_input, c_graph, c_k, c_model, c_mu, c_mu_file,
                         c_tau, c_tau_rule, c_inits, c_seed, c_tmax, c_tol,
                         c_q, c_labels, c_threads, c_out, c_posteriors);
    }
    if (*cmd_sweep) {
      if (s_input.empty() == s_graph.empty())
        throw std::runtime_error("give exactly one of --input or --graph");
      ClusterInputs inputs =
          load_cluster_inputs(s_input, s_graph, s_labels, s_q);
      const lord::SpectralBounds bounds = lord::spectral_bounds(inputs.graph);
      const lord::ClassPrior mu = lord::uniform_prior(s_k);

      lord::RunManifest manifest;
      manifest.command = "sweep-tau";
      manifest.inputs = {s_input.empty() ? s_graph : s_input};
      manifest.outputs = {s_out};
      manifest.config.model = lord::Model::kBlord;
      manifest.config.restarts = s_inits;
      manifest.config.seed = s_seed;
      manifest.config.threads = s_threads;
      manifest.mu_mode = "uniform";
      manifest.tau_rule = "grid";
      manifest.tool_version = kToolVersion;
      std::cout << lord::to_json(manifest).dump() << "\n";

      std::ofstream out = open_output(s_out);
      out << "tau,objective,acc\n";
      for (double tau : parse_grid(s_grid)) {
        lord::SolverConfig config = manifest.config;
        config.tau = tau;
        const lord::MultiRestartResult run =
            lord::multi_restart(inputs.graph, bounds, mu, config);
        double acc = -1.0;
        if (inputs.truth)
          acc = lord::clustering_accuracy(lord::hard_labels(run.best.V),
                                          *inputs.truth);
        out << tau << ',' << run.best.objective << ',' << acc << '\n';
      }
      return 0;
    }
    if (*cmd_synth) {
      lord::MixtureSpec spec;
      spec.seed = y_seed;
      {
        std::istringstream stream(y_counts);
        std::string field;
        int i = 0;
        while (std::getline(stream, field, ',') && i < 4)
          spec.counts[i++] = std::stoi(field);
        if (i != 4) throw std::runtime_error("--counts needs four values");
      }
      lord::RunManifest manifest;
      manifest.command = "synth";
      manifest.outputs = {y_out};
      if (!y_table.empty()) manifest.outputs.push_back(y_table);
      manifest.config.seed = y_seed;
      manifest.config.restarts = y_inits;
      manifest.mu_mode = "n/a";
      manifest.tau_rule = "n/a";
      manifest.tool_version = kToolVersion;
      std::cout << lord::to_json(manifest).dump() << "\n";

      const lord::Dataset data = lord::sample_mixture(spec);
      lord::save_csv(data, y_out);
      std::vector<long> counts(spec.counts.begin(), spec.counts.end());
      std::cout << nlohmann::json{{"record", "synth"},
                                  {"n", data.n()},
                                  {"ibr", lord::imbalance_rate(counts)}}
                       .dump()
                << "\n";
      if (y_robustness) {
        if (y_table.empty())
          throw std::runtime_error("--robustness requires --table");
        lord::RobustnessConfig config;
        config.seed = y_seed;
        config.restarts = y_inits;
        config.threads = y_threads;
        const auto rows = lord::run_robustness_experiment(config);
        std::ofstream table = open_output(y_table);
        table << "counts,ibr,model,mu,tau,objective,acc,nmi,pur,f1\n";
        for (const auto& row : rows) {
          table << row.counts[0] << '|' << row.counts[1] << '|'
                << row.counts[2] << '|' << row.counts[3] << ',' << row.ibr
                << ',' << lord::model_name(row.model) << ','
                << (row.mu_star ? "star" : "uniform") << ',' << row.tau << ','
                << row.objective << ',' << row.metrics.acc << ','
                << row.metrics.nmi << ',' << row.metrics.pur << ','
                << row.metrics.f1 << '\n';
        }
      }
      return 0;
    }
    if (*cmd_eval) {
      const auto pred = lord::load_labels(e_pred);
      const auto truth = lord::load_labels(e_truth);
      std::cout << lord::to_json(lord::evaluate(pred, truth)).dump() << "\n";
      return 0;
    }
  } catch (const std::exception& error) {
    std::cerr << nlohmann::json{{"record", "error"}, {"what", error.what()}}
                     .dump()
              << "\n";
    return 1;
  }
  return 0;
}
