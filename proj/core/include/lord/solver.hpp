#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lord/graph.hpp"
#include "lord/prior.hpp"
#include "lord/projection.hpp"
#include "lord/similarity.hpp"

namespace lord {

enum class Model { kLord, kBlord };

std::string model_name(Model model);
Model parse_model(const std::string& name);

struct SolverConfig {
  Model model = Model::kLord;
  double tau = 0.5;  // B-LoRD only
  int t_max = 4000;
  double delta_v = 1e-4;
  int restarts = 50;
  std::uint64_t seed = 0;
  int dykstra_b_max = 1000;
  double dykstra_delta_d = 1e-5;
  int sinkhorn_s_max = 1000;
  double sinkhorn_delta_s = 1e-16;
  int threads = 0;  // 0 = hardware concurrency
};

struct SolverResult {
  Eigen::MatrixXd V;
  double objective = 0.0;  // reported value: f1 for LoRD, Tr(V'SV)+g||V||^2 for B-LoRD
  std::vector<double> objective_trace;
  std::vector<double> step_norms;  // ||V^{t+1} - V^t||_F
  int iterations = 0;
  bool converged = false;
  double dykstra_iters_avg = 0.0;
  bool dykstra_warning = false;  // some inner projection hit b_max
  Feasibility feasibility;
  std::uint64_t seed = 0;
  double gamma = 0.0;
};

struct MultiRestartResult {
  SolverResult best;
  int best_index = 0;
  std::vector<SolverResult> all;
};

// f1(V) = ||S - VV'||_F^2 evaluated as ||S||_F^2 - 2<SV, V> + ||V'V||_F^2;
// no n x n product is ever formed.
double lord_objective(const SparseSimilarity& sim, const Eigen::MatrixXd& V);

// grad f1 = 4 (V(V'V) - SV)
Eigen::MatrixXd lord_gradient(const SparseSimilarity& sim,
                              const Eigen::MatrixXd& V);

// B-LoRD maximizes Tr(V'SV) + gamma ||V||_F^2; internally the solver
// minimizes f2 = -(that), with grad f2 = -2(SV + gamma V).
double blord_objective(const SparseSimilarity& sim, const Eigen::MatrixXd& V,
                       double gamma);
Eigen::MatrixXd blord_gradient(const SparseSimilarity& sim,
                               const Eigen::MatrixXd& V, double gamma);

// L1 = 4(3/n + ||S||_op), L2 = 2 ||S + gamma I||_op.
double lipschitz_constant(const SparseSimilarity& sim,
                          const SpectralBounds& bounds, Model model,
                          double gamma);

// gamma = -lambda_max + tau (lambda_max - lambda_min), tau in [0, 1].
double gamma_from_tau(const SpectralBounds& bounds, double tau);

// tau_hat_1 = min(2 n^-0.24, 1)
double tau_rule_n(Eigen::Index n);
// tau_hat_2 = min(0.34 exp(50 b - 0.03 ln n), 1)
double tau_rule_nb(Eigen::Index n, double b);

// Projected gradient descent with fixed step 1/L. V0 defaults to
// Sinkhorn(rand(n, k), mu) seeded from config.seed.
SolverResult pgd_solve(const SparseSimilarity& sim,
                       const SpectralBounds& bounds, const ClassPrior& mu,
                       const SolverConfig& config,
                       const std::optional<Eigen::MatrixXd>& V0 = std::nullopt);

// config.restarts independent seeded runs; best = minimal objective for
// LoRD, maximal for B-LoRD, ties broken by seed order.
MultiRestartResult multi_restart(const SparseSimilarity& sim,
                                 const SpectralBounds& bounds,
                                 const ClassPrior& mu,
                                 const SolverConfig& config);

}  // namespace lord
