#include "lord/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lord/parallel.hpp"
#include "lord/rng.hpp"

namespace lord {
namespace {

void check_dims(const SparseSimilarity& sim, const Eigen::MatrixXd& V) {
  if (V.rows() != sim.n())
    throw std::invalid_argument("V row count does not match S");
}

Eigen::MatrixXd random_uniform_matrix(Eigen::Index n, Eigen::Index k,
                                      std::uint64_t seed) {
  CounterRng rng(seed, 0);
  Eigen::MatrixXd U(n, k);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < k; ++j) U(i, j) = rng.uniform();
  return U;
}

}  // namespace

std::string model_name(Model model) {
  return model == Model::kLord ? "lord" : "blord";
}

Model parse_model(const std::string& name) {
  if (name == "lord") return Model::kLord;
  if (name == "blord" || name == "b-lord") return Model::kBlord;
  throw std::invalid_argument("unknown model: " + name);
}

double lord_objective(const SparseSimilarity& sim, const Eigen::MatrixXd& V) {
  check_dims(sim, V);
  const Eigen::MatrixXd SV = sim.matrix * V;
  const Eigen::MatrixXd gram = V.transpose() * V;  // k x k
  return sim.frobenius_sq() - 2.0 * SV.cwiseProduct(V).sum() +
         gram.squaredNorm();
}

Eigen::MatrixXd lord_gradient(const SparseSimilarity& sim,
                              const Eigen::MatrixXd& V) {
  check_dims(sim, V);
  const Eigen::MatrixXd gram = V.transpose() * V;
  return 4.0 * (V * gram - sim.matrix * V);
}

double blord_objective(const SparseSimilarity& sim, const Eigen::MatrixXd& V,
                       double gamma) {
  check_dims(sim, V);
  const Eigen::MatrixXd SV = sim.matrix * V;
  return SV.cwiseProduct(V).sum() + gamma * V.squaredNorm();
}

Eigen::MatrixXd blord_gradient(const SparseSimilarity& sim,
                               const Eigen::MatrixXd& V, double gamma) {
  check_dims(sim, V);
  return -2.0 * (sim.matrix * V + gamma * V);
}

double lipschitz_constant(const SparseSimilarity& sim,
                          const SpectralBounds& bounds, Model model,
                          double gamma) {
  if (model == Model::kLord)
    return 4.0 * (3.0 / double(sim.n()) + bounds.op_norm());
  return 2.0 * std::max(std::abs(bounds.lambda_max + gamma),
                        std::abs(bounds.lambda_min + gamma));
}

double gamma_from_tau(const SpectralBounds& bounds, double tau) {
  if (tau < 0.0 || tau > 1.0)
    throw std::invalid_argument("tau must lie in [0, 1]");
  return -bounds.lambda_max + tau * (bounds.lambda_max - bounds.lambda_min);
}

double tau_rule_n(Eigen::Index n) {
  if (n < 2) throw std::invalid_argument("tau_rule_n requires n >= 2");
  return std::min(2.0 * std::pow(double(n), -0.24), 1.0);
}

double tau_rule_nb(Eigen::Index n, double b) {
  if (n < 2) throw std::invalid_argument("tau_rule_nb requires n >= 2");
  if (b < 0.0 || b > 1.0)
    throw std::invalid_argument("tau_rule_nb requires b in [0, 1]");
  const double value = 0.34 * std::exp(50.0 * b - 0.03 * std::log(double(n)));
  return std::clamp(value, 0.0, 1.0);
}

SolverResult pgd_solve(const SparseSimilarity& sim,
                       const SpectralBounds& bounds, const ClassPrior& mu,
                       const SolverConfig& config,
                       const std::optional<Eigen::MatrixXd>& V0) {
  const Eigen::Index n = sim.n();
  const int k = mu.k();
  const bool is_lord = config.model == Model::kLord;
  const double gamma =
      is_lord ? 0.0 : gamma_from_tau(bounds, config.tau);
  const double L = lipschitz_constant(sim, bounds, config.model, gamma);
  if (!(L > 0.0))
    throw std::runtime_error("non-positive Lipschitz constant");

  SolverResult result;
  result.seed = config.seed;
  result.gamma = gamma;

  Eigen::MatrixXd V;
  long dykstra_total = 0;
  if (V0) {
    if (V0->rows() != n || V0->cols() != k)
      throw std::invalid_argument("V0 dimension mismatch");
    if (!check_feasibility(*V0, mu).within())
      throw std::invalid_argument("supplied V0 is not feasible");
    V = *V0;
  } else {
    V = sinkhorn_normalize(random_uniform_matrix(n, k, config.seed), mu,
                           config.sinkhorn_s_max, config.sinkhorn_delta_s)
            .V;
  }

  // Reported objective: f1 for LoRD (descending), Tr(V'SV) + g||V||^2
  // for B-LoRD (ascending). Internally both are minimized.
  auto reported = [&](const Eigen::MatrixXd& W) {
    return is_lord ? lord_objective(sim, W) : blord_objective(sim, W, gamma);
  };
  auto gradient = [&](const Eigen::MatrixXd& W) {
    return is_lord ? lord_gradient(sim, W) : blord_gradient(sim, W, gamma);
  };

  result.objective_trace.push_back(reported(V));
  int t = 0;
  for (; t < config.t_max; ++t) {
    const Eigen::MatrixXd step = V - gradient(V) / L;
    ProjectionResult proj = dykstra_project(
        step, mu, config.dykstra_b_max, config.dykstra_delta_d);
    dykstra_total += proj.iterations;
    if (proj.hit_max_iter) result.dykstra_warning = true;

    const double step_norm = (proj.V - V).norm();
    const double rel = step_norm / std::max(V.norm(), 1e-300);
    const double objective = reported(proj.V);
    if (!std::isfinite(objective)) {
      std::ostringstream msg;
      msg << "non-finite objective at iteration " << t + 1
          << " (step norm " << step_norm << ")";
      throw std::runtime_error(msg.str());
    }
    V = std::move(proj.V);
    result.objective_trace.push_back(objective);
    result.step_norms.push_back(step_norm);
    if (rel <= config.delta_v) {
      ++t;
      result.converged = true;
      break;
    }
  }
  result.V = std::move(V);
  result.iterations = t;
  result.objective = result.objective_trace.back();
  result.dykstra_iters_avg =
      t > 0 ? double(dykstra_total) / double(t) : 0.0;
  result.feasibility = check_feasibility(result.V, mu);
  return result;
}

MultiRestartResult multi_restart(const SparseSimilarity& sim,
                                 const SpectralBounds& bounds,
                                 const ClassPrior& mu,
                                 const SolverConfig& config) {
  if (config.restarts < 1)
    throw std::invalid_argument("restarts must be >= 1");
  MultiRestartResult out;
  out.all.resize(config.restarts);
  parallel_for(config.restarts, config.threads, [&](int i) {
    SolverConfig run = config;
    run.seed = split_seed(config.seed, static_cast<std::uint64_t>(i));
    out.all[static_cast<size_t>(i)] = pgd_solve(sim, bounds, mu, run);
  });

  const bool is_lord = config.model == Model::kLord;
  int best = 0;
  for (int i = 1; i < config.restarts; ++i) {
    const double cand = out.all[static_cast<size_t>(i)].objective;
    const double incumbent = out.all[static_cast<size_t>(best)].objective;
    if (is_lord ? cand < incumbent : cand > incumbent) best = i;
  }
  out.best_index = best;
  out.best = out.all[static_cast<size_t>(best)];
  return out;
}

}  // namespace lord
