#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "lord/dataset.hpp"
#include "lord/metrics.hpp"
#include "lord/similarity.hpp"
#include "lord/solver.hpp"

namespace lord {

/// Four 2-D Gaussians at (+-2, +-2) with per-component isotropic
/// variances (0.25, 1, 1, 2.25).
struct MixtureSpec {
  std::array<Eigen::Vector2d, 4> means = {
      Eigen::Vector2d(-2, 2), Eigen::Vector2d(2, 2), Eigen::Vector2d(-2, -2),
      Eigen::Vector2d(2, -2)};
  std::array<double, 4> variances = {0.25, 1.0, 1.0, 2.25};
  std::array<int, 4> counts = {50, 50, 50, 50};
  std::uint64_t seed = 0;

  int total() const { return counts[0] + counts[1] + counts[2] + counts[3]; }
  void validate() const;
};

Dataset sample_mixture(const MixtureSpec& spec);

// Gram matrix of the raw features, stored dense-as-sparse with
// allow_negative set.
SparseSimilarity inner_product_similarity(const Dataset& data);

struct RobustnessRow {
  std::array<int, 4> counts;
  double ibr = 0.0;
  Model model = Model::kLord;
  bool mu_star = false;  // true: mu from labels, false: uniform mu
  double tau = 0.0;      // selected tau (B-LoRD only)
  double objective = 0.0;
  EvalReport metrics;
};

struct RobustnessConfig {
  std::vector<std::array<int, 4>> count_settings = {{50, 50, 50, 50},
                                                    {40, 50, 50, 60},
                                                    {30, 45, 55, 70},
                                                    {20, 40, 60, 80},
                                                    {10, 30, 60, 100}};
  std::vector<double> tau_grid = {0.1, 0.2, 0.3, 0.4, 0.5,
                                  0.6, 0.7, 0.8, 0.9, 1.0};
  int restarts = 50;
  std::uint64_t seed = 0;
  int threads = 0;
};

// Runs LoRD and B-LoRD under uniform mu and mu* = sqrt(class ratios)
// across the count settings; B-LoRD takes the grid tau with the highest
// ACC (ties to the smaller tau). Rows come in a fixed deterministic
// order: per setting, LoRD mu*, LoRD mu0, B-LoRD mu*, B-LoRD mu0.
std::vector<RobustnessRow> run_robustness_experiment(
    const RobustnessConfig& config);

}  // namespace lord
