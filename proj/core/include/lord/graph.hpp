#pragma once

#include <cstdint>
#include <stdexcept>

#include "lord/dataset.hpp"
#include "lord/similarity.hpp"

namespace lord {

/// Extreme eigenvalues of S, estimated by shifted power iteration.
struct SpectralBounds {
  double lambda_max = 0.0;
  double lambda_min = 0.0;
  double tol = 0.0;  // relative tolerance achieved

  double op_norm() const {
    return std::max(std::abs(lambda_max), std::abs(lambda_min));
  }
};

class SpectralConvergenceError : public std::runtime_error {
 public:
  SpectralConvergenceError(const std::string& what, SpectralBounds best,
                           double residual)
      : std::runtime_error(what), best_estimate(best), residual(residual) {}
  SpectralBounds best_estimate;
  double residual;
};

inline constexpr int kAutoNeighbors = -1;

// q = floor(log2(n)) + 1
int default_neighbor_count(Eigen::Index n);

// Self-tuned q-NN similarity graph:
//   S_ij = exp(-||x_i - x_j||^2 / (sigma_i sigma_j)) if i,j are q-NN
// with sigma_i the distance from x_i to its 7th nearest neighbor (always
// the 7th, independent of q). Symmetric, zero diagonal. Requires n >= 8;
// errors on duplicate points (sigma = 0). Ties in neighbor distance are
// broken by smaller index.
SparseSimilarity build_knn_graph(const Dataset& data, int q = kAutoNeighbors);

// lambda_max / lambda_min of symmetric S via power iteration on the
// Gershgorin-shifted matrices S + uI and uI - S. Deterministic per seed.
// Throws SpectralConvergenceError if max_iter is exhausted.
SpectralBounds spectral_bounds(const SparseSimilarity& sim, double tol = 1e-8,
                               int max_iter = 5000, std::uint64_t seed = 0);

// b = (sum of the k smallest eigenvalues of L_S) / Tr(L_S), in [0, 1].
// Computed by blocked subspace iteration on the shifted Laplacian.
double block_diagonality_metric(const SparseSimilarity& sim, int k,
                                double tol = 1e-10, int max_iter = 20000);

// Sum of the k smallest eigenvalues of the Laplacian of a dense symmetric
// matrix, by direct eigendecomposition. Test support; capped at n <= 500.
double kyfan_block_norm(const Eigen::MatrixXd& dense, int k);

}  // namespace lord
