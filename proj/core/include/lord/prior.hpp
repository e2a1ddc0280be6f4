#pragma once

#include <Eigen/Dense>
#include <vector>

namespace lord {

/// Class prior on the nonnegative unit sphere: mu >= 0, ||mu||_2 = 1.
struct ClassPrior {
  Eigen::VectorXd mu;

  int k() const { return static_cast<int>(mu.size()); }
  double min() const { return mu.minCoeff(); }
  double max() const { return mu.maxCoeff(); }
};

// Accepts vectors with | ||mu||^2 - 1 | <= 1e-6 and renormalizes them
// exactly; rejects anything further off, or with negative entries.
ClassPrior make_prior(Eigen::VectorXd mu);

// mu = (1/sqrt(k), ..., 1/sqrt(k))
ClassPrior uniform_prior(int k);

// mu_j = sqrt(n_j / n) from ground-truth labels in {0..k-1}.
ClassPrior prior_from_labels(const std::vector<int>& labels, int k);

}  // namespace lord
