#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lord/prior.hpp"

namespace lord {

// P = n V Diag(mu); rows are class posteriors and sum to one for any
// feasible V. Errors (with residuals in the message) if V is infeasible.
Eigen::MatrixXd class_posteriors(const Eigen::MatrixXd& V,
                                 const ClassPrior& mu);

// Z = n^2 V Diag(mu .* mu) V' = P P'; pairwise co-assignment
// probabilities. Dense, so n is capped.
Eigen::MatrixXd pairwise_coassignment(const Eigen::MatrixXd& V,
                                      const ClassPrior& mu,
                                      Eigen::Index cap = 5000);

// Per-row argmax, ties to the lowest column index.
std::vector<int> hard_labels(const Eigen::MatrixXd& V);

// Diagnostic: per-row entropy of the posterior, natural log.
Eigen::VectorXd posterior_entropy(const Eigen::MatrixXd& P);

}  // namespace lord
