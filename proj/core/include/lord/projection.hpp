#pragma once

#include <Eigen/Dense>

#include "lord/prior.hpp"

namespace lord {

inline constexpr double kFeasTol = 1e-6;

/// Constraint residuals of a candidate V against Omega(mu).
struct Feasibility {
  double max_negativity = 0.0;   // max(0, -min(V))
  double column_residual = 0.0;  // ||V' 1 - mu||_inf
  double row_residual = 0.0;     // ||V mu - 1/n||_inf

  bool within(double tol = kFeasTol) const {
    return max_negativity <= tol && column_residual <= tol &&
           row_residual <= tol;
  }
};

Feasibility check_feasibility(const Eigen::MatrixXd& V, const ClassPrior& mu);

/// Outcome of an iterative projection/normalization.
struct ProjectionResult {
  Eigen::MatrixXd V;
  int iterations = 0;
  bool hit_max_iter = false;  // non-fatal: tolerance not met within budget
  Feasibility residuals;
};

// Elementwise max(U, 0).
Eigen::MatrixXd project_nonneg(const Eigen::MatrixXd& U);

// Closed-form orthogonal projection onto the affine set
// { V : V'1 = mu, V mu = 1/n }:
//   P(U) = U + ((1'U mu + 1)/n) 1 mu' - (1 1'/n) U - U mu mu'
Eigen::MatrixXd project_affine(const Eigen::MatrixXd& U, const ClassPrior& mu);

// Accelerated Dykstra iteration approximating the orthogonal projection
// onto Omega(mu). Terminates when the most negative entry of V falls
// below delta_d * min(max(mu), 1/(n min(mu))) (only max(mu) if min(mu)
// is zero); the final iterate is clamped at zero. Post-clamp residuals
// are reported, not repaired.
ProjectionResult dykstra_project(const Eigen::MatrixXd& U,
                                 const ClassPrior& mu, int b_max = 1000,
                                 double delta_d = 1e-5);

// Sinkhorn-Knopp normalization of a (nonnegative) U into Omega(mu):
// scales P = max(U .* mu', 1e-20) to the marginals (1/n, mu .* mu) and
// returns V = Diag(l) P Diag(r) Diag(mu)^-1. Errors when mu has a zero
// entry or an intermediate becomes non-finite.
ProjectionResult sinkhorn_normalize(const Eigen::MatrixXd& U,
                                    const ClassPrior& mu, int s_max = 1000,
                                    double delta_s = 1e-16);

}  // namespace lord
