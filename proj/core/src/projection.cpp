#include "lord/projection.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace lord {

Feasibility check_feasibility(const Eigen::MatrixXd& V, const ClassPrior& mu) {
  const Eigen::Index n = V.rows();
  Feasibility f;
  f.max_negativity = std::max(0.0, -V.minCoeff());
  f.column_residual =
      (V.colwise().sum().transpose() - mu.mu).cwiseAbs().maxCoeff();
  f.row_residual =
      (V * mu.mu - Eigen::VectorXd::Constant(n, 1.0 / double(n)))
          .cwiseAbs()
          .maxCoeff();
  return f;
}

Eigen::MatrixXd project_nonneg(const Eigen::MatrixXd& U) {
  return U.cwiseMax(0.0);
}

Eigen::MatrixXd project_affine(const Eigen::MatrixXd& U, const ClassPrior& mu) {
  const Eigen::Index n = U.rows();
  if (U.cols() != mu.mu.size())
    throw std::invalid_argument("project_affine: dimension mismatch");
  const Eigen::VectorXd Umu = U * mu.mu;               // n
  const Eigen::RowVectorXd colsum = U.colwise().sum(); // k
  const double total = Umu.sum();                      // 1'U mu

  Eigen::MatrixXd V = U;
  V.noalias() -= Umu * mu.mu.transpose();
  V.rowwise() += ((total + 1.0) / double(n)) * mu.mu.transpose();
  V.rowwise() -= colsum / double(n);
  return V;
}

namespace {

// Exact finish for the projection once the zero pattern has stabilized.
// With the active set A = {(i,j) : V_ij = 0} fixed, the KKT conditions
// of min ||V - U||^2 over the affine constraints are linear in the n+k
// multipliers (alpha, beta):
//   V_ij = U_ij + alpha_j + beta_i mu_j   off A,   V_ij = 0 on A.
// Eliminating beta row-wise reduces the system to k x k. The system is
// rank-deficient whenever the bipartite graph of free entries is
// disconnected (gauge freedom alpha_j += s_c mu_j, beta_i -= s_c per
// component c), but the free entries of the candidate are gauge
// invariant, so a minimum-norm solve still yields the unique primal.
// The candidate is accepted only when it is primal feasible and some
// gauge makes every implied multiplier on A nonnegative, i.e. when it
// provably is the projection.
bool active_set_finish(const Eigen::MatrixXd& U, const ClassPrior& mu,
                       Eigen::ArrayXXd free_mask, Eigen::MatrixXd* out) {
  constexpr double kTol = 1e-11;
  const Eigen::Index n = U.rows();
  const Eigen::Index k = U.cols();
  const Eigen::VectorXd& m = mu.mu;

  // The sweep's zero pattern is usually off by a few entries, so refine
  // it like a primal active-set method: fix entries that come out
  // negative, release entries whose multiplier cannot be made
  // nonnegative, and accept only a fully verified KKT point.
  for (int refine = 0; refine < 30; ++refine) {
  const Eigen::MatrixXd M = free_mask.matrix();
  const Eigen::VectorXd d = M * m.cwiseProduct(m);  // row-wise sum of mu_j^2
  if ((d.array() <= 0.0).any()) return false;       // fully active row

  const Eigen::VectorXd c =
      Eigen::VectorXd::Constant(n, 1.0 / double(n)) -
      U.cwiseProduct(M) * m;
  const Eigen::VectorXd m_free = M.colwise().sum();  // free entries per column
  if ((m_free.array() <= 0.0).any()) return false;   // fully active column
  const Eigen::VectorXd r =
      m - U.cwiseProduct(M).colwise().sum().transpose();

  const Eigen::MatrixXd W = d.cwiseInverse().cwiseSqrt().asDiagonal() * M;
  Eigen::MatrixXd system =
      m.asDiagonal() * (W.transpose() * W) * m.asDiagonal();
  system = -system;
  system.diagonal() += m_free;
  const Eigen::VectorXd rhs =
      r - m.cwiseProduct(M.transpose() * c.cwiseQuotient(d));

  const Eigen::VectorXd alpha =
      system.completeOrthogonalDecomposition().solve(rhs);
  const Eigen::VectorXd beta =
      (c - M.cwiseProduct(Eigen::MatrixXd::Ones(n, 1) * alpha.transpose()) * m)
          .cwiseQuotient(d);

  const Eigen::MatrixXd full =
      U + Eigen::VectorXd::Ones(n) * alpha.transpose() +
      beta * m.transpose();
  if ((full.array() * free_mask).minCoeff() < -kTol) {
    // primal step: entries driven negative belong to the active set
    free_mask *= (full.array() >= -kTol).cast<double>();
    continue;
  }
  Eigen::MatrixXd V = (full.array() * free_mask).cwiseMax(0.0).matrix();
  const Feasibility feas = check_feasibility(V, mu);
  if (std::max(feas.column_residual, feas.row_residual) > 1e-10) return false;

  // label the connected components of the bipartite free graph; rows
  // inherit the component of any free column they touch
  std::vector<int> col_comp(size_t(k), -1);
  std::vector<int> row_comp(size_t(n), -1);
  int comps = 0;
  std::vector<int> stack;
  for (int j0 = 0; j0 < k; ++j0) {
    if (col_comp[size_t(j0)] >= 0) continue;
    col_comp[size_t(j0)] = comps;
    stack.assign(1, j0);
    while (!stack.empty()) {
      const int j = stack.back();
      stack.pop_back();
      for (int i = 0; i < n; ++i) {
        if (free_mask(i, j) <= 0.0 || row_comp[size_t(i)] >= 0) continue;
        row_comp[size_t(i)] = comps;
        for (int l = 0; l < k; ++l)
          if (free_mask(i, l) > 0.0 && col_comp[size_t(l)] < 0) {
            col_comp[size_t(l)] = comps;
            stack.push_back(l);
          }
      }
    }
    ++comps;
  }

  // dual feasibility: need s with lambda_ij + mu_j (s_row - s_col) >= 0
  // on every active entry, i.e. s_col - s_row <= lambda_ij / mu_j —
  // a difference-constraint system over the components (Bellman-Ford,
  // capped; a negative cycle just leaves some violation behind)
  Eigen::MatrixXd weight = Eigen::MatrixXd::Constant(
      comps, comps, std::numeric_limits<double>::infinity());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) {
      if (free_mask(i, j) > 0.0) continue;
      const double bound = -full(i, j) / m[j];  // lambda = -full
      const int u = row_comp[size_t(i)];
      const int v = col_comp[size_t(j)];
      if (u != v && bound < weight(u, v)) weight(u, v) = bound;
    }
  Eigen::VectorXd s = Eigen::VectorXd::Zero(comps);
  for (int round = 0; round < comps; ++round) {
    bool relaxed = false;
    for (int u = 0; u < comps; ++u)
      for (int v = 0; v < comps; ++v)
        if (std::isfinite(weight(u, v)) && s[v] > s[u] + weight(u, v) + kTol) {
          s[v] = s[u] + weight(u, v);
          relaxed = true;
        }
    if (!relaxed) break;
  }
  double worst = 0.0;
  int worst_i = -1, worst_j = -1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) {
      if (free_mask(i, j) > 0.0) continue;
      const double lambda =
          -full(i, j) +
          m[j] * (s[row_comp[size_t(i)]] - s[col_comp[size_t(j)]]);
      if (lambda < worst) {
        worst = lambda;
        worst_i = i;
        worst_j = j;
      }
    }
  if (worst < -kTol) {
    // dual step: release the most blocking active entry
    free_mask(worst_i, worst_j) = 1.0;
    continue;
  }

  *out = std::move(V);
  return true;
  }
  return false;
}

}  // namespace

ProjectionResult dykstra_project(const Eigen::MatrixXd& U, const ClassPrior& mu,
                                 int b_max, double delta_d) {
  const Eigen::Index n = U.rows();
  if (U.cols() != mu.mu.size())
    throw std::invalid_argument("dykstra_project: dimension mismatch");
  const double mu_min = mu.min();
  const double mu_max = mu.max();
  const double threshold =
      delta_d * (mu_min > 0.0
                     ? std::min(mu_max, 1.0 / (double(n) * mu_min))
                     : mu_max);

  // Classical two-set Dykstra: alternate the nonnegativity clamp (with
  // its correction Z) and the exact affine projection (a subspace, no
  // correction needed). Over-relaxed variants turned out to stall on
  // feasible-but-suboptimal pairs (V, Z), so the steps stay unrelaxed.
  Eigen::MatrixXd V = U;
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(n, mu.mu.size());
  Eigen::ArrayXXd prev_mask = Eigen::ArrayXXd::Constant(n, mu.mu.size(), -1.0);
  int b = 0;
  bool hit_max = false;
  for (;;) {
    ++b;
    const Eigen::MatrixXd Y = (V - Z).cwiseMax(0.0);
    // Dykstra identifies the face of the cone in finitely many sweeps;
    // once the current zero pattern is the right one, the projection is
    // available in closed form. Attempt the finish whenever the pattern
    // has stopped churning — a verified hit is exact, which the tail of
    // the plain iteration can only approach geometrically.
    const Eigen::ArrayXXd mask = ((V - Z).array() > 0.0).cast<double>();
    const bool settled = (mask == prev_mask).all();
    prev_mask = mask;
    if (settled || b % 10 == 0) {
      Eigen::MatrixXd exact;
      if (active_set_finish(U, mu, mask, &exact)) {
        ProjectionResult result;
        result.V = std::move(exact);
        result.iterations = b;
        result.hit_max_iter = false;
        result.residuals = check_feasibility(result.V, mu);
        return result;
      }
    }
    Z = Y - V + Z;
    const Eigen::MatrixXd next = project_affine(Y, mu);
    const double step = (next - V).norm();
    V = next;

    // a feasible iterate can still be far from the projection while Z
    // keeps moving, so require the iteration itself to have settled;
    // the final clamp shifts the marginals by roughly n * negativity,
    // so also check the residuals of the clamped candidate directly
    const double negativity = -V.minCoeff();
    if (negativity <= threshold &&
        step <= delta_d * std::max(V.norm(), 1e-12)) {
      const Feasibility feas = check_feasibility(V.cwiseMax(0.0), mu);
      if (std::max(feas.column_residual, feas.row_residual) <= kFeasTol)
        break;
    }
    if (b >= b_max) {
      hit_max = true;
      break;
    }
  }
  ProjectionResult result;
  result.V = V.cwiseMax(0.0);
  result.iterations = b;
  result.hit_max_iter = hit_max;
  result.residuals = check_feasibility(result.V, mu);
  return result;
}

ProjectionResult sinkhorn_normalize(const Eigen::MatrixXd& U,
                                    const ClassPrior& mu, int s_max,
                                    double delta_s) {
  const Eigen::Index n = U.rows();
  const Eigen::Index k = mu.mu.size();
  if (U.cols() != k)
    throw std::invalid_argument("sinkhorn_normalize: dimension mismatch");
  if (mu.min() <= 0.0)
    throw std::invalid_argument(
        "sinkhorn_normalize requires strictly positive mu");

  const Eigen::VectorXd col_target = mu.mu.cwiseProduct(mu.mu);  // mu .* mu
  const Eigen::VectorXd row_target =
      Eigen::VectorXd::Constant(n, 1.0 / double(n));

  Eigen::MatrixXd P =
      (U * mu.mu.asDiagonal()).cwiseMax(1e-20);  // strictly positive
  Eigen::VectorXd l = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd r = Eigen::VectorXd::Ones(k);

  int s = 0;
  bool hit_max = false;
  for (;;) {
    ++s;
    r = col_target.cwiseQuotient(P.transpose() * l);
    l = row_target.cwiseQuotient(P * r);
    if (!r.allFinite() || !l.allFinite())
      throw std::runtime_error("sinkhorn_normalize: non-finite scaling");

    const double col_res =
        ((P.transpose() * l).cwiseProduct(r) - col_target).cwiseAbs().maxCoeff();
    const double row_res =
        ((P * r).cwiseProduct(l) - row_target).cwiseAbs().maxCoeff();
    if (std::max(col_res, row_res) <= delta_s) break;
    if (s >= s_max) {
      hit_max = true;
      break;
    }
  }
  P = l.asDiagonal() * P * r.asDiagonal();
  ProjectionResult result;
  result.V = P * mu.mu.cwiseInverse().asDiagonal();
  if (!result.V.allFinite())
    throw std::runtime_error("sinkhorn_normalize: non-finite result");
  result.iterations = s;
  result.hit_max_iter = hit_max;
  result.residuals = check_feasibility(result.V, mu);
  return result;
}

}  // namespace lord
