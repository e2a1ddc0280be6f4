#include "lord/probability.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lord/projection.hpp"

namespace lord {

Eigen::MatrixXd class_posteriors(const Eigen::MatrixXd& V,
                                 const ClassPrior& mu) {
  if (V.cols() != mu.mu.size())
    throw std::invalid_argument("class_posteriors: dimension mismatch");
  const Feasibility f = check_feasibility(V, mu);
  if (!f.within()) {
    std::ostringstream msg;
    msg << "class_posteriors: V is not feasible (negativity "
        << f.max_negativity << ", column residual " << f.column_residual
        << ", row residual " << f.row_residual << ")";
    throw std::invalid_argument(msg.str());
  }
  return double(V.rows()) * (V * mu.mu.asDiagonal());
}

Eigen::MatrixXd pairwise_coassignment(const Eigen::MatrixXd& V,
                                      const ClassPrior& mu,
                                      Eigen::Index cap) {
  if (V.rows() > cap)
    throw std::invalid_argument(
        "pairwise_coassignment: n exceeds the dense cap; evaluate row "
        "blocks of P P' instead");
  const Eigen::MatrixXd P = class_posteriors(V, mu);
  return P * P.transpose();
}

std::vector<int> hard_labels(const Eigen::MatrixXd& V) {
  std::vector<int> labels(static_cast<size_t>(V.rows()));
  for (Eigen::Index i = 0; i < V.rows(); ++i) {
    int arg = 0;
    double best = V(i, 0);
    for (Eigen::Index j = 1; j < V.cols(); ++j) {
      if (V(i, j) > best) {  // strict: ties keep the lowest index
        best = V(i, j);
        arg = static_cast<int>(j);
      }
    }
    labels[static_cast<size_t>(i)] = arg;
  }
  return labels;
}

Eigen::VectorXd posterior_entropy(const Eigen::MatrixXd& P) {
  Eigen::VectorXd entropy = Eigen::VectorXd::Zero(P.rows());
  for (Eigen::Index i = 0; i < P.rows(); ++i)
    for (Eigen::Index j = 0; j < P.cols(); ++j) {
      const double p = P(i, j);
      if (p > 0.0) entropy[i] -= p * std::log(p);
    }
  return entropy;
}

}  // namespace lord
