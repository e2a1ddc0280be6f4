#include "lord/prior.hpp"

#include <cmath>
#include <stdexcept>

namespace lord {

ClassPrior make_prior(Eigen::VectorXd mu) {
  if (mu.size() < 1) throw std::invalid_argument("mu must be non-empty");
  if ((mu.array() < 0.0).any())
    throw std::invalid_argument("mu must be nonnegative");
  const double sq = mu.squaredNorm();
  if (std::abs(sq - 1.0) > 1e-6)
    throw std::invalid_argument("mu is not on the unit sphere: ||mu||^2 = " +
                                std::to_string(sq));
  mu /= std::sqrt(sq);
  return ClassPrior{std::move(mu)};
}

ClassPrior uniform_prior(int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  return ClassPrior{Eigen::VectorXd::Constant(k, 1.0 / std::sqrt(double(k)))};
}

ClassPrior prior_from_labels(const std::vector<int>& labels, int k) {
  if (labels.empty()) throw std::invalid_argument("empty label vector");
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
  for (int label : labels) {
    if (label < 0 || label >= k)
      throw std::invalid_argument("label outside {0..k-1}");
    counts[label] += 1.0;
  }
  Eigen::VectorXd mu =
      (counts / static_cast<double>(labels.size())).cwiseSqrt();
  mu /= mu.norm();
  return ClassPrior{std::move(mu)};
}

}  // namespace lord
