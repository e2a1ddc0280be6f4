#include "lord/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lord {
namespace {

void check_labelings(const std::vector<int>& pred,
                     const std::vector<int>& truth) {
  if (pred.empty() || truth.empty())
    throw std::invalid_argument("empty labeling");
  if (pred.size() != truth.size())
    throw std::invalid_argument("labeling length mismatch");
}

double entropy(const std::vector<long>& counts, long n) {
  double h = 0.0;
  for (long c : counts)
    if (c > 0) {
      const double p = double(c) / double(n);
      h -= p * std::log(p);
    }
  return h;
}

long pairs(long c) { return c * (c - 1) / 2; }

}  // namespace

Eigen::MatrixXi confusion_matrix(const std::vector<int>& pred,
                                 const std::vector<int>& truth) {
  check_labelings(pred, truth);
  int k_pred = 0, k_true = 0;
  for (size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] < 0 || truth[i] < 0)
      throw std::invalid_argument("negative label");
    k_pred = std::max(k_pred, pred[i] + 1);
    k_true = std::max(k_true, truth[i] + 1);
  }
  Eigen::MatrixXi confusion = Eigen::MatrixXi::Zero(k_pred, k_true);
  for (size_t i = 0; i < pred.size(); ++i) ++confusion(pred[i], truth[i]);
  return confusion;
}

// Hungarian algorithm (potentials formulation) on the square padding of
// -scores; O(k^3).
long assignment_max_score(const Eigen::MatrixXi& scores) {
  const int size = static_cast<int>(std::max(scores.rows(), scores.cols()));
  const long kInf = std::numeric_limits<long>::max() / 4;
  // cost(i, j) = -score, padded with zeros
  auto cost = [&](int i, int j) -> long {
    if (i < scores.rows() && j < scores.cols()) return -long(scores(i, j));
    return 0;
  };
  std::vector<long> u(size + 1, 0), v(size + 1, 0);
  std::vector<int> match(size + 1, 0), way(size + 1, 0);
  for (int i = 1; i <= size; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<long> minv(size + 1, kInf);
    std::vector<bool> used(size + 1, false);
    do {
      used[j0] = true;
      const int i0 = match[j0];
      long delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= size; ++j) {
        if (used[j]) continue;
        const long reduced = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (reduced < minv[j]) {
          minv[j] = reduced;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= size; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0);
  }
  long total = 0;
  for (int j = 1; j <= size; ++j) {
    const int i = match[j];
    if (i >= 1 && i <= scores.rows() && j <= scores.cols())
      total += scores(i - 1, j - 1);
  }
  return total;
}

double clustering_accuracy(const std::vector<int>& pred,
                           const std::vector<int>& truth) {
  const Eigen::MatrixXi confusion = confusion_matrix(pred, truth);
  return double(assignment_max_score(confusion)) / double(pred.size());
}

double nmi(const std::vector<int>& pred, const std::vector<int>& truth) {
  const Eigen::MatrixXi confusion = confusion_matrix(pred, truth);
  const long n = static_cast<long>(pred.size());
  std::vector<long> row_sums(confusion.rows(), 0), col_sums(confusion.cols(),
                                                            0);
  for (int i = 0; i < confusion.rows(); ++i)
    for (int j = 0; j < confusion.cols(); ++j) {
      row_sums[i] += confusion(i, j);
      col_sums[j] += confusion(i, j);
    }
  const double h_pred = entropy(row_sums, n);
  const double h_true = entropy(col_sums, n);
  if (h_pred <= 0.0 || h_true <= 0.0) return 0.0;

  double mi = 0.0;
  for (int i = 0; i < confusion.rows(); ++i)
    for (int j = 0; j < confusion.cols(); ++j) {
      const long c = confusion(i, j);
      if (c == 0) continue;
      const double p = double(c) / double(n);
      mi += p * std::log(double(c) * double(n) /
                         (double(row_sums[i]) * double(col_sums[j])));
    }
  return std::clamp(mi / (0.5 * (h_pred + h_true)), 0.0, 1.0);
}

double purity(const std::vector<int>& pred, const std::vector<int>& truth) {
  const Eigen::MatrixXi confusion = confusion_matrix(pred, truth);
  long correct = 0;
  for (int i = 0; i < confusion.rows(); ++i)
    correct += confusion.row(i).maxCoeff();
  return double(correct) / double(pred.size());
}

double pairwise_f1(const std::vector<int>& pred,
                   const std::vector<int>& truth) {
  const Eigen::MatrixXi confusion = confusion_matrix(pred, truth);
  long tp = 0, pred_pairs = 0, true_pairs = 0;
  for (int i = 0; i < confusion.rows(); ++i) {
    long row = 0;
    for (int j = 0; j < confusion.cols(); ++j) {
      tp += pairs(confusion(i, j));
      row += confusion(i, j);
    }
    pred_pairs += pairs(row);
  }
  for (int j = 0; j < confusion.cols(); ++j)
    true_pairs += pairs(long(confusion.col(j).sum()));
  if (pred_pairs == 0 || true_pairs == 0) return tp == 0 ? 0.0 : 1.0;
  const double precision = double(tp) / double(pred_pairs);
  const double recall = double(tp) / double(true_pairs);
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

EvalReport evaluate(const std::vector<int>& pred,
                    const std::vector<int>& truth) {
  EvalReport report;
  report.confusion = confusion_matrix(pred, truth);
  report.acc = clustering_accuracy(pred, truth);
  report.nmi = nmi(pred, truth);
  report.pur = purity(pred, truth);
  report.f1 = pairwise_f1(pred, truth);
  return report;
}

double imbalance_rate(const std::vector<long>& class_counts) {
  const int k = static_cast<int>(class_counts.size());
  if (k < 2) throw std::invalid_argument("imbalance_rate requires k >= 2");
  long n = 0;
  for (long c : class_counts) {
    if (c <= 0)
      throw std::invalid_argument("imbalance_rate requires positive counts");
    n += c;
  }
  return 1.0 - entropy(class_counts, n) / std::log(double(k));
}

double objective_acc_r2(const std::vector<double>& objectives,
                        const std::vector<double>& accs, bool minimize) {
  if (objectives.size() != accs.size())
    throw std::invalid_argument("series length mismatch");
  const size_t n = objectives.size();
  if (n < 3) throw std::invalid_argument("need at least 3 runs");

  double mean_obj = 0.0, mean_acc = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mean_obj += objectives[i];
    mean_acc += accs[i];
  }
  mean_obj /= double(n);
  mean_acc /= double(n);
  double cov = 0.0, var_obj = 0.0, var_acc = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double d_obj = objectives[i] - mean_obj;
    const double d_acc = accs[i] - mean_acc;
    cov += d_obj * d_acc;
    var_obj += d_obj * d_obj;
    var_acc += d_acc * d_acc;
  }
  if (var_obj == 0.0 || var_acc == 0.0) return 0.0;
  const double r = cov / std::sqrt(var_obj * var_acc);
  // Expected direction: minimized objective should anti-correlate with
  // ACC, maximized should correlate.
  const bool aligned = minimize ? (r <= 0.0) : (r >= 0.0);
  return aligned ? r * r : -r * r;
}

}  // namespace lord
