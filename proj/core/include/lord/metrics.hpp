#pragma once

#include <Eigen/Dense>
#include <vector>

namespace lord {

struct EvalReport {
  double acc = 0.0;
  double nmi = 0.0;
  double pur = 0.0;
  double f1 = 0.0;
  Eigen::MatrixXi confusion;  // k_pred x k_true counts
};

Eigen::MatrixXi confusion_matrix(const std::vector<int>& pred,
                                 const std::vector<int>& truth);

// Hungarian-matched accuracy: best one-to-one cluster-to-class map.
double clustering_accuracy(const std::vector<int>& pred,
                           const std::vector<int>& truth);

// NMI normalized by the arithmetic mean of the entropies; 0 when either
// labeling is degenerate (single cluster).
double nmi(const std::vector<int>& pred, const std::vector<int>& truth);

double purity(const std::vector<int>& pred, const std::vector<int>& truth);

// Pair-counting F1 over same-cluster indicator sets of the C(n,2) pairs.
double pairwise_f1(const std::vector<int>& pred,
                   const std::vector<int>& truth);

EvalReport evaluate(const std::vector<int>& pred,
                    const std::vector<int>& truth);

// IBR = 1 - H(pi)/log k, pi = counts/n. Errors on k < 2 or a zero count.
double imbalance_rate(const std::vector<long>& class_counts);

// Signed squared Pearson correlation between per-run objectives and
// ACCs. Positive when better objective (per `minimize`) aligns with
// higher ACC, negative when it runs against, 0 on zero variance.
double objective_acc_r2(const std::vector<double>& objectives,
                        const std::vector<double>& accs, bool minimize);

// Maximum-weight one-to-one assignment on a nonnegative score matrix
// (rows to columns, rows <= cols after internal padding). Exposed for
// testing against brute force.
long assignment_max_score(const Eigen::MatrixXi& scores);

}  // namespace lord
