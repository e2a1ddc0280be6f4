#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace lord {

/// Row-major sample matrix with optional ground-truth labels.
struct Dataset {
  Eigen::MatrixXd features;          // n x d, one sample per row
  std::optional<std::vector<int>> labels;  // values in {0..k-1}, evaluation only

  Eigen::Index n() const { return features.rows(); }
  Eigen::Index d() const { return features.cols(); }

  // Throws std::invalid_argument on any invariant violation.
  void validate() const;

  int num_classes() const;
};

// CSV loader: numeric feature columns, one sample per row. When
// `label_column` is true the final column is parsed as an integer label.
// A non-numeric first row is treated as a header and skipped.
Dataset load_csv(const std::string& path, bool label_column);

void save_csv(const Dataset& data, const std::string& path);

// Reads a single-column label file (one integer per line, optional header).
std::vector<int> load_labels(const std::string& path);

}  // namespace lord
