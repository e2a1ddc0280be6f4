#pragma once

#include <Eigen/Sparse>
#include <string>

namespace lord {

/// Symmetric sparse similarity matrix with its grand sum cached.
///
/// The matrix is stored fully (both triangles) so that row access never
/// needs an implicit transpose. `allow_negative` must be set explicitly
/// for inner-product similarities; q-NN graphs are nonnegative with a
/// zero diagonal.
struct SparseSimilarity {
  Eigen::SparseMatrix<double> matrix;  // n x n, symmetric
  double total_sum = 0.0;             // 1' S 1
  bool normalized = false;            // true after S <- S / (1' S 1)
  bool allow_negative = false;

  Eigen::Index n() const { return matrix.rows(); }
  Eigen::Index nnz() const { return matrix.nonZeros(); }

  // Checks exact symmetry, finiteness and (unless allow_negative) sign.
  void validate() const;

  double frobenius_sq() const { return matrix.squaredNorm(); }
};

// Wraps an already-symmetric sparse matrix, computing total_sum.
SparseSimilarity make_similarity(Eigen::SparseMatrix<double> matrix,
                                 bool allow_negative = false);

// S <- S / (1' S 1). Errors on an all-zero matrix. Idempotent.
SparseSimilarity normalize_total(const SparseSimilarity& sim);

// Coordinate-triplet text format: header "%n nnz", then "i j value" per
// line, 0-based, upper triangle (i <= j) only.
void save_triplets(const SparseSimilarity& sim, const std::string& path);
SparseSimilarity load_triplets(const std::string& path,
                               bool allow_negative = false);

}  // namespace lord
