#include "lord/similarity.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace lord {

void SparseSimilarity::validate() const {
  if (matrix.rows() != matrix.cols())
    throw std::invalid_argument("similarity matrix must be square");
  for (int outer = 0; outer < matrix.outerSize(); ++outer) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(matrix, outer); it;
         ++it) {
      if (!std::isfinite(it.value()))
        throw std::invalid_argument("non-finite similarity value");
      if (!allow_negative && it.value() < 0.0)
        throw std::invalid_argument(
            "negative similarity value without allow_negative");
      if (matrix.coeff(it.col(), it.row()) != it.value())
        throw std::invalid_argument("similarity matrix is not symmetric");
    }
  }
}

SparseSimilarity make_similarity(Eigen::SparseMatrix<double> matrix,
                                 bool allow_negative) {
  SparseSimilarity sim;
  matrix.makeCompressed();
  sim.matrix = std::move(matrix);
  sim.allow_negative = allow_negative;
  sim.total_sum = sim.matrix.sum();
  sim.validate();
  return sim;
}

SparseSimilarity normalize_total(const SparseSimilarity& sim) {
  if (sim.total_sum <= 0.0)
    throw std::invalid_argument("cannot normalize: 1'S1 <= 0");
  SparseSimilarity out = sim;
  out.matrix *= 1.0 / sim.total_sum;
  out.total_sum = 1.0;
  out.normalized = true;
  return out;
}

void save_triplets(const SparseSimilarity& sim, const std::string& path) {
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write graph file: " + path);
  file.precision(17);
  Eigen::Index upper = 0;
  for (int outer = 0; outer < sim.matrix.outerSize(); ++outer)
    for (Eigen::SparseMatrix<double>::InnerIterator it(sim.matrix, outer); it;
         ++it)
      if (it.row() <= it.col()) ++upper;
  file << '%' << sim.n() << ' ' << upper << '\n';
  for (int outer = 0; outer < sim.matrix.outerSize(); ++outer)
    for (Eigen::SparseMatrix<double>::InnerIterator it(sim.matrix, outer); it;
         ++it)
      if (it.row() <= it.col())
        file << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

SparseSimilarity load_triplets(const std::string& path, bool allow_negative) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open graph file: " + path);
  std::string header;
  if (!std::getline(file, header) || header.empty() || header[0] != '%')
    throw std::runtime_error("missing '%n nnz' header in " + path);
  std::stringstream header_stream(header.substr(1));
  Eigen::Index n = 0, nnz = 0;
  if (!(header_stream >> n >> nnz) || n <= 0)
    throw std::runtime_error("malformed graph header in " + path);

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<size_t>(2 * nnz));
  Eigen::Index i = 0, j = 0;
  double value = 0.0;
  Eigen::Index read = 0;
  while (file >> i >> j >> value) {
    if (i < 0 || j < 0 || i >= n || j >= n || i > j)
      throw std::runtime_error("invalid triplet in " + path);
    triplets.emplace_back(i, j, value);
    if (i != j) triplets.emplace_back(j, i, value);
    ++read;
  }
  if (read != nnz)
    throw std::runtime_error("triplet count does not match header in " + path);
  Eigen::SparseMatrix<double> matrix(n, n);
  matrix.setFromTriplets(triplets.begin(), triplets.end());
  return make_similarity(std::move(matrix), allow_negative);
}

}  // namespace lord
