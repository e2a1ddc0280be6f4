#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "lord/graph.hpp"
#include "lord/rng.hpp"
#include "oracles.hpp"

namespace {

lord::Dataset random_points(int n, int d, std::uint64_t seed) {
  lord::CounterRng rng(seed, 5);
  lord::Dataset data;
  data.features.resize(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) data.features(i, j) = rng.normal();
  return data;
}

// Direct dense computation of the self-tuned weights, masked by the
// q-NN union, mirroring nothing of the production code path.
Eigen::MatrixXd dense_graph_oracle(const Eigen::MatrixXd& X, int q) {
  const int n = int(X.rows());
  Eigen::MatrixXd dist2(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      dist2(i, j) = (X.row(i) - X.row(j)).squaredNorm();

  auto neighbors = [&](int i, int count) {
    std::vector<int> order;
    for (int j = 0; j < n; ++j)
      if (j != i) order.push_back(j);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      if (dist2(i, a) != dist2(i, b)) return dist2(i, a) < dist2(i, b);
      return a < b;
    });
    order.resize(size_t(count));
    return order;
  };

  Eigen::VectorXd sigma(n);
  for (int i = 0; i < n; ++i)
    sigma[i] = std::sqrt(dist2(i, neighbors(i, 7).back()));

  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j : neighbors(i, q)) {
      const double w = std::exp(-dist2(i, j) / (sigma[i] * sigma[j]));
      S(i, j) = w;
      S(j, i) = w;
    }
  return S;
}

}  // namespace

TEST_CASE("default neighbor count follows floor(log2 n) + 1") {
  CHECK(lord::default_neighbor_count(1000) == 10);
  CHECK(lord::default_neighbor_count(8) == 4);
  CHECK(lord::default_neighbor_count(1024) == 11);
}

TEST_CASE("two separated 4-point clusters with q=3 give an exact 2-block graph") {
  lord::Dataset data;
  data.features.resize(8, 2);
  data.features << 0, 0, 0.1, 0, 0, 0.1, 0.1, 0.1,  //
      100, 100, 100.1, 100, 100, 100.1, 100.1, 100.1;
  const lord::SparseSimilarity sim = lord::build_knn_graph(data, 3);
  const Eigen::MatrixXd S = oracle::dense(sim);
  CHECK(S.topRightCorner(4, 4).cwiseAbs().maxCoeff() == 0.0);
  CHECK(S.bottomLeftCorner(4, 4).cwiseAbs().maxCoeff() == 0.0);
  CHECK(S.topLeftCorner(4, 4).cwiseAbs().maxCoeff() > 0.0);
  CHECK(S.diagonal().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("graph weights match the dense pairwise oracle") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const lord::Dataset data = random_points(24, 3, seed);
    const int q = lord::default_neighbor_count(24);  // 5
    const lord::SparseSimilarity sim = lord::build_knn_graph(data);
    const Eigen::MatrixXd expected = dense_graph_oracle(data.features, q);
    CHECK((oracle::dense(sim) - expected).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("graph construction validates its input") {
  CHECK_THROWS_AS(lord::build_knn_graph(random_points(7, 2, 1)),
                  std::invalid_argument);

  // sigma vanishes only when the 7th nearest neighbor coincides, so a
  // single duplicate pair is fine but eight copies are not
  lord::Dataset dup = random_points(12, 2, 4);
  for (int i = 4; i < 12; ++i) dup.features.row(i) = dup.features.row(3);
  try {
    lord::build_knn_graph(dup);
    FAIL("expected a duplicate-point error");
  } catch (const std::invalid_argument& error) {
    CHECK(std::string(error.what()).find("sigma is zero") !=
          std::string::npos);
  }
}

TEST_CASE("spectral bounds agree with dense eigendecomposition") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const bool negatives = seed % 2 == 0;
    const lord::SparseSimilarity sim =
        oracle::random_similarity(30, seed, negatives);
    const lord::SpectralBounds bounds = lord::spectral_bounds(sim);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(oracle::dense(sim));
    CHECK(bounds.lambda_max ==
          doctest::Approx(eig.eigenvalues().maxCoeff()).epsilon(1e-6));
    CHECK(bounds.lambda_min ==
          doctest::Approx(eig.eigenvalues().minCoeff()).epsilon(1e-6));
  }
}

TEST_CASE("spectral bounds handle a plus-minus-one swap matrix") {
  // S = [[0, 1], [1, 0]] blocks: eigenvalues exactly +-1, a tie in
  // magnitude that defeats unshifted power iteration.
  Eigen::SparseMatrix<double> matrix(4, 4);
  std::vector<Eigen::Triplet<double>> t = {{0, 1, 1.0}, {1, 0, 1.0},
                                           {2, 3, 1.0}, {3, 2, 1.0}};
  matrix.setFromTriplets(t.begin(), t.end());
  const lord::SpectralBounds bounds =
      lord::spectral_bounds(lord::make_similarity(std::move(matrix)));
  CHECK(bounds.lambda_max == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(bounds.lambda_min == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("block diagonality metric matches the dense Laplacian oracle") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const lord::SparseSimilarity sim = oracle::random_similarity(40, seed);
    const Eigen::MatrixXd S = oracle::dense(sim);
    Eigen::MatrixXd lap = -S;
    lap.diagonal() += S.rowwise().sum();
    for (int k : {2, 4}) {
      const double expected = oracle::kyfan(S, k) / lap.trace();
      CHECK(lord::block_diagonality_metric(sim, k) ==
            doctest::Approx(std::clamp(expected, 0.0, 1.0)).epsilon(1e-6));
    }
  }
}

TEST_CASE("block metric vanishes on an exactly 2-block graph") {
  lord::Dataset data;
  data.features.resize(8, 2);
  data.features << 0, 0, 1, 0, 0, 1, 1, 1, 50, 50, 51, 50, 50, 51, 51, 51;
  const lord::SparseSimilarity sim = lord::build_knn_graph(data, 3);
  CHECK(lord::block_diagonality_metric(sim, 2) <= 1e-10);
  CHECK(std::abs(oracle::kyfan(oracle::dense(sim), 2)) <= 1e-10);
}

TEST_CASE("kyfan_block_norm matches the oracle and rejects big inputs") {
  const lord::SparseSimilarity sim = oracle::random_similarity(25, 9);
  const Eigen::MatrixXd S = oracle::dense(sim);
  CHECK(lord::kyfan_block_norm(S, 3) ==
        doctest::Approx(oracle::kyfan(S, 3)).epsilon(1e-12));
  CHECK_THROWS(lord::kyfan_block_norm(Eigen::MatrixXd::Zero(501, 501), 2));
}

TEST_CASE("normalize_total scales the grand sum to one, idempotently") {
  const lord::SparseSimilarity sim = oracle::random_similarity(20, 11);
  const lord::SparseSimilarity normed = lord::normalize_total(sim);
  CHECK(Eigen::MatrixXd(normed.matrix).sum() == doctest::Approx(1.0));
  CHECK(normed.normalized);
  const lord::SparseSimilarity twice = lord::normalize_total(normed);
  CHECK((Eigen::MatrixXd(twice.matrix) - Eigen::MatrixXd(normed.matrix))
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("triplet files round-trip exactly") {
  const lord::SparseSimilarity sim = oracle::random_similarity(15, 21);
  const std::string path = "roundtrip_graph.txt";
  lord::save_triplets(sim, path);
  const lord::SparseSimilarity loaded = lord::load_triplets(path);
  CHECK(loaded.n() == sim.n());
  CHECK((oracle::dense(loaded) - oracle::dense(sim)).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK(loaded.total_sum == doctest::Approx(sim.total_sum));
  std::remove(path.c_str());
}
