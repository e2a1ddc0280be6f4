#include <doctest.h>

#include "lord/synth.hpp"
#include "oracles.hpp"

TEST_CASE("mixture sampling is deterministic with labeled components") {
  lord::MixtureSpec spec;
  spec.counts = {5, 6, 7, 8};
  spec.seed = 99;
  const lord::Dataset a = lord::sample_mixture(spec);
  const lord::Dataset b = lord::sample_mixture(spec);
  CHECK(a.n() == 26);
  CHECK(a.d() == 2);
  CHECK((a.features - b.features).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(a.labels.has_value());
  CHECK(std::count(a.labels->begin(), a.labels->end(), 0) == 5);
  CHECK(std::count(a.labels->begin(), a.labels->end(), 3) == 8);
  CHECK(a.num_classes() == 4);

  lord::MixtureSpec other = spec;
  other.seed = 100;
  CHECK((lord::sample_mixture(other).features - a.features)
            .cwiseAbs()
            .maxCoeff() > 0.0);
}

TEST_CASE("component statistics are roughly right at scale") {
  lord::MixtureSpec spec;
  spec.counts = {4000, 4000, 4000, 4000};
  spec.seed = 7;
  const lord::Dataset data = lord::sample_mixture(spec);
  // first component: mean (-2, 2), variance 0.25
  const Eigen::MatrixXd block = data.features.topRows(4000);
  CHECK(block.col(0).mean() == doctest::Approx(-2.0).epsilon(0.03));
  CHECK(block.col(1).mean() == doctest::Approx(2.0).epsilon(0.03));
  const Eigen::VectorXd centered = block.col(0).array() - block.col(0).mean();
  CHECK(centered.squaredNorm() / 4000.0 == doctest::Approx(0.25).epsilon(0.1));
}

TEST_CASE("inner-product similarity matches the double-loop oracle") {
  lord::MixtureSpec spec;
  spec.counts = {2, 1, 1, 1};
  spec.seed = 3;
  const lord::Dataset data = lord::sample_mixture(spec);
  const lord::SparseSimilarity sim = lord::inner_product_similarity(data);
  CHECK(sim.allow_negative);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      CHECK(sim.matrix.coeff(i, j) ==
            doctest::Approx(data.features.row(i).dot(data.features.row(j)))
                .epsilon(1e-15));
}

TEST_CASE("mixture spec validation") {
  lord::MixtureSpec spec;
  spec.counts[2] = 0;
  CHECK_THROWS(lord::sample_mixture(spec));
  lord::MixtureSpec bad_var;
  bad_var.variances[0] = -1.0;
  CHECK_THROWS(lord::sample_mixture(bad_var));
}
