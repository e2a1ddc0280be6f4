#include "lord/synth.hpp"

#include <cmath>
#include <stdexcept>

#include "lord/probability.hpp"
#include "lord/rng.hpp"

namespace lord {

void MixtureSpec::validate() const {
  for (int c : counts)
    if (c <= 0) throw std::invalid_argument("mixture counts must be positive");
  for (double v : variances)
    if (v <= 0.0)
      throw std::invalid_argument("mixture variances must be positive");
}

Dataset sample_mixture(const MixtureSpec& spec) {
  spec.validate();
  const int n = spec.total();
  Dataset data;
  data.features.resize(n, 2);
  std::vector<int> labels(static_cast<size_t>(n));
  int row = 0;
  for (int component = 0; component < 4; ++component) {
    CounterRng rng(spec.seed, static_cast<std::uint64_t>(component) + 1);
    const double sd = std::sqrt(spec.variances[component]);
    for (int s = 0; s < spec.counts[component]; ++s, ++row) {
      data.features(row, 0) = spec.means[component][0] + sd * rng.normal();
      data.features(row, 1) = spec.means[component][1] + sd * rng.normal();
      labels[static_cast<size_t>(row)] = component;
    }
  }
  data.labels = std::move(labels);
  data.validate();
  return data;
}

SparseSimilarity inner_product_similarity(const Dataset& data) {
  const Eigen::MatrixXd gram = data.features * data.features.transpose();
  return make_similarity(gram.sparseView(), /*allow_negative=*/true);
}

std::vector<RobustnessRow> run_robustness_experiment(
    const RobustnessConfig& config) {
  std::vector<RobustnessRow> rows;

  std::uint64_t setting_index = 0;
  for (const auto& counts : config.count_settings) {
    MixtureSpec spec;
    spec.counts = counts;
    spec.seed = split_seed(config.seed, setting_index++);
    const Dataset data = sample_mixture(spec);
    const auto& truth = *data.labels;
    const double ibr = imbalance_rate(
        {long(counts[0]), long(counts[1]), long(counts[2]), long(counts[3])});

    const SparseSimilarity gram = inner_product_similarity(data);
    const SparseSimilarity gram_lord = normalize_total(gram);
    const SpectralBounds bounds_lord = spectral_bounds(gram_lord);
    const SpectralBounds bounds_blord = spectral_bounds(gram);

    const ClassPrior mu_star = prior_from_labels(truth, 4);
    const ClassPrior mu_zero = uniform_prior(4);

    for (Model model : {Model::kLord, Model::kBlord}) {
      for (bool use_star : {true, false}) {
        const ClassPrior& mu = use_star ? mu_star : mu_zero;
        RobustnessRow row;
        row.counts = counts;
        row.ibr = ibr;
        row.model = model;
        row.mu_star = use_star;

        SolverConfig solver;
        solver.model = model;
        solver.restarts = config.restarts;
        solver.seed = split_seed(config.seed, 1000 + setting_index);
        solver.threads = config.threads;

        if (model == Model::kLord) {
          const MultiRestartResult run =
              multi_restart(gram_lord, bounds_lord, mu, solver);
          row.objective = run.best.objective;
          row.metrics = evaluate(hard_labels(run.best.V), truth);
        } else {
          // Grid-best tau by ACC, ties to the smaller tau.
          bool have_best = false;
          for (double tau : config.tau_grid) {
            solver.tau = tau;
            const MultiRestartResult run =
                multi_restart(gram, bounds_blord, mu, solver);
            const EvalReport metrics = evaluate(hard_labels(run.best.V), truth);
            if (!have_best || metrics.acc > row.metrics.acc) {
              have_best = true;
              row.metrics = metrics;
              row.objective = run.best.objective;
              row.tau = tau;
            }
          }
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

}  // namespace lord
