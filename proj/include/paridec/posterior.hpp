#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "paridec/decision.hpp"

// Draw-set generators: Gaussian limited-information quasi-posterior (flat
// prior), Dirichlet posterior for multinomial cells, and the nonparametric
// bootstrap of an estimator.  Every draw derives its own stream from
// (seed, draw index), so outputs are bit-identical regardless of evaluation
// order or thread count.

namespace paridec {

inline constexpr int kDefaultDecisionDraws = 10'000;
inline constexpr int kAcceptanceDraws = 200'000;

struct GaussianQuasiPosterior {
    std::vector<double> center;
    std::vector<std::vector<double>> covariance;
    int draw_count = kDefaultDecisionDraws;
    std::uint64_t seed = 0;
};

DrawSet sample_gaussian(const GaussianQuasiPosterior& gqp);

struct MultinomialPosterior {
    std::vector<double> counts;       // nonnegative per cell
    std::vector<double> prior_alpha;  // positive per cell
};

// Dirichlet(prior_alpha + counts) draws on the simplex.
DrawSet sample_dirichlet(const MultinomialPosterior& mp, int draw_count, std::uint64_t seed);

struct BootstrapPlan {
    std::vector<std::vector<double>> dataset;
    std::function<std::vector<double>(const std::vector<std::vector<double>>&)> estimator;
    int replications = 1000;
    std::uint64_t seed = 0;
};

// n-out-of-n resampling with replacement.  The estimator must not depend on
// row order; this is checked once against a shuffled copy of the dataset.
DrawSet bootstrap(const BootstrapPlan& plan);

// Lower-triangular L with L L^T ~= a for PSD a; zero pivots are tolerated,
// near-PSD matrices get one jitter retry of 1e-10 * trace / K on the diagonal.
std::vector<std::vector<double>> psd_cholesky(const std::vector<std::vector<double>>& a);

}  // namespace paridec
