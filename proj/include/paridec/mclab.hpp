#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "paridec/decision.hpp"

namespace paridec {

// Monte Carlo test bench for data-dependent decision rules: simulate samples
// from a known data-generating process, run each rule, and score the chosen
// action against the true parameter.  Local perturbations P0 + h/sqrt(n) share
// one noise stream per replication across the whole h grid, so curves for
// different h (and the h = 0 column vs the standalone risk estimate) differ
// only through the parameter shift.

enum class DgpFamily { gaussian_mean, multinomial };

struct DgpSpec {
    DgpFamily family = DgpFamily::gaussian_mean;
    std::vector<double> P0;
    // per-observation precision for gaussian_mean; ignored for multinomial
    std::vector<std::vector<double>> info_matrix;
    std::size_t n = 0;
    std::uint64_t seed = 0;
};

void validate_dgp(const DgpSpec& dgp);

struct Sample {
    std::vector<std::vector<double>> rows;
    std::vector<double> estimate;                 // row mean
    std::vector<std::vector<double>> covariance;  // of the estimate, known-variance form
};

// Simulation noise is keyed by (dgp.seed, replication) only; the mean shift
// enters deterministically so nearby parameters see common random numbers.
Sample simulate(const DgpSpec& dgp, std::span<const double> mean, std::size_t replication);

struct RuleUnderTest {
    std::string name;
    // p_true is visible only so oracle benchmarks can cheat; honest rules
    // must ignore it.  rule_seed is a fresh stream per replication.
    std::function<int(const Sample&, std::span<const double> p_true, std::uint64_t rule_seed)>
        procedure;
};

struct MonteCarloEstimate {
    double value = 0.0;
    double se = 0.0;
};

struct RiskCurve {
    std::string rule_name;
    std::vector<std::vector<double>> h_grid;
    std::vector<MonteCarloEstimate> excess;  // sqrt(n)-scaled, one per grid point
    std::size_t reps = 0;
};

constexpr std::size_t kDefaultInnerDraws = 2000;
constexpr std::size_t kMinRiskReps = 100;
constexpr std::size_t kMinProfileReps = 1000;

// Mean of R(chosen, P0) over independent samples at P0.
MonteCarloEstimate frequentist_risk(const DgpSpec& dgp, const RuleUnderTest& rule,
                                    const RiskProfile& profile, std::size_t reps);

// Per grid point h: samples at P0 + h/sqrt(n), per-rule mean of
// sqrt(n) * (R(chosen, P_nh) - min_d R(d, P_nh)) with its standard error.
std::vector<RiskCurve> excess_risk_profile(const DgpSpec& dgp,
                                           const std::vector<RuleUnderTest>& rules,
                                           const RiskProfile& profile,
                                           const std::vector<std::vector<double>>& h_grid,
                                           std::size_t reps);

// Trapezoidal integral of the excess curve over a uniform line grid, with
// independently propagated standard error.
MonteCarloEstimate average_excess_risk(const RiskCurve& curve);

// Fraction of replications on which both rules pick the same action.
double agreement_rate(const DgpSpec& dgp, const RuleUnderTest& a, const RuleUnderTest& b,
                      std::size_t reps);

// offset + t * direction for `points` equally spaced t in [-half_width, half_width].
std::vector<std::vector<double>> make_line_grid(const std::vector<double>& offset,
                                                const std::vector<double>& direction,
                                                double half_width, std::size_t points);

// Canned rules over a shared risk profile.
RuleUnderTest make_plugin_rule(RiskProfile profile);
RuleUnderTest make_quasi_bayes_rule(RiskProfile profile, std::size_t inner_draws);
RuleUnderTest make_bootstrap_rule(RiskProfile profile, std::size_t replications);
RuleUnderTest make_oracle_rule(RiskProfile profile);
RuleUnderTest make_constant_rule(int choice);

}  // namespace paridec
