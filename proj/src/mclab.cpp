#include "paridec/mclab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "paridec/errors.hpp"
#include "paridec/posterior.hpp"
#include "paridec/rng.hpp"

namespace paridec {

namespace {

constexpr std::uint64_t kSampleSalt = 0x73616d706c65;  // noise streams
constexpr std::uint64_t kRuleSalt = 0x72756c65;        // rule-internal streams

constexpr double kProbTol = 1e-9;

std::uint64_t rule_stream(const DgpSpec& dgp, std::size_t replication,
                          const RuleUnderTest& rule) {
    return derive_seed(dgp.seed, {kRuleSalt, static_cast<std::uint64_t>(replication),
                                  fnv1a(rule.name)});
}

int run_rule(const RuleUnderTest& rule, const Sample& sample, std::span<const double> p_true,
             std::uint64_t rule_seed, std::size_t replication, const ChoiceSet& choices) {
    int chosen = -1;
    try {
        chosen = rule.procedure(sample, p_true, rule_seed);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw NumericalError("rule \"" + rule.name + "\" failed on replication " +
                             std::to_string(replication) + ": " + e.what());
    }
    if (chosen < 0 || chosen >= choices.size)
        throw NumericalError("rule \"" + rule.name + "\" returned choice " +
                             std::to_string(chosen) + " on replication " +
                             std::to_string(replication));
    return chosen;
}

double pointwise_min_risk(const RiskProfile& profile, std::span<const double> P) {
    double best = profile.eval(0, P);
    for (int d = 1; d < profile.choice_set.size; ++d) best = std::min(best, profile.eval(d, P));
    if (!std::isfinite(best)) throw NumericalError("risk profile not finite at evaluation point");
    return best;
}

MonteCarloEstimate summarize(const std::vector<double>& values) {
    KahanSum total;
    for (double v : values) total.add(v);
    const auto reps = static_cast<double>(values.size());
    const double mean = total.value() / reps;
    KahanSum squares;
    for (double v : values) squares.add((v - mean) * (v - mean));
    const double variance = values.size() > 1 ? squares.value() / (reps * (reps - 1.0)) : 0.0;
    return {mean, std::sqrt(std::max(0.0, variance))};
}

std::vector<std::vector<double>> inverse_root_from_precision(
    const std::vector<std::vector<double>>& info) {
    const auto L = psd_cholesky(info);
    const std::size_t k = L.size();
    // M = L^{-T}: M M^T equals the inverse of info, which is all sampling needs
    std::vector<std::vector<double>> m(k, std::vector<double>(k, 0.0));
    for (std::size_t col = 0; col < k; ++col) {
        std::vector<double> e(k, 0.0);
        e[col] = 1.0;
        for (std::size_t i = k; i-- > 0;) {
            double v = e[i];
            for (std::size_t j = i + 1; j < k; ++j) v -= L[j][i] * m[j][col];
            if (L[i][i] == 0.0)
                throw NumericalError("information matrix is singular; cannot draw noise");
            m[i][col] = v / L[i][i];
        }
    }
    return m;
}

std::vector<std::vector<double>> scale_matrix(const std::vector<std::vector<double>>& a,
                                              double factor) {
    auto out = a;
    for (auto& row : out)
        for (double& v : row) v *= factor;
    return out;
}

std::vector<std::vector<double>> precision_inverse(const std::vector<std::vector<double>>& info) {
    const auto m = inverse_root_from_precision(info);
    const std::size_t k = m.size();
    std::vector<std::vector<double>> sigma(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            double v = 0.0;
            for (std::size_t t = 0; t < k; ++t) v += m[i][t] * m[j][t];
            sigma[i][j] = v;
        }
    return sigma;
}

}  // namespace

void validate_dgp(const DgpSpec& dgp) {
    if (dgp.P0.empty()) throw InputError("DGP needs a nonempty parameter vector");
    if (dgp.n < 1) throw InputError("DGP sample size must be at least 1");
    for (double v : dgp.P0)
        if (!std::isfinite(v)) throw InputError("DGP parameter vector must be finite");
    if (dgp.family == DgpFamily::gaussian_mean) {
        const std::size_t k = dgp.P0.size();
        if (dgp.info_matrix.size() != k)
            throw InputError("information matrix must be square with one row per coordinate");
        for (const auto& row : dgp.info_matrix) {
            if (row.size() != k)
                throw InputError("information matrix must be square with one row per coordinate");
            for (double v : row)
                if (!std::isfinite(v)) throw InputError("information matrix must be finite");
        }
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j)
                if (std::abs(dgp.info_matrix[i][j] - dgp.info_matrix[j][i]) >
                    1e-12 * std::max(1.0, std::abs(dgp.info_matrix[i][j])))
                    throw InputError("information matrix must be symmetric");
    } else {
        double total = 0.0;
        for (double p : dgp.P0) {
            if (p < 0.0) throw InputError("multinomial cell probabilities must be nonnegative");
            total += p;
        }
        if (std::abs(total - 1.0) > kProbTol)
            throw InputError("multinomial cell probabilities must sum to 1");
    }
}

Sample simulate(const DgpSpec& dgp, std::span<const double> mean, std::size_t replication) {
    const std::size_t k = dgp.P0.size();
    if (mean.size() != k) throw InputError("simulation mean has wrong dimension");
    Rng rng(derive_seed(dgp.seed, {kSampleSalt, static_cast<std::uint64_t>(replication)}));

    Sample sample;
    sample.rows.assign(dgp.n, std::vector<double>(k, 0.0));
    sample.estimate.assign(k, 0.0);

    if (dgp.family == DgpFamily::gaussian_mean) {
        static thread_local std::vector<std::vector<double>> cached_info;
        static thread_local std::vector<std::vector<double>> cached_root;
        static thread_local std::vector<std::vector<double>> cached_sigma;
        if (cached_info != dgp.info_matrix) {
            cached_root = inverse_root_from_precision(dgp.info_matrix);
            cached_sigma = precision_inverse(dgp.info_matrix);
            cached_info = dgp.info_matrix;
        }
        std::vector<double> z(k);
        std::vector<KahanSum> column(k);
        for (std::size_t i = 0; i < dgp.n; ++i) {
            for (std::size_t t = 0; t < k; ++t) z[t] = rng.normal();
            auto& row = sample.rows[i];
            for (std::size_t a = 0; a < k; ++a) {
                double noise = 0.0;
                for (std::size_t t = 0; t < k; ++t) noise += cached_root[a][t] * z[t];
                row[a] = mean[a] + noise;
                column[a].add(row[a]);
            }
        }
        const auto n = static_cast<double>(dgp.n);
        for (std::size_t a = 0; a < k; ++a) sample.estimate[a] = column[a].value() / n;
        sample.covariance = scale_matrix(cached_sigma, 1.0 / n);
        return sample;
    }

    std::vector<double> cumulative(k);
    double running = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
        if (mean[a] < -kProbTol)
            throw DomainError("perturbed cell probability " + std::to_string(a) + " is negative");
        running += std::max(0.0, mean[a]);
        cumulative[a] = running;
    }
    if (std::abs(running - 1.0) > kProbTol)
        throw DomainError("perturbed cell probabilities sum to " + std::to_string(running));
    std::vector<double> freq(k, 0.0);
    for (std::size_t i = 0; i < dgp.n; ++i) {
        const double u = rng.uniform() * running;
        const std::size_t cell =
            std::lower_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin();
        const std::size_t at = std::min(cell, k - 1);
        sample.rows[i][at] = 1.0;
        freq[at] += 1.0;
    }
    const auto n = static_cast<double>(dgp.n);
    for (std::size_t a = 0; a < k; ++a) sample.estimate[a] = freq[a] / n;
    sample.covariance.assign(k, std::vector<double>(k, 0.0));
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b)
            sample.covariance[a][b] =
                (a == b ? sample.estimate[a] * (1.0 - sample.estimate[a])
                        : -sample.estimate[a] * sample.estimate[b]) /
                n;
    return sample;
}

MonteCarloEstimate frequentist_risk(const DgpSpec& dgp, const RuleUnderTest& rule,
                                    const RiskProfile& profile, std::size_t reps) {
    validate_dgp(dgp);
    if (reps < kMinRiskReps)
        throw InputError("frequentist_risk needs at least " + std::to_string(kMinRiskReps) +
                         " replications");
    if (!rule.procedure) throw InputError("rule \"" + rule.name + "\" has no procedure");
    std::vector<double> risks(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        const Sample sample = simulate(dgp, dgp.P0, r);
        const int chosen = run_rule(rule, sample, dgp.P0, rule_stream(dgp, r, rule), r,
                                    profile.choice_set);
        risks[r] = profile.eval(chosen, dgp.P0);
        if (!std::isfinite(risks[r]))
            throw NumericalError("risk not finite on replication " + std::to_string(r));
    }
    return summarize(risks);
}

std::vector<RiskCurve> excess_risk_profile(const DgpSpec& dgp,
                                           const std::vector<RuleUnderTest>& rules,
                                           const RiskProfile& profile,
                                           const std::vector<std::vector<double>>& h_grid,
                                           std::size_t reps) {
    validate_dgp(dgp);
    if (rules.empty()) throw InputError("no rules to profile");
    if (h_grid.empty()) throw InputError("empty perturbation grid");
    if (reps < kMinProfileReps)
        throw InputError("excess_risk_profile needs at least " + std::to_string(kMinProfileReps) +
                         " replications");
    const std::size_t k = dgp.P0.size();
    for (const auto& h : h_grid)
        if (h.size() != k) throw InputError("perturbation vectors must match the parameter size");
    for (const auto& rule : rules)
        if (!rule.procedure) throw InputError("rule \"" + rule.name + "\" has no procedure");

    const double root_n = std::sqrt(static_cast<double>(dgp.n));
    std::vector<RiskCurve> curves(rules.size());
    for (std::size_t q = 0; q < rules.size(); ++q) {
        curves[q].rule_name = rules[q].name;
        curves[q].h_grid = h_grid;
        curves[q].reps = reps;
        curves[q].excess.reserve(h_grid.size());
    }

    std::vector<double> p_nh(k);
    std::vector<std::vector<double>> per_rule(rules.size(), std::vector<double>(reps));
    for (const auto& h : h_grid) {
        for (std::size_t a = 0; a < k; ++a) p_nh[a] = dgp.P0[a] + h[a] / root_n;
        const double min_risk = pointwise_min_risk(profile, p_nh);
        for (std::size_t r = 0; r < reps; ++r) {
            const Sample sample = simulate(dgp, p_nh, r);
            for (std::size_t q = 0; q < rules.size(); ++q) {
                const int chosen = run_rule(rules[q], sample, p_nh,
                                            rule_stream(dgp, r, rules[q]), r, profile.choice_set);
                per_rule[q][r] = root_n * (profile.eval(chosen, p_nh) - min_risk);
            }
        }
        for (std::size_t q = 0; q < rules.size(); ++q)
            curves[q].excess.push_back(summarize(per_rule[q]));
    }
    return curves;
}

MonteCarloEstimate average_excess_risk(const RiskCurve& curve) {
    const std::size_t points = curve.h_grid.size();
    if (points != curve.excess.size())
        throw InputError("curve grid and excess lengths disagree");
    if (points < 2) throw InputError("integration needs at least 2 grid points");
    const std::size_t k = curve.h_grid.front().size();
    std::vector<double> step(k);
    for (std::size_t a = 0; a < k; ++a) step[a] = curve.h_grid[1][a] - curve.h_grid[0][a];
    double step_norm_sq = 0.0;
    for (double s : step) step_norm_sq += s * s;
    if (step_norm_sq == 0.0) throw InputError("grid points must be distinct");
    for (std::size_t g = 2; g < points; ++g)
        for (std::size_t a = 0; a < k; ++a) {
            const double d = curve.h_grid[g][a] - curve.h_grid[g - 1][a];
            if (std::abs(d - step[a]) > 1e-9 * std::max(1.0, std::abs(step[a])))
                throw InputError("integration grid is not uniform");
        }
    const double delta = std::sqrt(step_norm_sq);
    KahanSum total;
    double var = 0.0;
    for (std::size_t g = 0; g < points; ++g) {
        const double w = (g == 0 || g + 1 == points) ? 0.5 : 1.0;
        total.add(w * curve.excess[g].value);
        var += (w * curve.excess[g].se) * (w * curve.excess[g].se);
    }
    return {delta * total.value(), delta * std::sqrt(var)};
}

double agreement_rate(const DgpSpec& dgp, const RuleUnderTest& a, const RuleUnderTest& b,
                      std::size_t reps) {
    validate_dgp(dgp);
    if (reps < kMinProfileReps)
        throw InputError("agreement_rate needs at least " + std::to_string(kMinProfileReps) +
                         " replications");
    if (!a.procedure || !b.procedure) throw InputError("agreement_rate rules need procedures");
    const ChoiceSet unchecked{std::numeric_limits<int>::max()};
    std::size_t agree = 0;
    for (std::size_t r = 0; r < reps; ++r) {
        const Sample sample = simulate(dgp, dgp.P0, r);
        const int ca = run_rule(a, sample, dgp.P0, rule_stream(dgp, r, a), r, unchecked);
        const int cb = run_rule(b, sample, dgp.P0, rule_stream(dgp, r, b), r, unchecked);
        if (ca == cb) ++agree;
    }
    return static_cast<double>(agree) / static_cast<double>(reps);
}

std::vector<std::vector<double>> make_line_grid(const std::vector<double>& offset,
                                                const std::vector<double>& direction,
                                                double half_width, std::size_t points) {
    if (offset.size() != direction.size())
        throw InputError("grid offset and direction must have the same dimension");
    if (offset.empty()) throw InputError("grid needs a nonempty direction");
    if (points < 2) throw InputError("grid needs at least 2 points");
    if (!(half_width > 0.0)) throw InputError("grid half width must be positive");
    std::vector<std::vector<double>> grid(points, std::vector<double>(offset.size()));
    for (std::size_t g = 0; g < points; ++g) {
        const double t = -half_width + 2.0 * half_width * static_cast<double>(g) /
                                           static_cast<double>(points - 1);
        for (std::size_t a = 0; a < offset.size(); ++a)
            grid[g][a] = offset[a] + t * direction[a];
    }
    return grid;
}

RuleUnderTest make_plugin_rule(RiskProfile profile) {
    return {"plug-in", [profile = std::move(profile)](const Sample& sample,
                                                      std::span<const double>, std::uint64_t) {
                ReducedForm rf{sample.estimate, sample.covariance};
                return plugin_decision(profile, rf).chosen;
            }};
}

RuleUnderTest make_quasi_bayes_rule(RiskProfile profile, std::size_t inner_draws) {
    return {"quasi-bayes",
            [profile = std::move(profile), inner_draws](const Sample& sample,
                                                        std::span<const double>,
                                                        std::uint64_t rule_seed) {
                GaussianQuasiPosterior posterior{sample.estimate, sample.covariance,
                                                 static_cast<int>(inner_draws), rule_seed};
                return averaged_decision(profile, sample_gaussian(posterior)).chosen;
            }};
}

RuleUnderTest make_bootstrap_rule(RiskProfile profile, std::size_t replications) {
    return {"bootstrap",
            [profile = std::move(profile), replications](const Sample& sample,
                                                         std::span<const double>,
                                                         std::uint64_t rule_seed) {
                BootstrapPlan plan;
                plan.dataset = sample.rows;
                plan.estimator = [](const std::vector<std::vector<double>>& rows) {
                    const std::size_t k = rows.front().size();
                    std::vector<KahanSum> column(k);
                    for (const auto& row : rows)
                        for (std::size_t a = 0; a < k; ++a) column[a].add(row[a]);
                    std::vector<double> mean(k);
                    for (std::size_t a = 0; a < k; ++a)
                        mean[a] = column[a].value() / static_cast<double>(rows.size());
                    return mean;
                };
                plan.replications = replications;
                plan.seed = rule_seed;
                return averaged_decision(profile, bootstrap(plan)).chosen;
            }};
}

RuleUnderTest make_oracle_rule(RiskProfile profile) {
    return {"oracle", [profile = std::move(profile)](const Sample&, std::span<const double> p_true,
                                                     std::uint64_t) {
                return oracle_decision(profile, p_true).chosen;
            }};
}

RuleUnderTest make_constant_rule(int choice) {
    return {"constant-" + std::to_string(choice),
            [choice](const Sample&, std::span<const double>, std::uint64_t) { return choice; }};
}

}  // namespace paridec
