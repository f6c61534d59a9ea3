#include "paridec/decision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "paridec/errors.hpp"
#include "paridec/rng.hpp"

namespace paridec {

namespace {

void require_choice_set(const RiskProfile& profile) {
    if (profile.choice_set.size < 2)
        throw InputError("choice set must contain at least 2 choices, got " +
                         std::to_string(profile.choice_set.size));
    if (!profile.eval) throw InputError("risk profile has no eval function");
    if (profile.tie_preference &&
        (*profile.tie_preference < 0 || *profile.tie_preference >= profile.choice_set.size))
        throw InputError("tie preference outside choice set");
}

std::vector<double> pointwise_risks(const RiskProfile& profile, std::span<const double> P) {
    std::vector<double> risks(profile.choice_set.size);
    for (int d = 0; d < profile.choice_set.size; ++d) {
        risks[d] = profile.eval(d, P);
        if (!std::isfinite(risks[d]))
            throw NumericalError("non-finite risk for choice " + std::to_string(d));
    }
    return risks;
}

}  // namespace

std::string_view to_string(DrawSource source) {
    switch (source) {
        case DrawSource::posterior: return "posterior";
        case DrawSource::quasi_posterior: return "quasi-posterior";
        case DrawSource::bootstrap: return "bootstrap";
        case DrawSource::dirichlet: return "dirichlet";
    }
    return "unknown";
}

std::string averaged_rule_name(DrawSource source) {
    switch (source) {
        case DrawSource::posterior: return "bayes";
        case DrawSource::quasi_posterior: return "quasi-bayes";
        case DrawSource::bootstrap: return "bootstrap";
        case DrawSource::dirichlet: return "dirichlet-bayes";
    }
    return "averaged";
}

bool risks_tied(double a, double b) {
    return std::abs(a - b) <= kTieTolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

DecisionReport select_decision(const ChoiceSet& choices, std::vector<double> risks,
                               const TieRule& tie, const std::optional<int>& tie_preference,
                               std::string rule_name) {
    if (static_cast<int>(risks.size()) != choices.size)
        throw InputError("risk vector length does not match choice set size");
    const int min_index =
        static_cast<int>(std::min_element(risks.begin(), risks.end()) - risks.begin());
    std::vector<int> tied_set;
    for (int d = 0; d < static_cast<int>(risks.size()); ++d)
        if (risks_tied(risks[d], risks[min_index])) tied_set.push_back(d);

    int chosen = tied_set.front();
    if (tied_set.size() > 1) {
        if (tie.randomized) {
            Rng rng(tie.seed);
            chosen = tied_set[rng.bounded(tied_set.size())];
        } else if (tie_preference &&
                   std::find(tied_set.begin(), tied_set.end(), *tie_preference) !=
                       tied_set.end()) {
            chosen = *tie_preference;
        }
    }

    DecisionReport report;
    report.chosen = chosen;
    report.averaged_risks = std::move(risks);
    report.tie_flag = tied_set.size() > 1;
    report.rule_name = std::move(rule_name);
    report.tie_rule = tie.describe();
    return report;
}

std::string TieRule::describe() const {
    if (!randomized) return "lowest-index";
    return "randomized(" + std::to_string(seed) + ")";
}

void validate_reduced_form(const ReducedForm& rf) {
    const std::size_t k = rf.estimate.size();
    if (k == 0) throw InputError("reduced form estimate is empty");
    if (rf.covariance.size() != k)
        throw InputError("covariance has " + std::to_string(rf.covariance.size()) +
                         " rows for a length-" + std::to_string(k) + " estimate");
    for (const auto& row : rf.covariance)
        if (row.size() != k) throw InputError("covariance is not square");
    for (std::size_t i = 0; i < k; ++i) {
        if (rf.covariance[i][i] < 0.0)
            throw InputError("covariance diagonal negative at index " + std::to_string(i));
        for (std::size_t j = i + 1; j < k; ++j) {
            const double a = rf.covariance[i][j];
            const double b = rf.covariance[j][i];
            if (std::abs(a - b) > 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}))
                throw InputError("covariance asymmetric at (" + std::to_string(i) + "," +
                                 std::to_string(j) + ")");
        }
    }
}

void validate_draw_set(const DrawSet& draws) {
    if (draws.draws.empty()) throw InputError("draw set is empty");
    const std::size_t k = draws.draws.front().size();
    if (k == 0) throw InputError("draws have zero length");
    for (const auto& draw : draws.draws)
        if (draw.size() != k) throw InputError("draws have mismatched lengths");
}

DecisionReport oracle_decision(const RiskProfile& profile, std::span<const double> P,
                               const TieRule& tie) {
    require_choice_set(profile);
    return select_decision(profile.choice_set, pointwise_risks(profile, P), tie,
                           profile.tie_preference, "oracle");
}

DecisionReport plugin_decision(const RiskProfile& profile, const ReducedForm& rf,
                               const TieRule& tie) {
    require_choice_set(profile);
    validate_reduced_form(rf);
    auto report = select_decision(profile.choice_set, pointwise_risks(profile, rf.estimate), tie,
                                  profile.tie_preference, "plug-in");
    return report;
}

DecisionReport averaged_decision(const RiskProfile& profile, const DrawSet& draws,
                                 const TieRule& tie) {
    require_choice_set(profile);
    validate_draw_set(draws);
    const std::size_t m_count = draws.draws.size();
    std::vector<KahanSum> sums(profile.choice_set.size);
    for (std::size_t m = 0; m < m_count; ++m) {
        const auto& draw = draws.draws[m];
        for (int d = 0; d < profile.choice_set.size; ++d) {
            const double risk = profile.eval(d, draw);
            if (!std::isfinite(risk))
                throw NumericalError("non-finite risk at draw " + std::to_string(m) +
                                     " for choice " + std::to_string(d));
            sums[d].add(risk);
        }
    }
    std::vector<double> risks(profile.choice_set.size);
    for (int d = 0; d < profile.choice_set.size; ++d)
        risks[d] = sums[d].value() / static_cast<double>(m_count);
    return select_decision(profile.choice_set, std::move(risks), tie, profile.tie_preference,
                           averaged_rule_name(draws.source_tag));
}

double excess_risk(const RiskProfile& profile, int chosen, std::span<const double> P) {
    require_choice_set(profile);
    if (chosen < 0 || chosen >= profile.choice_set.size)
        throw InputError("chosen index " + std::to_string(chosen) + " outside choice set");
    const auto risks = pointwise_risks(profile, P);
    const double min_risk = *std::min_element(risks.begin(), risks.end());
    return risks[chosen] - min_risk;
}

}  // namespace paridec
