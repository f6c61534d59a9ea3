#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

// The abstract decision problem: a finite choice set, a point-identified
// reduced-form parameter P, and a pluggable maximum-risk map R(d, P).  Rules
// pick the choice minimizing R at a point (oracle / plug-in) or averaged over
// draws of P (posterior, quasi-posterior, bootstrap, Dirichlet).

namespace paridec {

struct ChoiceSet {
    int size = 0;  // choices indexed 0 .. size-1
};

struct ReducedForm {
    std::vector<double> estimate;
    std::vector<std::vector<double>> covariance;
};

// Throws InputError unless covariance is square of matching dimension,
// symmetric to 1e-12 relative tolerance, with nonnegative diagonal.
void validate_reduced_form(const ReducedForm& rf);

struct RiskProfile {
    ChoiceSet choice_set;
    std::function<double(int, std::span<const double>)> eval;
    // Preferred choice at exact risk ties.  Treatment profiles set 1 so that
    // sign rules treat at a zero contrast; unset means lowest index wins.
    std::optional<int> tie_preference;
};

enum class DrawSource { posterior, quasi_posterior, bootstrap, dirichlet };

std::string_view to_string(DrawSource source);

struct DrawSet {
    std::vector<std::vector<double>> draws;
    DrawSource source_tag = DrawSource::posterior;
    std::uint64_t seed = 0;
};

// Throws InputError unless draws is nonempty with equal-length vectors.
void validate_draw_set(const DrawSet& draws);

struct TieRule {
    bool randomized = false;
    std::uint64_t seed = 0;

    static TieRule lowest_index() { return {}; }
    static TieRule randomized_with(std::uint64_t seed) { return {true, seed}; }
    std::string describe() const;
};

struct DecisionReport {
    int chosen = 0;
    std::vector<double> averaged_risks;
    bool tie_flag = false;
    std::string rule_name;
    std::string tie_rule;
};

// Two risks are tied when |a - b| <= kTieTolerance * max(1, |a|, |b|).
inline constexpr double kTieTolerance = 1e-10;

bool risks_tied(double a, double b);

// Argmin over the risk vector with the declared tie handling; the building
// block behind every rule front end.
DecisionReport select_decision(const ChoiceSet& choices, std::vector<double> risks,
                               const TieRule& tie, const std::optional<int>& tie_preference,
                               std::string rule_name);

std::string averaged_rule_name(DrawSource source);

DecisionReport oracle_decision(const RiskProfile& profile, std::span<const double> P,
                               const TieRule& tie = {});

DecisionReport plugin_decision(const RiskProfile& profile, const ReducedForm& rf,
                               const TieRule& tie = {});

// averaged_risks[d] = (1/M) sum_m R(d, draw_m), compensated summation.
DecisionReport averaged_decision(const RiskProfile& profile, const DrawSet& draws,
                                 const TieRule& tie = {});

// R(chosen, P) - min_d R(d, P); nonnegative by construction.
double excess_risk(const RiskProfile& profile, int chosen, std::span<const double> P);

}  // namespace paridec
