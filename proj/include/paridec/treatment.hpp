#pragma once

#include <string>
#include <utility>
#include <vector>

#include "paridec/decision.hpp"

// Treatment assignment from a panel of study estimates: Lipschitz intersection
// bounds around the target covariates, the robust welfare contrast, and the
// treat/no-treat rules built on them.  Choice 0 = do not treat, choice 1 = treat.

namespace paridec {

struct Study {
    std::string id;
    double estimate = 0.0;
    double se = 0.0;
    std::vector<double> covariates;
};

struct StudyPanel {
    std::vector<Study> studies;
    std::vector<double> target_covariates;
    double lipschitz_C = 0.0;
    // optional per-coordinate weights for the covariate distance; empty = plain Euclidean
    std::vector<double> norm_weights;
};

void validate_study_panel(const StudyPanel& panel);

// Parses {"C": real, "target": [...], "studies": [{"id","estimate","se","covariates"}]}.
// Unknown fields are rejected at both levels.
StudyPanel study_panel_from_json(const std::string& text);

struct AteBounds {
    double lower = 0.0;
    double upper = 0.0;
    int lower_study = -1;  // index attaining the max lower bound
    int upper_study = -1;  // index attaining the min upper bound
};

// lower = max_k(P_k - C*dist_k), upper = min_k(P_k + C*dist_k); throws
// EmptyIdentifiedSetError naming both active studies when lower > upper.
AteBounds intersection_bounds(const StudyPanel& panel, std::span<const double> P);

double study_distance(const StudyPanel& panel, std::size_t k);

// (upper)_+ + (lower)_-
double robust_welfare_contrast(const AteBounds& bounds);

// { R(0,.) , R(1,.) } = { (upper)_+ , (-lower)_+ }
std::pair<double, double> treatment_risks(const AteBounds& bounds);

// Two-choice risk profile over the K study means; ties prefer treating.
RiskProfile panel_risk_profile(StudyPanel panel);

// The three-coordinate worked example: lower bound max(P1, P2), upper bound P3.
// Risks are evaluated formally everywhere, so Monte Carlo draws never abort.
RiskProfile toy_risk_profile();

struct TreatmentDecision {
    DecisionReport report;               // averaged risks [R0, R1] over the draws
    double mean_contrast = 0.0;          // quasi-posterior mean of the robust welfare contrast
    std::vector<double> draw_contrasts;  // per-draw contrast, histogram-ready
};

// Treat iff the mean contrast over the draws is >= 0; any draw with an empty
// identified set is a hard error carrying the draw index.
TreatmentDecision treat_rule(const StudyPanel& panel, const DrawSet& draws);

}  // namespace paridec
