#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "paridec/decision.hpp"

// Revealed-preference analysis of two-good demand over a handful of budget
// lines (expenditure normalized to 1).  Each budget line is split into patches
// by its crossings with the other lines; a rational type assigns one patch per
// budget without creating a strict revealed-preference cycle.  Counterfactual
// demand functionals are bounded by linear programs over mixtures of types.

namespace paridec {

struct BudgetSet {
    std::vector<double> prices;  // length 2, positive
    bool observed = true;
};

struct Patch {
    int budget = 0;
    double x_lo = 0.0;  // good-1 interval along the budget line, open at both ends
    double x_hi = 0.0;
    std::array<double, 2> mid = {0.0, 0.0};  // midpoint bundle on the budget line
    std::array<double, 2> bundle() const { return mid; }
};

struct PatchModel {
    std::vector<BudgetSet> budgets;
    std::vector<std::vector<Patch>> patches;  // per budget, increasing good-1
    std::vector<int> observed_budgets;        // input order
    std::vector<int> counterfactual_budgets;  // input order

    // filled by enumerate_types
    std::vector<std::vector<int>> types_observed;  // per type: patch index per observed budget
    std::vector<std::vector<int>> types_all;       // per type: patch index per budget
    std::vector<std::vector<int>> matrix_A;        // rows = observed patches (stacked), 0/1
    std::vector<std::vector<int>> matrix_Astar;    // observed patch rows then counterfactual rows

    int observed_patch_count() const;
    int patch_count(int budget) const;
};

// Geometry only: crossings, patch intervals.  Throws InputError on coincident
// budgets or prices that are not two positive numbers.
PatchModel build_patches(const std::vector<BudgetSet>& budgets);

// Fills types and the 0/1 matrices by exhaustive enumeration with strict
// revealed-preference cycle pruning (GARP at patch level for two goods).
void enumerate_types(PatchModel& pm);

struct DemandData {
    // per observed budget (in observed_budgets order): patch probabilities
    std::vector<std::vector<double>> probs;
    // patch counts when the data arrived as counts (empty otherwise)
    std::vector<std::vector<double>> counts;
};

void validate_demand_data(const PatchModel& pm, const DemandData& data);

struct RationalizabilityResult {
    bool feasible = false;
    std::vector<double> witness;  // mixture over types_observed when feasible
};

RationalizabilityResult rationalizability_test(const PatchModel& pm, const DemandData& data);

struct Functional {
    std::vector<double> lower;  // per patch of the counterfactual budget
    std::vector<double> upper;
};

// Sharp [hL, hU] for the expected functional on counterfactual budget d:
// min/max of the envelope-weighted type mixture subject to reproducing the
// observed patch probabilities.  Throws RationalizabilityError when infeasible.
std::pair<double, double> demand_bounds(const PatchModel& pm, const DemandData& data,
                                        const Functional& f, int d);

struct PricingDecision {
    DecisionReport report;  // one risk per budget, in input order
    // per counterfactual budget: averaged [hL, hU] over the draws
    std::vector<std::array<double, 2>> mean_bounds;
    // per draw: observed payoffs (p_b . values_b) then per counterfactual hL, hU
    std::vector<std::vector<double>> trace;
};

// Posterior draws of the concatenated observed patch probabilities: one
// independent Dirichlet(counts + prior_alpha) block per observed budget.
// Requires counts in `data`.
DrawSet sample_patch_posterior(const PatchModel& pm, const DemandData& data,
                               std::size_t draw_count, std::uint64_t seed,
                               double prior_alpha = 1.0);

// Risk of an observed budget is -E[payoff] under the draw; risk of a
// counterfactual budget is -hL under the draw.  Draws are concatenated
// per-observed-budget probability blocks.
PricingDecision pricing_rule(const PatchModel& pm, const DemandData& data,
                             const std::vector<std::vector<double>>& observed_values,
                             const std::vector<Functional>& counterfactual_functionals,
                             const DrawSet& draws);

struct PricingInput {
    PatchModel model;  // geometry + types already enumerated
    DemandData data;
    std::vector<std::vector<double>> observed_values;  // per observed budget
    std::vector<Functional> functionals;               // per counterfactual budget
};

// Parses {"budgets": [...], "choices": [...], "functional": {...}, "observed": [...]};
// unknown fields rejected throughout.
PricingInput pricing_input_from_json(const std::string& text);

}  // namespace paridec
