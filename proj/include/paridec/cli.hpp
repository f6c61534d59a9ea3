#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "paridec/mclab.hpp"
#include "paridec/posterior.hpp"
#include "paridec/pricing.hpp"
#include "paridec/treatment.hpp"

namespace paridec {

// Front-end plumbing shared by the binary and the acceptance harness: each
// subcommand has a run_* function that does the work and reports what it
// wrote, plus a cmd_* wrapper that maps exceptions to process exit codes
// (0 ok, 1 input, 2 domain, 3 numerical).

struct RunConfig {
    std::string input_path;
    std::string output_dir;  // empty: $PARIDEC_OUT_DIR, else "."
    std::uint64_t seed = 12345;
    std::size_t draw_count = kDefaultDecisionDraws;
    std::optional<double> lipschitz_override;
    std::optional<std::size_t> n_override;
    std::optional<double> grid_half_width_override;
    std::optional<std::size_t> grid_points_override;
};

std::string resolve_output_dir(const RunConfig& config);

struct TreatRunResult {
    TreatmentDecision decision;
    double plug_contrast = 0.0;  // robust welfare contrast at the point estimate
    int plug_chosen = 0;
    std::string lower_study;  // active bound attribution at the point estimate
    std::string upper_study;
    std::vector<std::string> files;
};

TreatRunResult run_treat(const RunConfig& config);

struct PriceRunResult {
    PricingDecision decision;
    std::vector<std::string> budget_labels;  // "observed" / "counterfactual", input order
    std::vector<std::string> files;
};

PriceRunResult run_price(const RunConfig& config);

struct EvaluateRunResult {
    std::vector<RiskCurve> curves;
    std::vector<MonteCarloEstimate> averages;  // one per curve, same order
    std::vector<std::string> files;
};

EvaluateRunResult run_evaluate(const RunConfig& config);

struct ReproduceRunResult {
    bool all_passed = false;
    std::vector<std::string> files;
};

ReproduceRunResult run_reproduce(const RunConfig& config);

int cmd_treat(const RunConfig& config);
int cmd_price(const RunConfig& config);
int cmd_evaluate(const RunConfig& config);
int cmd_reproduce(const RunConfig& config);

}  // namespace paridec
