#pragma once

#include <string>
#include <vector>

namespace paridec {

// Self-contained release checks: each criterion pins its own tolerances and
// wall-clock budget and reports one pass/fail verdict with the measured
// numbers.  The same list backs the standalone checker binary and the
// `reproduce` subcommand.

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;             // measured values, always filled
    std::vector<std::string> info;  // extra context lines, not part of the verdict
    double elapsed_seconds = 0.0;
    double budget_seconds = 0.0;
};

// data_dir holds the shipped fixtures (near-tied study panel, demand data).
std::vector<CriterionResult> run_all_criteria(const std::string& data_dir);

CriterionResult run_criterion(int id, const std::string& data_dir);

}  // namespace paridec
