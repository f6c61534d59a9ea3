#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "paridec/errors.hpp"
#include "paridec/gaussian_forms.hpp"
#include "paridec/posterior.hpp"
#include "paridec/pricing.hpp"
#include "paridec/treatment.hpp"

namespace py = pybind11;

namespace {

using namespace paridec;

py::dict report_dict(const DecisionReport& report) {
    py::dict out;
    out["chosen"] = report.chosen;
    out["averaged_risks"] = report.averaged_risks;
    out["tie"] = report.tie_flag;
    out["rule"] = report.rule_name;
    return out;
}

py::dict treat_panel(const std::string& text, std::size_t draws, std::uint64_t seed) {
    StudyPanel panel = study_panel_from_json(text);
    if (draws == 0) throw InputError("draws must be positive");

    std::vector<double> estimates(panel.studies.size());
    for (std::size_t k = 0; k < panel.studies.size(); ++k)
        estimates[k] = panel.studies[k].estimate;
    const AteBounds at_estimate = intersection_bounds(panel, estimates);

    GaussianQuasiPosterior posterior;
    posterior.center = estimates;
    posterior.covariance.assign(estimates.size(), std::vector<double>(estimates.size(), 0.0));
    for (std::size_t k = 0; k < estimates.size(); ++k)
        posterior.covariance[k][k] = panel.studies[k].se * panel.studies[k].se;
    posterior.draw_count = static_cast<int>(draws);
    posterior.seed = seed;
    const TreatmentDecision decision = treat_rule(panel, sample_gaussian(posterior));

    py::dict out = report_dict(decision.report);
    out["mean_contrast"] = decision.mean_contrast;
    out["plug_contrast"] = robust_welfare_contrast(at_estimate);
    out["plug_chosen"] = robust_welfare_contrast(at_estimate) >= 0.0 ? 1 : 0;
    out["lower_study"] = panel.studies[at_estimate.lower_study].id;
    out["upper_study"] = panel.studies[at_estimate.upper_study].id;
    out["bounds_at_estimate"] = py::make_tuple(at_estimate.lower, at_estimate.upper);
    return out;
}

py::dict price_demand(const std::string& text, std::size_t draws, std::uint64_t seed) {
    const PricingInput input = pricing_input_from_json(text);
    if (draws == 0) throw InputError("draws must be positive");
    for (const auto& counts : input.data.counts)
        if (counts.empty())
            throw InputError("patch_counts are needed so a posterior can be formed");
    const auto feasible = rationalizability_test(input.model, input.data);
    if (!feasible.feasible)
        throw RationalizabilityError("observed patch shares are not rationalizable");

    const DrawSet posterior = sample_patch_posterior(input.model, input.data, draws, seed);
    const PricingDecision decision = pricing_rule(input.model, input.data, input.observed_values,
                                                  input.functionals, posterior);

    py::dict out = report_dict(decision.report);
    py::list bounds;
    for (const auto& pair : decision.mean_bounds) bounds.append(py::make_tuple(pair[0], pair[1]));
    out["mean_bounds"] = bounds;
    py::list labels;
    for (const auto& budget : input.model.budgets)
        labels.append(budget.observed ? "observed" : "counterfactual");
    out["budget_labels"] = labels;
    return out;
}

py::dict type_matrices(const std::string& text) {
    const PricingInput input = pricing_input_from_json(text);
    py::dict out;
    out["A"] = input.model.matrix_A;
    out["A_star"] = input.model.matrix_Astar;
    out["types_observed"] = input.model.types_observed;
    out["types_all"] = input.model.types_all;
    return out;
}

bool rationalizable(const std::string& text) {
    const PricingInput input = pricing_input_from_json(text);
    return rationalizability_test(input.model, input.data).feasible;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "decision rules for partially identified payoffs";

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const InputError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const Error& e) {
            PyErr_SetString(PyExc_RuntimeError, e.what());
        }
    });

    m.def("expected_max_gaussian", &expected_max_gaussian, py::arg("z1"), py::arg("z2"),
          "Mean of max(z1 + Z1, z2 + Z2) for independent standard normals.");
    m.def("posterior_mean_positive_part", &posterior_mean_positive_part, py::arg("center"),
          py::arg("precision"), "Mean positive part of N(center, 1/precision).");
    m.def("posterior_mean_max_negative_part", &posterior_mean_max_negative_part,
          py::arg("center1"), py::arg("center2"), py::arg("precision"),
          "Mean of min(max(X1, X2), 0) for independent N(center_i, 1/precision).");
    m.def("treat_panel", &treat_panel, py::arg("panel_json"),
          py::arg("draws") = static_cast<std::size_t>(kDefaultDecisionDraws),
          py::arg("seed") = 12345,
          "Treatment decision for a study-panel JSON document.");
    m.def("price_demand", &price_demand, py::arg("demand_json"),
          py::arg("draws") = static_cast<std::size_t>(kDefaultDecisionDraws),
          py::arg("seed") = 12345,
          "Budget choice for a demand-data JSON document.");
    m.def("type_matrices", &type_matrices, py::arg("demand_json"),
          "Rational-type assignment matrices for a demand-data JSON document.");
    m.def("rationalizable", &rationalizable, py::arg("demand_json"),
          "Whether the observed patch shares admit a rational-type mixture.");
}
