#include "paridec/treatment.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <json.hpp>

#include "paridec/errors.hpp"
#include "paridec/rng.hpp"

namespace paridec {

namespace {

using nlohmann::json;

void reject_unknown_fields(const json& object, std::initializer_list<const char*> allowed,
                           const std::string& where) {
    for (const auto& item : object.items()) {
        bool known = false;
        for (const char* name : allowed)
            if (item.key() == name) known = true;
        if (!known) throw InputError("unknown field \"" + item.key() + "\" in " + where);
    }
}

std::vector<double> real_vector(const json& value, const std::string& where) {
    if (!value.is_array()) throw InputError(where + " must be an array of numbers");
    std::vector<double> out;
    out.reserve(value.size());
    for (const auto& entry : value) {
        if (!entry.is_number()) throw InputError(where + " must contain only numbers");
        out.push_back(entry.get<double>());
    }
    return out;
}

}  // namespace

void validate_study_panel(const StudyPanel& panel) {
    if (panel.studies.empty()) throw InputError("study panel has no studies");
    if (!(panel.lipschitz_C >= 0.0)) throw InputError("C must be nonnegative");
    const std::size_t p = panel.target_covariates.size();
    for (std::size_t k = 0; k < panel.studies.size(); ++k) {
        const auto& study = panel.studies[k];
        if (!(study.se > 0.0))
            throw InputError("study \"" + study.id + "\" has nonpositive se");
        if (study.covariates.size() != p)
            throw InputError("study \"" + study.id + "\" has " +
                             std::to_string(study.covariates.size()) +
                             " covariates, target has " + std::to_string(p));
        if (!std::isfinite(study.estimate))
            throw InputError("study \"" + study.id + "\" has non-finite estimate");
    }
    if (!panel.norm_weights.empty()) {
        if (panel.norm_weights.size() != p)
            throw InputError("norm_weights length does not match covariate length");
        for (double w : panel.norm_weights)
            if (!(w >= 0.0)) throw InputError("norm_weights must be nonnegative");
    }
}

StudyPanel study_panel_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("study panel JSON parse failure: ") + e.what());
    }
    if (!doc.is_object()) throw InputError("study panel JSON must be an object");
    reject_unknown_fields(doc, {"C", "target", "studies"}, "study panel");
    if (!doc.contains("C") || !doc["C"].is_number())
        throw InputError("study panel needs a numeric \"C\"");
    if (!doc.contains("target")) throw InputError("study panel needs \"target\"");
    if (!doc.contains("studies") || !doc["studies"].is_array())
        throw InputError("study panel needs a \"studies\" array");

    StudyPanel panel;
    panel.lipschitz_C = doc["C"].get<double>();
    panel.target_covariates = real_vector(doc["target"], "\"target\"");
    for (const auto& entry : doc["studies"]) {
        if (!entry.is_object()) throw InputError("each study must be an object");
        reject_unknown_fields(entry, {"id", "estimate", "se", "covariates"}, "study entry");
        for (const char* field : {"id", "estimate", "se", "covariates"})
            if (!entry.contains(field))
                throw InputError(std::string("study entry missing \"") + field + "\"");
        Study study;
        if (!entry["id"].is_string()) throw InputError("study \"id\" must be a string");
        study.id = entry["id"].get<std::string>();
        if (!entry["estimate"].is_number() || !entry["se"].is_number())
            throw InputError("study \"" + study.id + "\" estimate/se must be numbers");
        study.estimate = entry["estimate"].get<double>();
        study.se = entry["se"].get<double>();
        study.covariates = real_vector(entry["covariates"], "study \"" + study.id + "\" covariates");
        panel.studies.push_back(std::move(study));
    }
    validate_study_panel(panel);
    return panel;
}

double study_distance(const StudyPanel& panel, std::size_t k) {
    const auto& x = panel.studies[k].covariates;
    const auto& x0 = panel.target_covariates;
    double acc = 0.0;
    for (std::size_t i = 0; i < x0.size(); ++i) {
        const double d = x0[i] - x[i];
        const double w = panel.norm_weights.empty() ? 1.0 : panel.norm_weights[i];
        acc += w * d * d;
    }
    return std::sqrt(acc);
}

AteBounds intersection_bounds(const StudyPanel& panel, std::span<const double> P) {
    if (P.size() != panel.studies.size())
        throw InputError("parameter length " + std::to_string(P.size()) +
                         " does not match study count " + std::to_string(panel.studies.size()));
    AteBounds bounds;
    bounds.lower = -std::numeric_limits<double>::infinity();
    bounds.upper = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < panel.studies.size(); ++k) {
        const double reach = panel.lipschitz_C * study_distance(panel, k);
        const double lo = P[k] - reach;
        const double hi = P[k] + reach;
        if (lo > bounds.lower) {
            bounds.lower = lo;
            bounds.lower_study = static_cast<int>(k);
        }
        if (hi < bounds.upper) {
            bounds.upper = hi;
            bounds.upper_study = static_cast<int>(k);
        }
    }
    if (bounds.lower > bounds.upper)
        throw EmptyIdentifiedSetError(
            "empty identified set: lower bound " + std::to_string(bounds.lower) + " (study \"" +
            panel.studies[bounds.lower_study].id + "\") exceeds upper bound " +
            std::to_string(bounds.upper) + " (study \"" + panel.studies[bounds.upper_study].id +
            "\") by " + std::to_string(bounds.lower - bounds.upper) +
            "; consider raising C");
    return bounds;
}

double robust_welfare_contrast(const AteBounds& bounds) {
    return std::max(bounds.upper, 0.0) + std::min(bounds.lower, 0.0);
}

std::pair<double, double> treatment_risks(const AteBounds& bounds) {
    return {std::max(bounds.upper, 0.0), std::max(-bounds.lower, 0.0)};
}

RiskProfile panel_risk_profile(StudyPanel panel) {
    validate_study_panel(panel);
    RiskProfile profile;
    profile.choice_set = {2};
    profile.tie_preference = 1;
    profile.eval = [panel = std::move(panel)](int d, std::span<const double> P) {
        const auto bounds = intersection_bounds(panel, P);
        const auto risks = treatment_risks(bounds);
        return d == 0 ? risks.first : risks.second;
    };
    return profile;
}

RiskProfile toy_risk_profile() {
    RiskProfile profile;
    profile.choice_set = {2};
    profile.tie_preference = 1;
    profile.eval = [](int d, std::span<const double> P) {
        const double lower = std::max(P[0], P[1]);
        const double upper = P[2];
        return d == 0 ? std::max(upper, 0.0) : std::max(-lower, 0.0);
    };
    return profile;
}

TreatmentDecision treat_rule(const StudyPanel& panel, const DrawSet& draws) {
    validate_study_panel(panel);
    validate_draw_set(draws);
    if (draws.draws.front().size() != panel.studies.size())
        throw InputError("draws have length " + std::to_string(draws.draws.front().size()) +
                         ", panel has " + std::to_string(panel.studies.size()) + " studies");

    KahanSum risk0;
    KahanSum risk1;
    TreatmentDecision decision;
    decision.draw_contrasts.reserve(draws.draws.size());
    for (std::size_t m = 0; m < draws.draws.size(); ++m) {
        AteBounds bounds;
        try {
            bounds = intersection_bounds(panel, draws.draws[m]);
        } catch (const EmptyIdentifiedSetError& e) {
            throw EmptyIdentifiedSetError("draw " + std::to_string(m) + ": " + e.what());
        }
        const auto risks = treatment_risks(bounds);
        risk0.add(risks.first);
        risk1.add(risks.second);
        decision.draw_contrasts.push_back(risks.first - risks.second);
    }
    const auto m_count = static_cast<double>(draws.draws.size());
    const double avg0 = risk0.value() / m_count;
    const double avg1 = risk1.value() / m_count;

    decision.mean_contrast = avg0 - avg1;  // contrast = R(0,.) - R(1,.) draw by draw
    decision.report.chosen = decision.mean_contrast >= 0.0 ? 1 : 0;
    decision.report.averaged_risks = {avg0, avg1};
    decision.report.tie_flag =
        std::abs(avg0 - avg1) <= kTieTolerance * std::max({1.0, std::abs(avg0), std::abs(avg1)});
    decision.report.rule_name = "quasi-posterior mean contrast";
    decision.report.tie_rule = "treat-at-zero";
    return decision;
}

}  // namespace paridec
