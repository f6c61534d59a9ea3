#include "paridec/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "paridec/accept.hpp"
#include "paridec/errors.hpp"

namespace paridec {

namespace {

using nlohmann::json;

constexpr int kHistogramBins = 60;

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open input file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot open output file for writing: " + path);
    out << content;
    if (!out) throw InputError("failed while writing: " + path);
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

void ensure_output_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw InputError("cannot create output directory " + dir + ": " + ec.message());
    if (!std::filesystem::is_directory(dir))
        throw InputError("output path is not a directory: " + dir);
}

std::string format_number(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

json decision_report_json(const DecisionReport& report) {
    return {{"chosen", report.chosen},
            {"averaged_risks", report.averaged_risks},
            {"tie", report.tie_flag},
            {"rule", report.rule_name},
            {"tie_rule", report.tie_rule}};
}

std::string histogram_csv(const std::vector<double>& values) {
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    const double width = (hi - lo) / kHistogramBins;
    std::vector<std::size_t> counts(kHistogramBins, 0);
    for (double v : values) {
        std::size_t bin = 0;
        if (width > 0.0) {
            bin = static_cast<std::size_t>((v - lo) / width);
            bin = std::min<std::size_t>(bin, kHistogramBins - 1);
        }
        ++counts[bin];
    }
    std::ostringstream out;
    out << "bin_lo,bin_hi,count,share\n";
    const auto total = static_cast<double>(values.size());
    for (int b = 0; b < kHistogramBins; ++b) {
        const double bin_lo = lo + width * b;
        const double bin_hi = (b + 1 == kHistogramBins) ? hi : lo + width * (b + 1);
        out << format_number(bin_lo) << ',' << format_number(bin_hi) << ',' << counts[b] << ','
            << format_number(static_cast<double>(counts[b]) / total) << '\n';
    }
    return out.str();
}

json parse_json_object(const std::string& text, const std::string& what) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(what + " is not valid JSON: " + e.what());
    }
    if (!doc.is_object()) throw InputError(what + " must be a JSON object");
    return doc;
}

int run_guarded(const char* verb, int (*body)(const RunConfig&), const RunConfig& config) {
    try {
        return body(config);
    } catch (const Error& e) {
        std::cerr << verb << ": " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << verb << ": unexpected failure: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace

std::string resolve_output_dir(const RunConfig& config) {
    if (!config.output_dir.empty()) return config.output_dir;
    if (const char* env = std::getenv("PARIDEC_OUT_DIR"); env != nullptr && *env != '\0')
        return env;
    return ".";
}

TreatRunResult run_treat(const RunConfig& config) {
    StudyPanel panel = study_panel_from_json(read_text_file(config.input_path));
    if (config.lipschitz_override) {
        if (!(*config.lipschitz_override > 0.0))
            throw InputError("Lipschitz constant override must be positive");
        panel.lipschitz_C = *config.lipschitz_override;
    }
    if (config.draw_count == 0) throw InputError("draw count must be positive");

    TreatRunResult result;
    std::vector<double> estimates(panel.studies.size());
    for (std::size_t k = 0; k < panel.studies.size(); ++k)
        estimates[k] = panel.studies[k].estimate;
    const AteBounds at_estimate = intersection_bounds(panel, estimates);
    result.plug_contrast = robust_welfare_contrast(at_estimate);
    result.plug_chosen = result.plug_contrast >= 0.0 ? 1 : 0;
    result.lower_study = panel.studies[at_estimate.lower_study].id;
    result.upper_study = panel.studies[at_estimate.upper_study].id;

    GaussianQuasiPosterior posterior;
    posterior.center = estimates;
    posterior.covariance.assign(panel.studies.size(),
                                std::vector<double>(panel.studies.size(), 0.0));
    for (std::size_t k = 0; k < panel.studies.size(); ++k)
        posterior.covariance[k][k] = panel.studies[k].se * panel.studies[k].se;
    posterior.draw_count = config.draw_count;
    posterior.seed = config.seed;
    result.decision = treat_rule(panel, sample_gaussian(posterior));

    json report = decision_report_json(result.decision.report);
    report["mean_contrast"] = result.decision.mean_contrast;
    report["plug_contrast"] = result.plug_contrast;
    report["plug_chosen"] = result.plug_chosen;
    report["draws"] = config.draw_count;
    report["seed"] = config.seed;
    report["lipschitz_C"] = panel.lipschitz_C;
    json studies = json::array();
    for (std::size_t k = 0; k < panel.studies.size(); ++k) {
        const auto& study = panel.studies[k];
        const double dist = study_distance(panel, k);
        studies.push_back({{"id", study.id},
                           {"estimate", study.estimate},
                           {"se", study.se},
                           {"distance", dist},
                           {"lower_value", study.estimate - panel.lipschitz_C * dist},
                           {"upper_value", study.estimate + panel.lipschitz_C * dist},
                           {"active_lower", static_cast<int>(k) == at_estimate.lower_study},
                           {"active_upper", static_cast<int>(k) == at_estimate.upper_study}});
    }
    report["studies"] = std::move(studies);
    report["bounds_at_estimate"] = {{"lower", at_estimate.lower},
                                    {"upper", at_estimate.upper},
                                    {"lower_study", result.lower_study},
                                    {"upper_study", result.upper_study}};

    const std::string out_dir = resolve_output_dir(config);
    ensure_output_dir(out_dir);
    const std::string report_path = join_path(out_dir, "treat_decision.json");
    write_text_file(report_path, report.dump(2) + "\n");
    result.files.push_back(report_path);
    const std::string histogram_path = join_path(out_dir, "treat_contrast_histogram.csv");
    write_text_file(histogram_path, histogram_csv(result.decision.draw_contrasts));
    result.files.push_back(histogram_path);
    return result;
}

PriceRunResult run_price(const RunConfig& config) {
    const PricingInput input = pricing_input_from_json(read_text_file(config.input_path));
    if (config.draw_count == 0) throw InputError("draw count must be positive");
    const PatchModel& pm = input.model;
    for (std::size_t pos = 0; pos < pm.observed_budgets.size(); ++pos)
        if (input.data.counts[pos].empty())
            throw InputError("budget " + std::to_string(pm.observed_budgets[pos]) +
                             " needs patch_counts so a posterior can be formed");

    const auto mle_check = rationalizability_test(pm, input.data);
    if (!mle_check.feasible) {
        std::string diag = "observed patch shares are not rationalizable; shares:";
        for (std::size_t pos = 0; pos < input.data.probs.size(); ++pos) {
            diag += " budget " + std::to_string(pm.observed_budgets[pos]) + " [";
            for (std::size_t s = 0; s < input.data.probs[pos].size(); ++s)
                diag += (s ? " " : "") + std::to_string(input.data.probs[pos][s]);
            diag += "]";
        }
        throw RationalizabilityError(diag);
    }

    const DrawSet draws = sample_patch_posterior(pm, input.data, config.draw_count, config.seed);
    PriceRunResult result;
    result.decision =
        pricing_rule(pm, input.data, input.observed_values, input.functionals, draws);
    for (const auto& budget : pm.budgets)
        result.budget_labels.push_back(budget.observed ? "observed" : "counterfactual");

    json report = decision_report_json(result.decision.report);
    report["budget_labels"] = result.budget_labels;
    report["draws"] = config.draw_count;
    report["seed"] = config.seed;
    json bounds = json::array();
    for (std::size_t c = 0; c < pm.counterfactual_budgets.size(); ++c)
        bounds.push_back({{"budget", pm.counterfactual_budgets[c]},
                          {"mean_lower", result.decision.mean_bounds[c][0]},
                          {"mean_upper", result.decision.mean_bounds[c][1]}});
    report["counterfactual_bounds"] = std::move(bounds);

    const std::string out_dir = resolve_output_dir(config);
    ensure_output_dir(out_dir);
    const std::string report_path = join_path(out_dir, "price_decision.json");
    write_text_file(report_path, report.dump(2) + "\n");
    result.files.push_back(report_path);

    std::ostringstream trace;
    trace << "draw";
    for (int b : pm.observed_budgets) trace << ",payoff_b" << b;
    for (int d : pm.counterfactual_budgets) trace << ",lower_b" << d << ",upper_b" << d;
    trace << '\n';
    for (std::size_t m = 0; m < result.decision.trace.size(); ++m) {
        trace << m;
        for (double v : result.decision.trace[m]) trace << ',' << format_number(v);
        trace << '\n';
    }
    const std::string trace_path = join_path(out_dir, "price_draw_trace.csv");
    write_text_file(trace_path, trace.str());
    result.files.push_back(trace_path);
    return result;
}

namespace {

struct EvaluateConfig {
    DgpSpec dgp;
    std::size_t reps = 0;
    std::size_t inner_draws = kDefaultInnerDraws;
    std::size_t bootstrap_replications = 1000;
    std::vector<std::string> rule_names;
    std::vector<double> grid_offset;
    std::vector<double> grid_direction;
    double grid_half_width = 4.0;
    std::size_t grid_points = 17;
};

EvaluateConfig parse_evaluate_config(const json& doc, const RunConfig& overrides) {
    for (const auto& item : doc.items()) {
        static const char* known[] = {"family",      "P0",          "info_matrix",
                                      "n",           "reps",        "seed",
                                      "inner_draws", "bootstrap_replications",
                                      "rules",       "grid",        "profile"};
        bool ok = false;
        for (const char* name : known)
            if (item.key() == name) ok = true;
        if (!ok) throw InputError("unknown field \"" + item.key() + "\" in experiment config");
    }
    for (const char* field : {"P0", "n", "reps", "rules", "grid", "profile"})
        if (!doc.contains(field))
            throw InputError(std::string("experiment config missing \"") + field + "\"");
    if (doc["profile"].get<std::string>() != "toy-treatment")
        throw InputError("unknown risk profile \"" + doc["profile"].get<std::string>() +
                         "\"; only \"toy-treatment\" is available");

    EvaluateConfig config;
    const std::string family = doc.value("family", "gaussian-mean");
    if (family == "gaussian-mean")
        config.dgp.family = DgpFamily::gaussian_mean;
    else if (family == "multinomial")
        config.dgp.family = DgpFamily::multinomial;
    else
        throw InputError("unknown family \"" + family + "\"");
    config.dgp.P0 = doc["P0"].get<std::vector<double>>();
    config.dgp.n = overrides.n_override.value_or(doc["n"].get<std::size_t>());
    config.dgp.seed = doc.contains("seed") ? doc["seed"].get<std::uint64_t>() : overrides.seed;
    if (doc.contains("info_matrix")) {
        config.dgp.info_matrix = doc["info_matrix"].get<std::vector<std::vector<double>>>();
    } else if (config.dgp.family == DgpFamily::gaussian_mean) {
        config.dgp.info_matrix.assign(config.dgp.P0.size(),
                                      std::vector<double>(config.dgp.P0.size(), 0.0));
        for (std::size_t a = 0; a < config.dgp.P0.size(); ++a) config.dgp.info_matrix[a][a] = 1.0;
    }
    config.reps = doc["reps"].get<std::size_t>();
    if (doc.contains("inner_draws")) config.inner_draws = doc["inner_draws"].get<std::size_t>();
    if (doc.contains("bootstrap_replications"))
        config.bootstrap_replications = doc["bootstrap_replications"].get<std::size_t>();
    config.rule_names = doc["rules"].get<std::vector<std::string>>();
    if (config.rule_names.empty()) throw InputError("experiment config lists no rules");

    const auto& grid = doc["grid"];
    if (!grid.is_object()) throw InputError("\"grid\" must be an object");
    for (const auto& item : grid.items())
        if (item.key() != "offset" && item.key() != "direction" && item.key() != "half_width" &&
            item.key() != "points")
            throw InputError("unknown field \"" + item.key() + "\" in grid");
    if (!grid.contains("direction")) throw InputError("grid needs a \"direction\"");
    config.grid_direction = grid["direction"].get<std::vector<double>>();
    config.grid_offset = grid.contains("offset") ? grid["offset"].get<std::vector<double>>()
                                                 : std::vector<double>(config.dgp.P0.size(), 0.0);
    if (grid.contains("half_width")) config.grid_half_width = grid["half_width"].get<double>();
    if (grid.contains("points")) config.grid_points = grid["points"].get<std::size_t>();
    if (overrides.grid_half_width_override)
        config.grid_half_width = *overrides.grid_half_width_override;
    if (overrides.grid_points_override) config.grid_points = *overrides.grid_points_override;
    return config;
}

RuleUnderTest make_named_rule(const std::string& name, const EvaluateConfig& config) {
    if (name == "plug-in") return make_plugin_rule(toy_risk_profile());
    if (name == "quasi-bayes")
        return make_quasi_bayes_rule(toy_risk_profile(), config.inner_draws);
    if (name == "bootstrap")
        return make_bootstrap_rule(toy_risk_profile(), config.bootstrap_replications);
    if (name == "oracle") return make_oracle_rule(toy_risk_profile());
    if (name.rfind("constant-", 0) == 0) {
        try {
            return make_constant_rule(std::stoi(name.substr(9)));
        } catch (const std::exception&) {
            throw InputError("malformed constant rule name \"" + name + "\"");
        }
    }
    throw InputError("unknown rule \"" + name + "\"");
}

}  // namespace

EvaluateRunResult run_evaluate(const RunConfig& config) {
    const json doc = parse_json_object(read_text_file(config.input_path), "experiment config");
    EvaluateConfig experiment;
    try {
        experiment = parse_evaluate_config(doc, config);
    } catch (const json::exception& e) {
        throw InputError(std::string("experiment config: ") + e.what());
    }

    std::vector<RuleUnderTest> rules;
    rules.reserve(experiment.rule_names.size());
    for (const auto& name : experiment.rule_names) rules.push_back(make_named_rule(name, experiment));

    const auto grid = make_line_grid(experiment.grid_offset, experiment.grid_direction,
                                     experiment.grid_half_width, experiment.grid_points);
    EvaluateRunResult result;
    result.curves =
        excess_risk_profile(experiment.dgp, rules, toy_risk_profile(), grid, experiment.reps);
    for (const auto& curve : result.curves) result.averages.push_back(average_excess_risk(curve));

    const std::string out_dir = resolve_output_dir(config);
    ensure_output_dir(out_dir);

    std::ostringstream csv;
    const std::size_t k = experiment.dgp.P0.size();
    for (std::size_t a = 0; a < k; ++a) csv << 'h' << (a + 1) << ',';
    csv << "rule,excess,se,reps\n";
    for (const auto& curve : result.curves)
        for (std::size_t g = 0; g < curve.h_grid.size(); ++g) {
            for (std::size_t a = 0; a < k; ++a) csv << format_number(curve.h_grid[g][a]) << ',';
            csv << curve.rule_name << ',' << format_number(curve.excess[g].value) << ','
                << format_number(curve.excess[g].se) << ',' << curve.reps << '\n';
        }
    const std::string curves_path = join_path(out_dir, "risk_curves.csv");
    write_text_file(curves_path, csv.str());
    result.files.push_back(curves_path);

    json summary;
    summary["n"] = experiment.dgp.n;
    summary["reps"] = experiment.reps;
    summary["seed"] = experiment.dgp.seed;
    json averages = json::array();
    for (std::size_t q = 0; q < result.curves.size(); ++q)
        averages.push_back({{"rule", result.curves[q].rule_name},
                            {"average_excess", result.averages[q].value},
                            {"se", result.averages[q].se}});
    summary["average_excess_risk"] = std::move(averages);
    const std::string summary_path = join_path(out_dir, "evaluate_summary.json");
    write_text_file(summary_path, summary.dump(2) + "\n");
    result.files.push_back(summary_path);
    return result;
}

ReproduceRunResult run_reproduce(const RunConfig& config) {
    if (config.input_path.empty())
        throw InputError("reproduce needs --input pointing at the fixture directory");
    if (!std::filesystem::is_directory(config.input_path))
        throw InputError("fixture directory not found: " + config.input_path);
    const auto criteria = run_all_criteria(config.input_path);

    ReproduceRunResult result;
    result.all_passed = true;
    json manifest;
    json rows = json::array();
    for (const auto& criterion : criteria) {
        result.all_passed = result.all_passed && criterion.passed;
        rows.push_back({{"id", criterion.id},
                        {"name", criterion.name},
                        {"passed", criterion.passed},
                        {"detail", criterion.detail},
                        {"info", criterion.info},
                        {"elapsed_seconds", criterion.elapsed_seconds},
                        {"budget_seconds", criterion.budget_seconds}});
    }
    manifest["criteria"] = std::move(rows);
    manifest["all_passed"] = result.all_passed;

    const std::string out_dir = resolve_output_dir(config);
    ensure_output_dir(out_dir);
    const std::string manifest_path = join_path(out_dir, "reproduce_manifest.json");
    write_text_file(manifest_path, manifest.dump(2) + "\n");
    result.files.push_back(manifest_path);
    return result;
}

int cmd_treat(const RunConfig& config) {
    return run_guarded("treat", [](const RunConfig& c) {
        const auto result = run_treat(c);
        std::cout << "decision: " << (result.decision.report.chosen == 1 ? "treat" : "do not treat")
                  << " (mean contrast " << result.decision.mean_contrast << ", plug-in contrast "
                  << result.plug_contrast << ")\n";
        for (const auto& file : result.files) std::cout << "wrote " << file << '\n';
        return 0;
    }, config);
}

int cmd_price(const RunConfig& config) {
    return run_guarded("price", [](const RunConfig& c) {
        const auto result = run_price(c);
        std::cout << "chosen budget: " << result.decision.report.chosen << " ("
                  << result.budget_labels[result.decision.report.chosen] << ")\n";
        for (const auto& file : result.files) std::cout << "wrote " << file << '\n';
        return 0;
    }, config);
}

int cmd_evaluate(const RunConfig& config) {
    return run_guarded("evaluate", [](const RunConfig& c) {
        const auto result = run_evaluate(c);
        for (std::size_t q = 0; q < result.curves.size(); ++q)
            std::cout << result.curves[q].rule_name << ": average excess "
                      << result.averages[q].value << " (se " << result.averages[q].se << ")\n";
        for (const auto& file : result.files) std::cout << "wrote " << file << '\n';
        return 0;
    }, config);
}

int cmd_reproduce(const RunConfig& config) {
    return run_guarded("reproduce", [](const RunConfig& c) {
        const auto result = run_reproduce(c);
        for (const auto& file : result.files) std::cout << "wrote " << file << '\n';
        std::cout << (result.all_passed ? "all criteria passed\n" : "some criteria failed\n");
        return result.all_passed ? 0 : 3;
    }, config);
}

}  // namespace paridec
