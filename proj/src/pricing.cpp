#include "paridec/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <json.hpp>
#include <numeric>

#include "paridec/errors.hpp"
#include "paridec/lp.hpp"
#include "paridec/rng.hpp"

namespace paridec {

namespace {

using nlohmann::json;

constexpr double kGeomTol = 1e-12;
constexpr double kInsideTol = 1e-9;
constexpr std::size_t kTypeComboCap = 1'000'000;

// q . bundle < 1: strictly affordable under budget q
int affordability(const std::vector<double>& q, const std::array<double, 2>& bundle) {
    const double spend = q[0] * bundle[0] + q[1] * bundle[1];
    if (spend < 1.0 - kInsideTol) return -1;
    if (spend > 1.0 + kInsideTol) return 1;
    return 0;
}

bool has_cycle(const std::vector<std::vector<char>>& edge) {
    const std::size_t nb = edge.size();
    std::vector<int> color(nb, 0);
    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < nb; ++start) {
        if (color[start] != 0) continue;
        stack.push_back(start);
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            if (color[u] == 0) {
                color[u] = 1;
                for (std::size_t v = 0; v < nb; ++v)
                    if (edge[u][v]) {
                        if (color[v] == 1) return true;
                        if (color[v] == 0) stack.push_back(v);
                    }
            } else {
                if (color[u] == 1) color[u] = 2;
                stack.pop_back();
            }
        }
    }
    return false;
}

// one patch per budget in `members` (input-order budget indices); a strict
// revealed-preference cycle disqualifies the assignment
bool combo_rational(const PatchModel& pm, const std::vector<int>& members,
                    const std::vector<int>& combo) {
    const std::size_t nb = members.size();
    std::vector<std::array<double, 2>> bundles(nb);
    for (std::size_t a = 0; a < nb; ++a)
        bundles[a] = pm.patches[members[a]][combo[a]].bundle();
    std::vector<std::vector<char>> edge(nb, std::vector<char>(nb, 0));
    for (std::size_t a = 0; a < nb; ++a) {
        const auto& q = pm.budgets[members[a]].prices;
        for (std::size_t b = 0; b < nb; ++b) {
            if (a == b) continue;
            // b's bundle strictly affordable when a chose: a's choice beats b's
            if (affordability(q, bundles[b]) < 0) edge[a][b] = 1;
        }
    }
    return !has_cycle(edge);
}

std::vector<std::vector<int>> enumerate_over(const PatchModel& pm,
                                             const std::vector<int>& members) {
    std::size_t combos = 1;
    for (int b : members) {
        combos *= pm.patches[b].size();
        if (combos > kTypeComboCap)
            throw InputError("patch combination count exceeds enumeration cap");
    }
    std::vector<std::vector<int>> types;
    std::vector<int> combo(members.size(), 0);
    for (std::size_t c = 0; c < combos; ++c) {
        if (combo_rational(pm, members, combo)) types.push_back(combo);
        for (std::size_t pos = members.size(); pos-- > 0;) {
            if (++combo[pos] < static_cast<int>(pm.patches[members[pos]].size())) break;
            combo[pos] = 0;
        }
    }
    return types;
}

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

Functional parse_functional(const json& entry, const PatchModel& pm, int& d_out) {
    if (!entry.is_object()) throw InputError("\"functional\" entries must be objects");
    reject_unknown_fields(entry, {"d", "lower", "upper"}, "functional");
    for (const char* field : {"d", "lower", "upper"})
        if (!entry.contains(field))
            throw InputError(std::string("functional missing \"") + field + "\"");
    if (!entry["d"].is_number_integer()) throw InputError("functional \"d\" must be an integer");
    const int d = entry["d"].get<int>();
    if (d < 0 || d >= static_cast<int>(pm.budgets.size()))
        throw InputError("functional budget index out of range");
    if (pm.budgets[d].observed)
        throw InputError("functional budget " + std::to_string(d) + " is not counterfactual");
    Functional f;
    f.lower = real_vector(entry["lower"], "functional \"lower\"");
    f.upper = real_vector(entry["upper"], "functional \"upper\"");
    const auto patches = static_cast<std::size_t>(pm.patch_count(d));
    if (f.lower.size() != patches || f.upper.size() != patches)
        throw InputError("functional envelopes must have one value per patch of budget " +
                         std::to_string(d));
    for (std::size_t s = 0; s < patches; ++s)
        if (f.lower[s] > f.upper[s])
            throw InputError("functional lower exceeds upper on patch " + std::to_string(s));
    d_out = d;
    return f;
}

}  // namespace

int PatchModel::observed_patch_count() const {
    int total = 0;
    for (int b : observed_budgets) total += static_cast<int>(patches[b].size());
    return total;
}

int PatchModel::patch_count(int budget) const {
    return static_cast<int>(patches[budget].size());
}

PatchModel build_patches(const std::vector<BudgetSet>& budgets) {
    if (budgets.empty()) throw InputError("no budgets given");
    for (std::size_t i = 0; i < budgets.size(); ++i) {
        const auto& q = budgets[i].prices;
        if (q.size() != 2) throw InputError("budget " + std::to_string(i) + " needs 2 prices");
        if (!(q[0] > 0.0) || !(q[1] > 0.0) || !std::isfinite(q[0]) || !std::isfinite(q[1]))
            throw InputError("budget " + std::to_string(i) + " prices must be positive");
    }
    for (std::size_t i = 0; i < budgets.size(); ++i)
        for (std::size_t j = i + 1; j < budgets.size(); ++j) {
            const auto& a = budgets[i].prices;
            const auto& b = budgets[j].prices;
            if (std::abs(a[0] - b[0]) <= kGeomTol * std::max(1.0, std::abs(a[0])) &&
                std::abs(a[1] - b[1]) <= kGeomTol * std::max(1.0, std::abs(a[1])))
                throw InputError("budgets " + std::to_string(i) + " and " + std::to_string(j) +
                                 " are coincident");
        }

    PatchModel pm;
    pm.budgets = budgets;
    pm.patches.resize(budgets.size());
    for (std::size_t i = 0; i < budgets.size(); ++i) {
        if (budgets[i].observed)
            pm.observed_budgets.push_back(static_cast<int>(i));
        else
            pm.counterfactual_budgets.push_back(static_cast<int>(i));
        const auto& q = budgets[i].prices;
        const double x_max = 1.0 / q[0];
        std::vector<double> cuts;
        for (std::size_t j = 0; j < budgets.size(); ++j) {
            if (j == i) continue;
            const auto& r = budgets[j].prices;
            const double denom = q[0] * r[1] - q[1] * r[0];
            if (std::abs(denom) <= kGeomTol) continue;  // parallel lines
            const double x = (r[1] - q[1]) / denom;
            const double y = (1.0 - q[0] * x) / q[1];
            if (x > kGeomTol && y > kGeomTol) cuts.push_back(x);
        }
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end(),
                               [](double a, double b) {
                                   return std::abs(a - b) <= kGeomTol * std::max(1.0, a);
                               }),
                   cuts.end());
        const auto emit = [&](double lo, double hi) {
            const double x_mid = 0.5 * (lo + hi);
            const double y_mid = (1.0 - q[0] * x_mid) / q[1];
            pm.patches[i].push_back({static_cast<int>(i), lo, hi, {x_mid, y_mid}});
        };
        double lo = 0.0;
        for (double cut : cuts) {
            emit(lo, cut);
            lo = cut;
        }
        emit(lo, x_max);
    }
    return pm;
}

void enumerate_types(PatchModel& pm) {
    std::vector<int> all_budgets(pm.budgets.size());
    std::iota(all_budgets.begin(), all_budgets.end(), 0);

    pm.types_observed = enumerate_over(pm, pm.observed_budgets);
    pm.types_all = enumerate_over(pm, all_budgets);

    const int obs_rows = pm.observed_patch_count();
    int cf_rows = 0;
    for (int b : pm.counterfactual_budgets) cf_rows += pm.patch_count(b);

    std::vector<int> obs_row_offset(pm.budgets.size(), -1);
    {
        int offset = 0;
        for (int b : pm.observed_budgets) {
            obs_row_offset[b] = offset;
            offset += pm.patch_count(b);
        }
    }
    std::vector<int> cf_row_offset(pm.budgets.size(), -1);
    {
        int offset = obs_rows;
        for (int b : pm.counterfactual_budgets) {
            cf_row_offset[b] = offset;
            offset += pm.patch_count(b);
        }
    }

    pm.matrix_A.assign(obs_rows, std::vector<int>(pm.types_observed.size(), 0));
    for (std::size_t v = 0; v < pm.types_observed.size(); ++v)
        for (std::size_t pos = 0; pos < pm.observed_budgets.size(); ++pos) {
            const int b = pm.observed_budgets[pos];
            pm.matrix_A[obs_row_offset[b] + pm.types_observed[v][pos]][v] = 1;
        }

    pm.matrix_Astar.assign(obs_rows + cf_rows, std::vector<int>(pm.types_all.size(), 0));
    for (std::size_t v = 0; v < pm.types_all.size(); ++v)
        for (std::size_t b = 0; b < pm.budgets.size(); ++b) {
            const int row = pm.budgets[b].observed
                                ? obs_row_offset[b] + pm.types_all[v][b]
                                : cf_row_offset[b] + pm.types_all[v][b];
            pm.matrix_Astar[row][v] = 1;
        }
}

void validate_demand_data(const PatchModel& pm, const DemandData& data) {
    if (data.probs.size() != pm.observed_budgets.size())
        throw InputError("demand data must cover every observed budget exactly once");
    for (std::size_t pos = 0; pos < data.probs.size(); ++pos) {
        const int b = pm.observed_budgets[pos];
        if (data.probs[pos].size() != pm.patches[b].size())
            throw InputError("budget " + std::to_string(b) + " has " +
                             std::to_string(pm.patches[b].size()) + " patches but " +
                             std::to_string(data.probs[pos].size()) + " probabilities");
        double total = 0.0;
        for (double p : data.probs[pos]) {
            if (!(p >= 0.0)) throw InputError("negative patch probability on budget " +
                                              std::to_string(b));
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw InputError("patch probabilities on budget " + std::to_string(b) +
                             " sum to " + std::to_string(total));
    }
}

namespace {

// rows of the observed part of A*: one equality per observed patch
LinearProgram bounds_program(const PatchModel& pm, const std::vector<double>& p_concat,
                             const std::vector<double>& objective, LpSense sense) {
    LinearProgram lp;
    lp.sense = sense;
    lp.objective = objective;
    const int obs_rows = pm.observed_patch_count();
    lp.eq_matrix.assign(obs_rows, std::vector<double>(pm.types_all.size(), 0.0));
    for (int r = 0; r < obs_rows; ++r)
        for (std::size_t v = 0; v < pm.types_all.size(); ++v)
            lp.eq_matrix[r][v] = pm.matrix_Astar[r][v];
    lp.eq_rhs = p_concat;
    return lp;
}

std::vector<double> concat_probs(const std::vector<std::vector<double>>& probs) {
    std::vector<double> out;
    for (const auto& block : probs) out.insert(out.end(), block.begin(), block.end());
    return out;
}

}  // namespace

RationalizabilityResult rationalizability_test(const PatchModel& pm, const DemandData& data) {
    if (pm.types_observed.empty() && pm.matrix_A.empty())
        throw InputError("enumerate_types must run before rationalizability_test");
    validate_demand_data(pm, data);
    LinearProgram lp;
    lp.sense = LpSense::minimize;
    lp.objective.assign(pm.types_observed.size(), 0.0);
    const int obs_rows = pm.observed_patch_count();
    lp.eq_matrix.assign(obs_rows, std::vector<double>(pm.types_observed.size(), 0.0));
    for (int r = 0; r < obs_rows; ++r)
        for (std::size_t v = 0; v < pm.types_observed.size(); ++v)
            lp.eq_matrix[r][v] = pm.matrix_A[r][v];
    lp.eq_rhs = concat_probs(data.probs);

    const auto solution = solve(lp);
    RationalizabilityResult result;
    result.feasible = solution.status == LpStatus::optimal;
    if (result.feasible) result.witness = solution.point;
    return result;
}

std::pair<double, double> demand_bounds(const PatchModel& pm, const DemandData& data,
                                        const Functional& f, int d) {
    if (pm.types_all.empty())
        throw InputError("enumerate_types must run before demand_bounds");
    if (d < 0 || d >= static_cast<int>(pm.budgets.size()) || pm.budgets[d].observed)
        throw InputError("demand_bounds needs a counterfactual budget index");
    const auto patches = static_cast<std::size_t>(pm.patch_count(d));
    if (f.lower.size() != patches || f.upper.size() != patches)
        throw InputError("functional envelope length does not match patch count");
    for (std::size_t s = 0; s < patches; ++s)
        if (f.lower[s] > f.upper[s])
            throw InputError("functional lower exceeds upper on patch " + std::to_string(s));
    validate_demand_data(pm, data);

    const auto p_concat = concat_probs(data.probs);
    std::vector<double> obj_lower(pm.types_all.size());
    std::vector<double> obj_upper(pm.types_all.size());
    for (std::size_t v = 0; v < pm.types_all.size(); ++v) {
        const int patch = pm.types_all[v][d];
        obj_lower[v] = f.lower[patch];
        obj_upper[v] = f.upper[patch];
    }

    const auto lo = solve(bounds_program(pm, p_concat, obj_lower, LpSense::minimize));
    if (lo.status != LpStatus::optimal)
        throw RationalizabilityError(
            "observed patch probabilities admit no rational-type mixture");
    const auto hi = solve(bounds_program(pm, p_concat, obj_upper, LpSense::maximize));
    if (hi.status != LpStatus::optimal)
        throw RationalizabilityError(
            "observed patch probabilities admit no rational-type mixture");
    return {lo.value, hi.value};
}

DrawSet sample_patch_posterior(const PatchModel& pm, const DemandData& data,
                               std::size_t draw_count, std::uint64_t seed,
                               double prior_alpha) {
    validate_demand_data(pm, data);
    if (draw_count == 0) throw InputError("draw_count must be positive");
    if (!(prior_alpha > 0.0)) throw InputError("prior_alpha must be positive");
    if (data.counts.size() != pm.observed_budgets.size())
        throw InputError("patch counts must cover every observed budget");
    std::vector<std::vector<double>> alphas(pm.observed_budgets.size());
    for (std::size_t pos = 0; pos < pm.observed_budgets.size(); ++pos) {
        const int b = pm.observed_budgets[pos];
        const auto& counts = data.counts[pos];
        if (counts.size() != pm.patches[b].size())
            throw InputError("patch counts on budget " + std::to_string(b) +
                             " must have one entry per patch");
        alphas[pos].resize(counts.size());
        for (std::size_t s = 0; s < counts.size(); ++s) {
            if (counts[s] < 0.0)
                throw InputError("negative patch count on budget " + std::to_string(b));
            alphas[pos][s] = counts[s] + prior_alpha;
        }
    }

    DrawSet out;
    out.source_tag = DrawSource::dirichlet;
    out.seed = seed;
    out.draws.assign(draw_count, {});
    for (std::size_t m = 0; m < draw_count; ++m) {
        auto& row = out.draws[m];
        row.reserve(static_cast<std::size_t>(pm.observed_patch_count()));
        for (std::size_t pos = 0; pos < alphas.size(); ++pos) {
            Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(m),
                                       static_cast<std::uint64_t>(pos)}));
            const auto block = rng.dirichlet(alphas[pos]);
            row.insert(row.end(), block.begin(), block.end());
        }
    }
    return out;
}

PricingDecision pricing_rule(const PatchModel& pm, const DemandData& data,
                             const std::vector<std::vector<double>>& observed_values,
                             const std::vector<Functional>& counterfactual_functionals,
                             const DrawSet& draws) {
    if (pm.types_all.empty())
        throw InputError("enumerate_types must run before pricing_rule");
    validate_demand_data(pm, data);
    validate_draw_set(draws);
    const std::size_t n_obs = pm.observed_budgets.size();
    const std::size_t n_cf = pm.counterfactual_budgets.size();
    if (observed_values.size() != n_obs)
        throw InputError("observed payoff values must cover every observed budget");
    for (std::size_t pos = 0; pos < n_obs; ++pos)
        if (observed_values[pos].size() != pm.patches[pm.observed_budgets[pos]].size())
            throw InputError("observed payoff values on budget " +
                             std::to_string(pm.observed_budgets[pos]) +
                             " must have one entry per patch");
    if (counterfactual_functionals.size() != n_cf)
        throw InputError("one functional is needed per counterfactual budget");

    const auto obs_rows = static_cast<std::size_t>(pm.observed_patch_count());
    if (draws.draws.front().size() != obs_rows)
        throw InputError("draws must concatenate the observed patch probability blocks (" +
                         std::to_string(obs_rows) + " entries)");

    // per-counterfactual objective vectors over types
    std::vector<std::vector<double>> cf_lower(n_cf), cf_upper(n_cf);
    for (std::size_t c = 0; c < n_cf; ++c) {
        const int d = pm.counterfactual_budgets[c];
        const auto& f = counterfactual_functionals[c];
        const auto patches = static_cast<std::size_t>(pm.patch_count(d));
        if (f.lower.size() != patches || f.upper.size() != patches)
            throw InputError("functional envelope length does not match patch count of budget " +
                             std::to_string(d));
        cf_lower[c].resize(pm.types_all.size());
        cf_upper[c].resize(pm.types_all.size());
        for (std::size_t v = 0; v < pm.types_all.size(); ++v) {
            cf_lower[c][v] = f.lower[pm.types_all[v][d]];
            cf_upper[c][v] = f.upper[pm.types_all[v][d]];
        }
    }

    const std::size_t n_budgets = pm.budgets.size();
    std::vector<KahanSum> risk_sums(n_budgets);
    std::vector<KahanSum> bound_sums(2 * n_cf);
    PricingDecision decision;
    decision.trace.reserve(draws.draws.size());

    for (std::size_t m = 0; m < draws.draws.size(); ++m) {
        const auto& p = draws.draws[m];
        std::vector<double> trace_row;
        trace_row.reserve(n_obs + 2 * n_cf);

        std::size_t offset = 0;
        for (std::size_t pos = 0; pos < n_obs; ++pos) {
            const std::size_t block = pm.patches[pm.observed_budgets[pos]].size();
            double payoff = 0.0;
            for (std::size_t s = 0; s < block; ++s)
                payoff += p[offset + s] * observed_values[pos][s];
            offset += block;
            risk_sums[pm.observed_budgets[pos]].add(-payoff);
            trace_row.push_back(payoff);
        }

        const std::vector<double> p_vec(p.begin(), p.end());
        for (std::size_t c = 0; c < n_cf; ++c) {
            const int d = pm.counterfactual_budgets[c];
            const auto lo = solve(bounds_program(pm, p_vec, cf_lower[c], LpSense::minimize));
            if (lo.status != LpStatus::optimal) {
                std::string diag = "draw " + std::to_string(m) +
                                   ": patch probabilities are not rationalizable; block sums:";
                std::size_t at = 0;
                for (std::size_t pos = 0; pos < n_obs; ++pos) {
                    const std::size_t block = pm.patches[pm.observed_budgets[pos]].size();
                    double total = 0.0;
                    for (std::size_t s = 0; s < block; ++s) total += p[at + s];
                    at += block;
                    diag += " budget " + std::to_string(pm.observed_budgets[pos]) + "=" +
                            std::to_string(total);
                }
                throw RationalizabilityError(diag);
            }
            const auto hi = solve(bounds_program(pm, p_vec, cf_upper[c], LpSense::maximize));
            if (hi.status != LpStatus::optimal)
                throw RationalizabilityError("draw " + std::to_string(m) +
                                             ": upper-bound program infeasible");
            risk_sums[d].add(-lo.value);
            bound_sums[2 * c].add(lo.value);
            bound_sums[2 * c + 1].add(hi.value);
            trace_row.push_back(lo.value);
            trace_row.push_back(hi.value);
        }
        decision.trace.push_back(std::move(trace_row));
    }

    const auto m_count = static_cast<double>(draws.draws.size());
    std::vector<double> risks(n_budgets);
    for (std::size_t b = 0; b < n_budgets; ++b) risks[b] = risk_sums[b].value() / m_count;
    decision.mean_bounds.resize(n_cf);
    for (std::size_t c = 0; c < n_cf; ++c)
        decision.mean_bounds[c] = {bound_sums[2 * c].value() / m_count,
                                   bound_sums[2 * c + 1].value() / m_count};
    decision.report = select_decision({static_cast<int>(n_budgets)}, std::move(risks), {},
                                      std::nullopt, averaged_rule_name(draws.source_tag));
    return decision;
}

PricingInput pricing_input_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("demand data JSON parse failure: ") + e.what());
    }
    if (!doc.is_object()) throw InputError("demand data JSON must be an object");
    reject_unknown_fields(doc, {"budgets", "choices", "functional", "observed"}, "demand data");
    if (!doc.contains("budgets") || !doc["budgets"].is_array())
        throw InputError("demand data needs a \"budgets\" array");
    if (!doc.contains("choices") || !doc["choices"].is_array())
        throw InputError("demand data needs a \"choices\" array");

    std::vector<BudgetSet> budgets;
    for (const auto& entry : doc["budgets"]) {
        if (!entry.is_object()) throw InputError("each budget must be an object");
        reject_unknown_fields(entry, {"prices", "label"}, "budget entry");
        if (!entry.contains("prices") || !entry.contains("label"))
            throw InputError("budget entries need \"prices\" and \"label\"");
        if (!entry["label"].is_string()) throw InputError("budget \"label\" must be a string");
        BudgetSet budget;
        budget.prices = real_vector(entry["prices"], "budget \"prices\"");
        const auto label = entry["label"].get<std::string>();
        if (label == "observed")
            budget.observed = true;
        else if (label == "counterfactual")
            budget.observed = false;
        else
            throw InputError("budget label must be \"observed\" or \"counterfactual\", got \"" +
                             label + "\"");
        budgets.push_back(std::move(budget));
    }

    PricingInput input;
    input.model = build_patches(budgets);
    enumerate_types(input.model);
    const auto& pm = input.model;

    // choices: one block per observed budget, as counts or probabilities
    input.data.probs.assign(pm.observed_budgets.size(), {});
    input.data.counts.assign(pm.observed_budgets.size(), {});
    std::vector<bool> seen(pm.budgets.size(), false);
    for (const auto& entry : doc["choices"]) {
        if (!entry.is_object()) throw InputError("each choice entry must be an object");
        reject_unknown_fields(entry, {"budget", "patch_counts", "patch_probs"}, "choice entry");
        if (!entry.contains("budget") || !entry["budget"].is_number_integer())
            throw InputError("choice entries need an integer \"budget\"");
        const int b = entry["budget"].get<int>();
        if (b < 0 || b >= static_cast<int>(pm.budgets.size()) || !pm.budgets[b].observed)
            throw InputError("choice entry budget " + std::to_string(b) +
                             " is not an observed budget");
        if (seen[b]) throw InputError("duplicate choice entry for budget " + std::to_string(b));
        seen[b] = true;
        const std::size_t pos =
            std::find(pm.observed_budgets.begin(), pm.observed_budgets.end(), b) -
            pm.observed_budgets.begin();
        const bool has_counts = entry.contains("patch_counts");
        const bool has_probs = entry.contains("patch_probs");
        if (has_counts == has_probs)
            throw InputError("choice entries need exactly one of \"patch_counts\"/\"patch_probs\"");
        if (has_counts) {
            const auto counts = real_vector(entry["patch_counts"], "\"patch_counts\"");
            double total = 0.0;
            for (double c : counts) {
                if (c < 0.0 || c != std::floor(c))
                    throw InputError("patch_counts must be nonnegative integers");
                total += c;
            }
            if (total <= 0.0)
                throw InputError("budget " + std::to_string(b) + " has zero total count");
            input.data.counts[pos] = counts;
            input.data.probs[pos].resize(counts.size());
            for (std::size_t s = 0; s < counts.size(); ++s)
                input.data.probs[pos][s] = counts[s] / total;
        } else {
            input.data.probs[pos] = real_vector(entry["patch_probs"], "\"patch_probs\"");
        }
    }
    for (int b : pm.observed_budgets)
        if (!seen[b]) throw InputError("no choice entry for observed budget " + std::to_string(b));
    validate_demand_data(pm, input.data);

    // functionals: one per counterfactual budget, as a single object or an array
    std::vector<bool> have_functional(pm.budgets.size(), false);
    input.functionals.resize(pm.counterfactual_budgets.size());
    if (!pm.counterfactual_budgets.empty()) {
        if (!doc.contains("functional"))
            throw InputError("counterfactual budgets need a \"functional\"");
        const auto& fj = doc["functional"];
        const auto handle = [&](const json& entry) {
            int d = -1;
            Functional f = parse_functional(entry, pm, d);
            if (have_functional[d])
                throw InputError("duplicate functional for budget " + std::to_string(d));
            have_functional[d] = true;
            const std::size_t pos =
                std::find(pm.counterfactual_budgets.begin(), pm.counterfactual_budgets.end(), d) -
                pm.counterfactual_budgets.begin();
            input.functionals[pos] = std::move(f);
        };
        if (fj.is_array())
            for (const auto& entry : fj) handle(entry);
        else
            handle(fj);
        for (int d : pm.counterfactual_budgets)
            if (!have_functional[d])
                throw InputError("no functional for counterfactual budget " + std::to_string(d));
    } else if (doc.contains("functional")) {
        throw InputError("\"functional\" given but no counterfactual budget exists");
    }

    // observed payoff values: one block per observed budget
    if (!doc.contains("observed")) throw InputError("demand data needs \"observed\" payoff values");
    if (!doc["observed"].is_array()) throw InputError("\"observed\" must be an array");
    input.observed_values.assign(pm.observed_budgets.size(), {});
    std::vector<bool> seen_values(pm.budgets.size(), false);
    for (const auto& entry : doc["observed"]) {
        if (!entry.is_object()) throw InputError("each observed entry must be an object");
        reject_unknown_fields(entry, {"budget", "values"}, "observed entry");
        if (!entry.contains("budget") || !entry["budget"].is_number_integer() ||
            !entry.contains("values"))
            throw InputError("observed entries need \"budget\" and \"values\"");
        const int b = entry["budget"].get<int>();
        if (b < 0 || b >= static_cast<int>(pm.budgets.size()) || !pm.budgets[b].observed)
            throw InputError("observed entry budget " + std::to_string(b) +
                             " is not an observed budget");
        if (seen_values[b])
            throw InputError("duplicate observed entry for budget " + std::to_string(b));
        seen_values[b] = true;
        const std::size_t pos =
            std::find(pm.observed_budgets.begin(), pm.observed_budgets.end(), b) -
            pm.observed_budgets.begin();
        input.observed_values[pos] = real_vector(entry["values"], "observed \"values\"");
        if (input.observed_values[pos].size() != pm.patches[b].size())
            throw InputError("observed values on budget " + std::to_string(b) +
                             " must have one entry per patch");
    }
    for (int b : pm.observed_budgets)
        if (!seen_values[b])
            throw InputError("no observed payoff values for budget " + std::to_string(b));

    return input;
}

}  // namespace paridec
