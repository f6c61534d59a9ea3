#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include <doctest.h>

#include "paridec/errors.hpp"
#include "paridec/pricing.hpp"

using namespace paridec;

namespace {

std::vector<BudgetSet> reference_budgets() {
    return {
        {{4.0 / 12.0, 2.0 / 12.0}, true},
        {{2.5 / 12.0, 2.5 / 12.0}, true},
        {{2.0 / 12.0, 4.0 / 12.0}, false},
    };
}

PatchModel reference_model() {
    auto pm = build_patches(reference_budgets());
    enumerate_types(pm);
    return pm;
}

// Reference rationality check, written against the transitive closure instead
// of the DFS used by the library: a patch assignment is rational when the
// strict-affordability relation between the chosen bundles has no cycle.
bool closure_rational(const PatchModel& pm, const std::vector<int>& members,
                      const std::vector<int>& combo) {
    const std::size_t nb = members.size();
    std::vector<std::array<double, 2>> bundles(nb);
    for (std::size_t a = 0; a < nb; ++a) {
        const auto& patch = pm.patches[members[a]][combo[a]];
        bundles[a] = {patch.mid[0], patch.mid[1]};
    }
    std::vector<std::vector<bool>> reach(nb, std::vector<bool>(nb, false));
    for (std::size_t a = 0; a < nb; ++a) {
        const auto& q = pm.budgets[members[a]].prices;
        for (std::size_t b = 0; b < nb; ++b) {
            if (a == b) continue;
            const double spend = q[0] * bundles[b][0] + q[1] * bundles[b][1];
            if (spend < 1.0 - 1e-9) reach[a][b] = true;
        }
    }
    for (std::size_t k = 0; k < nb; ++k)
        for (std::size_t i = 0; i < nb; ++i)
            for (std::size_t j = 0; j < nb; ++j)
                if (reach[i][k] && reach[k][j]) reach[i][j] = true;
    for (std::size_t i = 0; i < nb; ++i)
        if (reach[i][i]) return false;
    return true;
}

std::set<std::vector<int>> closure_types(const PatchModel& pm, const std::vector<int>& members) {
    std::set<std::vector<int>> types;
    std::vector<int> combo(members.size(), 0);
    while (true) {
        if (closure_rational(pm, members, combo)) types.insert(combo);
        std::size_t pos = members.size();
        while (pos > 0) {
            --pos;
            if (++combo[pos] < static_cast<int>(pm.patches[members[pos]].size())) break;
            combo[pos] = 0;
            if (pos == 0) return types;
        }
    }
}

DemandData probs_data(std::vector<std::vector<double>> probs) {
    DemandData data;
    data.probs = std::move(probs);
    return data;
}

std::string fixture_text() {
    std::ifstream in("data/demand_fixture.json");
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("budget crossings split each line at the documented points") {
    const auto pm = build_patches(reference_budgets());
    REQUIRE(pm.patches.size() == 3);
    REQUIRE(pm.patches[0].size() == 3);
    REQUIRE(pm.patches[1].size() == 3);
    REQUIRE(pm.patches[2].size() == 3);

    const auto check_patch = [&](int b, int s, double lo, double hi) {
        CHECK(pm.patches[b][s].x_lo == doctest::Approx(lo).epsilon(1e-12).scale(1.0));
        CHECK(pm.patches[b][s].x_hi == doctest::Approx(hi).epsilon(1e-12).scale(1.0));
    };
    check_patch(0, 0, 0.0, 1.2);
    check_patch(0, 1, 1.2, 2.0);
    check_patch(0, 2, 2.0, 3.0);
    check_patch(1, 0, 0.0, 1.2);
    check_patch(1, 1, 1.2, 3.6);
    check_patch(1, 2, 3.6, 4.8);
    check_patch(2, 0, 0.0, 2.0);
    check_patch(2, 1, 2.0, 3.6);
    check_patch(2, 2, 3.6, 6.0);

    // every midpoint bundle lies on its own budget line
    for (int b = 0; b < 3; ++b)
        for (const auto& patch : pm.patches[b]) {
            const auto& q = pm.budgets[b].prices;
            CHECK(q[0] * patch.mid[0] + q[1] * patch.mid[1] ==
                  doctest::Approx(1.0).epsilon(1e-12));
        }

    CHECK(pm.observed_budgets == std::vector<int>{0, 1});
    CHECK(pm.counterfactual_budgets == std::vector<int>{2});
    CHECK(pm.observed_patch_count() == 6);
}

TEST_CASE("geometry validation rejects degenerate inputs") {
    CHECK_THROWS_AS(build_patches({}), InputError);
    CHECK_THROWS_AS(build_patches({{{1.0}, true}}), InputError);
    CHECK_THROWS_AS(build_patches({{{1.0, -2.0}, true}}), InputError);
    CHECK_THROWS_AS(build_patches({{{0.5, 0.5}, true}, {{0.5, 0.5}, false}}), InputError);
}

TEST_CASE("type enumeration agrees with the transitive-closure reference") {
    const auto pm = reference_model();
    CHECK(pm.types_observed.size() == 7);
    CHECK(pm.types_all.size() == 14);

    std::set<std::vector<int>> got_obs(pm.types_observed.begin(), pm.types_observed.end());
    CHECK(got_obs == closure_types(pm, {0, 1}));
    std::set<std::vector<int>> got_all(pm.types_all.begin(), pm.types_all.end());
    CHECK(got_all == closure_types(pm, {0, 1, 2}));

    // every restricted type extends to at least one full type and vice versa
    std::set<std::vector<int>> projected;
    for (const auto& t : pm.types_all) projected.insert({t[0], t[1]});
    CHECK(projected == got_obs);
}

TEST_CASE("assignment matrices put one unit per budget block in each column") {
    const auto pm = reference_model();
    REQUIRE(pm.matrix_A.size() == 6);
    REQUIRE(pm.matrix_A.front().size() == 7);
    REQUIRE(pm.matrix_Astar.size() == 9);
    REQUIRE(pm.matrix_Astar.front().size() == 14);

    for (std::size_t v = 0; v < 7; ++v) {
        int block1 = 0, block2 = 0;
        for (int r = 0; r < 3; ++r) block1 += pm.matrix_A[r][v];
        for (int r = 3; r < 6; ++r) block2 += pm.matrix_A[r][v];
        CHECK(block1 == 1);
        CHECK(block2 == 1);
        // the unit sits exactly at the type's patch
        CHECK(pm.matrix_A[pm.types_observed[v][0]][v] == 1);
        CHECK(pm.matrix_A[3 + pm.types_observed[v][1]][v] == 1);
    }
    for (std::size_t v = 0; v < 14; ++v) {
        int cf = 0;
        for (int r = 6; r < 9; ++r) cf += pm.matrix_Astar[r][v];
        CHECK(cf == 1);
        CHECK(pm.matrix_Astar[6 + pm.types_all[v][2]][v] == 1);
    }
}

TEST_CASE("rationalizability reduces to the first-patch inequality here") {
    const auto pm = reference_model();

    auto feasible = rationalizability_test(pm, probs_data({{0.3, 0.4, 0.3}, {0.2, 0.5, 0.3}}));
    CHECK(feasible.feasible);
    REQUIRE(feasible.witness.size() == 7);
    // witness is a distribution over types reproducing the observed probabilities
    double mass = 0.0;
    for (double w : feasible.witness) {
        CHECK(w >= -1e-9);
        mass += w;
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
    std::vector<double> reproduced(6, 0.0);
    for (std::size_t v = 0; v < 7; ++v)
        for (int r = 0; r < 6; ++r) reproduced[r] += pm.matrix_A[r][v] * feasible.witness[v];
    const std::vector<double> target = {0.3, 0.4, 0.3, 0.2, 0.5, 0.3};
    for (int r = 0; r < 6; ++r)
        CHECK(reproduced[r] == doctest::Approx(target[r]).epsilon(1e-8).scale(1.0));

    // boundary: equality is still rationalizable, crossing it is not
    CHECK(rationalizability_test(pm, probs_data({{0.3, 0.4, 0.3}, {0.3, 0.4, 0.3}})).feasible);
    CHECK_FALSE(
        rationalizability_test(pm, probs_data({{0.3, 0.4, 0.3}, {0.4, 0.3, 0.3}})).feasible);
}

TEST_CASE("demand bounds on point-mass data match hand calculations") {
    const auto pm = reference_model();
    const Functional f{{0.0, 2.0, 3.6}, {2.0, 3.6, 6.0}};

    SUBCASE("first patches pin nothing about the counterfactual") {
        const auto [lo, hi] = demand_bounds(pm, probs_data({{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}}), f, 2);
        CHECK(lo == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
        CHECK(hi == doctest::Approx(6.0).epsilon(1e-9));
    }
    SUBCASE("last patches pin the counterfactual to its last patch") {
        const auto [lo, hi] = demand_bounds(pm, probs_data({{0.0, 0.0, 1.0}, {0.0, 0.0, 1.0}}), f, 2);
        CHECK(lo == doctest::Approx(3.6).epsilon(1e-9));
        CHECK(hi == doctest::Approx(6.0).epsilon(1e-9));
    }
    SUBCASE("a collapsed envelope collapses the bounds") {
        const Functional flat{{1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}};
        const auto [lo, hi] =
            demand_bounds(pm, probs_data({{0.3, 0.4, 0.3}, {0.2, 0.5, 0.3}}), flat, 2);
        CHECK(lo == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(hi == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("non-rationalizable data raises the dedicated error") {
        CHECK_THROWS_AS(demand_bounds(pm, probs_data({{0.3, 0.4, 0.3}, {0.4, 0.3, 0.3}}), f, 2),
                        RationalizabilityError);
    }
    SUBCASE("bounds are ordered and within the envelope span") {
        const auto [lo, hi] =
            demand_bounds(pm, probs_data({{0.35, 0.3, 0.35}, {0.1, 0.55, 0.35}}), f, 2);
        CHECK(lo <= hi + 1e-12);
        CHECK(lo >= -1e-9);
        CHECK(hi <= 6.0 + 1e-9);
    }
}

TEST_CASE("patch posterior draws are per-budget simplex blocks") {
    const auto pm = reference_model();
    DemandData data;
    data.probs = {{0.35, 0.3, 0.35}, {0.1, 0.55, 0.35}};
    data.counts = {{210.0, 180.0, 210.0}, {60.0, 330.0, 210.0}};

    const auto ds = sample_patch_posterior(pm, data, 20'000, 808);
    CHECK(ds.source_tag == DrawSource::dirichlet);
    REQUIRE(ds.draws.size() == 20'000);
    REQUIRE(ds.draws.front().size() == 6);
    std::vector<double> mean(6, 0.0);
    for (const auto& row : ds.draws) {
        double s1 = row[0] + row[1] + row[2];
        double s2 = row[3] + row[4] + row[5];
        CHECK(s1 == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(s2 == doctest::Approx(1.0).epsilon(1e-9));
        for (int i = 0; i < 6; ++i) mean[i] += row[i] / 20'000.0;
    }
    CHECK(mean[0] == doctest::Approx(211.0 / 603.0).epsilon(0.01));
    CHECK(mean[4] == doctest::Approx(331.0 / 603.0).epsilon(0.01));

    const auto again = sample_patch_posterior(pm, data, 20'000, 808);
    CHECK(ds.draws == again.draws);

    DemandData no_counts;
    no_counts.probs = data.probs;
    CHECK_THROWS_AS(sample_patch_posterior(pm, no_counts, 10, 1), InputError);
}

TEST_CASE("pricing decision accounts for every draw in the trace") {
    const auto pm = reference_model();
    DemandData data;
    data.probs = {{0.35, 0.3, 0.35}, {0.1, 0.55, 0.35}};
    data.counts = {{210.0, 180.0, 210.0}, {60.0, 330.0, 210.0}};
    const std::vector<std::vector<double>> values = {{0.6, 1.6, 2.5}, {0.6, 2.4, 4.2}};
    const std::vector<Functional> functionals = {{{0.0, 2.0, 3.6}, {2.0, 3.6, 6.0}}};

    const auto draws = sample_patch_posterior(pm, data, 500, 909);
    const auto decision = pricing_rule(pm, data, values, functionals, draws);

    REQUIRE(decision.trace.size() == 500);
    REQUIRE(decision.trace.front().size() == 4);  // two payoffs, then lo and hi
    std::vector<double> col(4, 0.0);
    for (const auto& row : decision.trace) {
        CHECK(row[2] <= row[3] + 1e-12);
        for (int i = 0; i < 4; ++i) col[i] += row[i] / 500.0;
    }
    REQUIRE(decision.report.averaged_risks.size() == 3);
    CHECK(decision.report.averaged_risks[0] ==
          doctest::Approx(-col[0]).epsilon(1e-11).scale(1.0));
    CHECK(decision.report.averaged_risks[1] ==
          doctest::Approx(-col[1]).epsilon(1e-11).scale(1.0));
    CHECK(decision.report.averaged_risks[2] ==
          doctest::Approx(-col[2]).epsilon(1e-11).scale(1.0));
    REQUIRE(decision.mean_bounds.size() == 1);
    CHECK(decision.mean_bounds[0][0] == doctest::Approx(col[2]).epsilon(1e-11).scale(1.0));
    CHECK(decision.mean_bounds[0][1] == doctest::Approx(col[3]).epsilon(1e-11).scale(1.0));

    const int argmin = static_cast<int>(std::min_element(decision.report.averaged_risks.begin(),
                                                         decision.report.averaged_risks.end()) -
                                        decision.report.averaged_risks.begin());
    CHECK(decision.report.chosen == argmin);
    CHECK(decision.report.rule_name == "dirichlet-bayes");
}

TEST_CASE("demand JSON input reproduces the model and rejects schema breaks") {
    const auto input = pricing_input_from_json(fixture_text());
    CHECK(input.model.budgets.size() == 3);
    CHECK(input.model.types_observed.size() == 7);
    CHECK(input.model.types_all.size() == 14);
    CHECK(input.data.counts.size() == 2);
    CHECK(input.data.probs[0][0] == doctest::Approx(0.35).epsilon(1e-12));
    CHECK(input.observed_values.size() == 2);
    CHECK(input.functionals.size() == 1);

    CHECK_THROWS_AS(pricing_input_from_json("[]"), InputError);
    CHECK_THROWS_AS(pricing_input_from_json(R"({"budgets": [], "choices": []})"), InputError);

    const std::string base = fixture_text();
    auto corrupt = [&](const std::string& from, const std::string& to) {
        std::string text = base;
        const auto at = text.find(from);
        REQUIRE(at != std::string::npos);
        text.replace(at, from.size(), to);
        return text;
    };
    CHECK_THROWS_AS(pricing_input_from_json(corrupt("\"observed\"", "\"observd\"")), InputError);
    CHECK_THROWS_AS(pricing_input_from_json(corrupt("\"functional\"", "\"func\"")), InputError);
    CHECK_THROWS_AS(pricing_input_from_json(corrupt("\"patch_counts\"", "\"patch_count\"")),
                    InputError);
}
