#include <cmath>
#include <cstdlib>
#include <vector>

#include <doctest.h>

#include "paridec/errors.hpp"
#include "paridec/mclab.hpp"
#include "paridec/treatment.hpp"

using namespace paridec;

namespace {

DgpSpec toy_dgp(std::size_t n, std::uint64_t seed) {
    DgpSpec dgp;
    dgp.family = DgpFamily::gaussian_mean;
    dgp.P0 = {-0.5, -0.5, 0.5};
    dgp.info_matrix = {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};
    dgp.n = n;
    dgp.seed = seed;
    return dgp;
}

}  // namespace

TEST_CASE("dgp validation pins down the usable specifications") {
    auto dgp = toy_dgp(100, 1);
    CHECK_NOTHROW(validate_dgp(dgp));

    auto bad = dgp;
    bad.n = 0;
    CHECK_THROWS_AS(validate_dgp(bad), InputError);
    bad = dgp;
    bad.P0.clear();
    CHECK_THROWS_AS(validate_dgp(bad), InputError);
    bad = dgp;
    bad.info_matrix = {{1.0, 0.0}, {0.0, 1.0}};
    CHECK_THROWS_AS(validate_dgp(bad), InputError);
    bad = dgp;
    bad.family = DgpFamily::multinomial;
    CHECK_THROWS_AS(validate_dgp(bad), InputError);  // P0 not a probability vector
}

TEST_CASE("gaussian samples are reproducible with matching moments") {
    const auto dgp = toy_dgp(400, 17);
    const auto a = simulate(dgp, dgp.P0, 3);
    const auto b = simulate(dgp, dgp.P0, 3);
    CHECK(a.rows == b.rows);
    CHECK(a.estimate == b.estimate);
    REQUIRE(a.rows.size() == 400);
    REQUIRE(a.estimate.size() == 3);

    // estimate is exactly the column mean of the rows
    for (std::size_t j = 0; j < 3; ++j) {
        double m = 0.0;
        for (const auto& row : a.rows) m += row[j];
        m /= 400.0;
        CHECK(a.estimate[j] == doctest::Approx(m).epsilon(1e-12).scale(1.0));
    }
    // known-variance covariance: identity information, so 1/n on the diagonal
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(a.covariance[i][j] ==
                  doctest::Approx(i == j ? 1.0 / 400.0 : 0.0).scale(1.0).epsilon(1e-12));

    const auto other = simulate(dgp, dgp.P0, 4);
    CHECK(a.rows != other.rows);

    // the mean enters deterministically: shifting it shifts every row as-is
    std::vector<double> shifted_mean = {-0.4, -0.5, 0.5};
    const auto shifted = simulate(dgp, shifted_mean, 3);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(shifted.rows[i][0] == doctest::Approx(a.rows[i][0] + 0.1).epsilon(1e-12));
        CHECK(shifted.rows[i][1] == doctest::Approx(a.rows[i][1]).epsilon(1e-14));
    }
}

TEST_CASE("multinomial samples are one-hot rows over the cells") {
    DgpSpec dgp;
    dgp.family = DgpFamily::multinomial;
    dgp.P0 = {0.2, 0.5, 0.3};
    dgp.n = 300;
    dgp.seed = 5;
    CHECK_NOTHROW(validate_dgp(dgp));
    const auto s = simulate(dgp, dgp.P0, 0);
    REQUIRE(s.rows.size() == 300);
    double total = 0.0;
    for (const auto& row : s.rows) {
        double sum = 0.0;
        for (double v : row) {
            CHECK((v == 0.0 || v == 1.0));
            sum += v;
        }
        CHECK(sum == 1.0);
        total += row[1];
    }
    CHECK(total / 300.0 == doctest::Approx(0.5).epsilon(0.25));

    std::vector<double> invalid = {0.7, 0.5, -0.2};
    CHECK_THROWS_AS(simulate(dgp, invalid, 0), DomainError);
}

TEST_CASE("oracle and constant rules have deterministic frequentist risk") {
    const auto dgp = toy_dgp(400, 31);
    const auto profile = toy_risk_profile();

    // at P0 = (-.5, -.5, .5): R(0) = 0.5, R(1) = 0.5 -> min risk 0.5 either way
    const auto oracle = frequentist_risk(dgp, make_oracle_rule(profile), profile, 200);
    CHECK(oracle.value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(oracle.se == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

    const auto constant = frequentist_risk(dgp, make_constant_rule(0), profile, 200);
    CHECK(constant.value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(constant.se == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(frequentist_risk(dgp, make_constant_rule(0), profile, 50), InputError);
}

TEST_CASE("the h = 0 column of the excess profile matches the standalone estimate") {
    auto dgp = toy_dgp(400, 47);
    dgp.P0 = {-0.5, -0.3, 0.45};  // asymmetric so the two actions differ
    const auto profile = toy_risk_profile();
    const auto rule = make_plugin_rule(profile);

    const std::vector<std::vector<double>> grid = {{-1.0, -1.0, 1.0},
                                                   {0.0, 0.0, 0.0},
                                                   {1.0, 1.0, -1.0}};
    const auto curves = excess_risk_profile(dgp, {rule}, profile, grid, 1500);
    REQUIRE(curves.size() == 1);
    REQUIRE(curves[0].excess.size() == 3);
    CHECK(curves[0].reps == 1500);
    CHECK(curves[0].rule_name == "plug-in");

    const auto standalone = frequentist_risk(dgp, rule, profile, 1500);
    double min_risk = std::min(profile.eval(0, dgp.P0), profile.eval(1, dgp.P0));
    const double implied = standalone.value - min_risk;
    const double scaled = std::sqrt(400.0) * implied;
    CHECK(curves[0].excess[1].value == doctest::Approx(scaled).epsilon(1e-12).scale(1.0));

    // bit-identical rerun
    const auto rerun = excess_risk_profile(dgp, {rule}, profile, grid, 1500);
    for (std::size_t g = 0; g < 3; ++g) {
        CHECK(curves[0].excess[g].value == rerun[0].excess[g].value);
        CHECK(curves[0].excess[g].se == rerun[0].excess[g].se);
    }
}

TEST_CASE("the oracle rule has exactly zero excess along the whole grid") {
    const auto dgp = toy_dgp(100, 53);
    const auto profile = toy_risk_profile();
    const auto grid = make_line_grid({0.0, 0.0, 0.0}, {1.0, 1.0, -1.0}, 2.0, 5);
    const auto curves = excess_risk_profile(dgp, {make_oracle_rule(profile)}, profile, grid, 1000);
    for (const auto& point : curves[0].excess) {
        CHECK(point.value == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
        CHECK(point.se == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    }
}

TEST_CASE("excess estimates are nonnegative up to noise for honest rules") {
    const auto dgp = toy_dgp(400, 59);
    const auto profile = toy_risk_profile();
    const auto grid = make_line_grid({0.0, 0.0, 0.5}, {1.0, 1.0, -1.0}, 3.0, 5);
    const auto curves =
        excess_risk_profile(dgp, {make_plugin_rule(profile), make_quasi_bayes_rule(profile, 500)},
                            profile, grid, 1000);
    REQUIRE(curves.size() == 2);
    for (const auto& curve : curves)
        for (const auto& point : curve.excess) CHECK(point.value >= -1e-12);
}

TEST_CASE("the curve integral is the trapezoid rule with half-weight endpoints") {
    RiskCurve curve;
    curve.rule_name = "flat";
    curve.h_grid = make_line_grid({0.0}, {1.0}, 1.0, 5);
    curve.excess.assign(5, {1.0, 0.1});
    curve.reps = 1000;
    const auto avg = average_excess_risk(curve);
    CHECK(avg.value == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(avg.se > 0.0);

    RiskCurve zero = curve;
    zero.excess.assign(5, {0.0, 0.0});
    CHECK(average_excess_risk(zero).value == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));

    // direction length rescales the step
    RiskCurve diag = curve;
    diag.h_grid = make_line_grid({0.0, 0.0}, {3.0, 4.0}, 1.0, 5);
    const auto scaled = average_excess_risk(diag);
    CHECK(scaled.value == doctest::Approx(10.0).epsilon(1e-12));

    RiskCurve ragged = curve;
    ragged.h_grid[2][0] += 0.2;  // non-uniform spacing
    CHECK_THROWS_AS(average_excess_risk(ragged), InputError);

    RiskCurve single = curve;
    single.h_grid.resize(1);
    single.excess.resize(1);
    CHECK_THROWS_AS(average_excess_risk(single), InputError);
}

TEST_CASE("line grids hit both endpoints with equal spacing") {
    const auto grid = make_line_grid({1.0, 0.0}, {0.0, 2.0}, 3.0, 7);
    REQUIRE(grid.size() == 7);
    CHECK(grid.front()[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(grid.front()[1] == doctest::Approx(-6.0).epsilon(1e-14));
    CHECK(grid.back()[1] == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(grid[3][1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    for (std::size_t g = 1; g < 7; ++g)
        CHECK(grid[g][1] - grid[g - 1][1] == doctest::Approx(2.0).epsilon(1e-12));

    CHECK_THROWS_AS(make_line_grid({1.0}, {1.0, 2.0}, 1.0, 5), InputError);
    CHECK_THROWS_AS(make_line_grid({1.0}, {1.0}, 1.0, 1), InputError);
}

TEST_CASE("identical procedures agree on every replication") {
    const auto dgp = toy_dgp(200, 61);
    const auto profile = toy_risk_profile();
    CHECK(agreement_rate(dgp, make_plugin_rule(profile), make_plugin_rule(profile), 1000) == 1.0);
    CHECK_THROWS_AS(
        agreement_rate(dgp, make_plugin_rule(profile), make_plugin_rule(profile), 10),
        InputError);

    // a constant rule and the plug-in disagree somewhere on a near-tied design
    const double rate =
        agreement_rate(dgp, make_constant_rule(1), make_plugin_rule(profile), 1000);
    CHECK(rate < 1.0);
    CHECK(rate > 0.0);
}

TEST_CASE("rule failures surface as hard errors naming the rule") {
    const auto dgp = toy_dgp(100, 67);
    const auto profile = toy_risk_profile();
    RuleUnderTest bad{"exploder", [](const Sample&, std::span<const double>, std::uint64_t) -> int {
                          throw std::runtime_error("inner failure");
                      }};
    CHECK_THROWS_WITH_AS(frequentist_risk(dgp, bad, profile, 100),
                         doctest::Contains("exploder"), NumericalError);

    RuleUnderTest out_of_range{
        "wanderer",
        [](const Sample&, std::span<const double>, std::uint64_t) -> int { return 7; }};
    CHECK_THROWS_AS(frequentist_risk(dgp, out_of_range, profile, 100), Error);
}
