#include <cmath>
#include <doctest.h>

#include "paridec/errors.hpp"
#include "paridec/gaussian_forms.hpp"

using namespace paridec;

// Expected values below were computed with an independent high-precision
// quadrature over the density of max(theta1, theta2) (absolute error below
// 1e-13) and frozen here.

TEST_CASE("positive-part posterior mean matches the frozen oracle") {
    CHECK(posterior_mean_positive_part(0.3, 25.0) ==
          doctest::Approx(0.305861358752521).epsilon(1e-12));
    CHECK(posterior_mean_positive_part(0.0, 1.0) ==
          doctest::Approx(0.398942280401433).epsilon(1e-12));
    CHECK(posterior_mean_positive_part(5.0, 1.0) ==
          doctest::Approx(5.00000005346165).epsilon(1e-12));
    CHECK(posterior_mean_positive_part(-5.0, 1.0) ==
          doctest::Approx(5.34616553383316e-08).epsilon(1e-9));
    CHECK(posterior_mean_positive_part(-0.12, 400.0) ==
          doctest::Approx(0.000136022203790609).epsilon(1e-10));
}

TEST_CASE("capped-max posterior mean matches the frozen oracle") {
    CHECK(posterior_mean_max_negative_part(0.3, -0.2, 25.0) ==
          doctest::Approx(-0.00422140562359131).epsilon(1e-9));
    CHECK(posterior_mean_max_negative_part(-0.1, -0.15, 400.0) ==
          doctest::Approx(-0.0904613233615631).epsilon(1e-10));
    CHECK(posterior_mean_max_negative_part(0.0, 0.0, 1.0) ==
          doctest::Approx(-0.116847488627555).epsilon(1e-10));
    CHECK(posterior_mean_max_negative_part(-10.0, -10.0, 1.0) ==
          doctest::Approx(-9.43581041645225).epsilon(1e-12));
    CHECK(posterior_mean_max_negative_part(1.5, 0.7, 9.0) ==
          doctest::Approx(-2.73045243981579e-09).epsilon(1e-6));
    CHECK(posterior_mean_max_negative_part(-0.319, -0.3298, 865.052) ==
          doctest::Approx(-0.30473570373942168).epsilon(1e-12));
}

TEST_CASE("capped-max posterior mean is symmetric and bounded above by zero") {
    for (const auto& [c1, c2, n] : {std::tuple{0.4, -0.9, 16.0}, {-0.2, -0.1, 100.0},
                                    {1.0, 1.0, 4.0}, {-3.0, 2.0, 50.0}}) {
        const double a = posterior_mean_max_negative_part(c1, c2, n);
        const double b = posterior_mean_max_negative_part(c2, c1, n);
        CHECK(a == doctest::Approx(b).epsilon(1e-11));
        CHECK(a <= 1e-12);
    }
}

TEST_CASE("posterior means approach their degenerate limits as precision grows") {
    CHECK(posterior_mean_positive_part(0.7, 1e8) == doctest::Approx(0.7).epsilon(1e-6));
    CHECK(posterior_mean_positive_part(-0.7, 1e8) == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
    CHECK(posterior_mean_max_negative_part(0.5, 0.2, 1e8) ==
          doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
    CHECK(posterior_mean_max_negative_part(-0.5, -0.2, 1e8) ==
          doctest::Approx(-0.2).epsilon(1e-6));
}

TEST_CASE("expected max of two normals matches the frozen oracle") {
    CHECK(expected_max_gaussian(0.0, 0.0) ==
          doctest::Approx(0.5641895835477563).epsilon(1e-13));
    CHECK(expected_max_gaussian(2.0, 2.0) == doctest::Approx(2.56418958354776).epsilon(1e-13));
    CHECK(expected_max_gaussian(-0.3, -0.3) ==
          doctest::Approx(0.264189583547756).epsilon(1e-12));
    CHECK(expected_max_gaussian(10.0, 0.0) == doctest::Approx(10.0000000000001).epsilon(1e-13));
    CHECK(expected_max_gaussian(1.25, -0.75) ==
          doctest::Approx(1.30025454166001).epsilon(1e-13));
}

TEST_CASE("expected max is symmetric and shifts with a common translation") {
    for (const auto& [z1, z2] : {std::pair{0.3, -1.7}, {2.0, 2.5}, {-4.0, 1.0}}) {
        CHECK(expected_max_gaussian(z1, z2) ==
              doctest::Approx(expected_max_gaussian(z2, z1)).epsilon(1e-14));
        CHECK(expected_max_gaussian(z1 + 3.25, z2 + 3.25) ==
              doctest::Approx(expected_max_gaussian(z1, z2) + 3.25).epsilon(1e-13));
    }
}

TEST_CASE("gap above the pointwise max follows the exact smoothing identity") {
    // E[max(z1+Z1, z2+Z2)] - max(z1,z2) = sqrt(2) * (phi(w) - w * Phi(-w))
    // with w = |z1-z2| / sqrt(2); positive everywhere, vanishing as |z1-z2| grows
    const double root2 = std::sqrt(2.0);
    for (double z1 = -4.0; z1 <= 4.0; z1 += 0.37) {
        for (double z2 = -4.0; z2 <= 4.0; z2 += 0.41) {
            const double gap = expected_max_gaussian(z1, z2) - std::max(z1, z2);
            const double w = std::abs(z1 - z2) / root2;
            const double identity = root2 * (normal_pdf(w) - w * normal_cdf(-w));
            // absolute comparison: the gap is a difference of nearly equal
            // numbers, so its relative accuracy degrades as it shrinks
            CHECK(gap == doctest::Approx(identity).epsilon(1e-12).scale(1.0));
            CHECK(gap > 0.0);
        }
    }
}

TEST_CASE("adaptive quadrature integrates smooth integrands to tolerance") {
    const auto gauss = integrate([](double x) { return normal_pdf(x); }, -10.0, 10.0, 1e-12);
    CHECK(gauss.value == doctest::Approx(1.0).epsilon(1e-12));
    const auto second_moment =
        integrate([](double x) { return x * x * normal_pdf(x); }, -12.0, 12.0, 1e-11);
    CHECK(second_moment.value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("quadrature reports failure when a kink defeats the tolerance") {
    CHECK_THROWS_AS(integrate([](double x) { return std::sqrt(std::abs(x - 0.3)); }, -1.0, 1.0,
                              0.0),
                    NumericalError);
}

TEST_CASE("limit representations: the averaged statistic dominates the plug-in one") {
    SUBCASE("agreement when the signal is decisive") {
        const auto strong = asymptotic_representations(1.0, 2.0, 3.0);
        CHECK(strong.plug);
        CHECK(strong.optimal);
        const auto negative = asymptotic_representations(-3.0, -4.0, -1.0);
        CHECK_FALSE(negative.plug);
        CHECK_FALSE(negative.optimal);
    }
    SUBCASE("near the boundary only the averaged statistic treats") {
        // max(z1, z2) + z3 slightly below zero, smoothing gap pushes above
        const auto split = asymptotic_representations(-0.1, -0.1, 0.05);
        CHECK_FALSE(split.plug);
        CHECK(split.optimal);
    }
    SUBCASE("whenever the plug-in treats, so does the averaged statistic") {
        for (double z1 = -3.0; z1 <= 3.0; z1 += 0.5)
            for (double z2 = -3.0; z2 <= 3.0; z2 += 0.5)
                for (double z3 = -2.0; z3 <= 2.0; z3 += 0.25) {
                    const auto rules = asymptotic_representations(z1, z2, z3);
                    if (rules.plug) CHECK(rules.optimal);
                }
    }
}
