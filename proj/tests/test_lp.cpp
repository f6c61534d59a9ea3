#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <doctest.h>

#include "paridec/errors.hpp"
#include "paridec/lp.hpp"
#include "paridec/rng.hpp"

using namespace paridec;

namespace {

// Brute-force reference: enumerate basic solutions of A x = b, x >= 0 and scan
// the objective.  Independent of the simplex path; only for tiny instances.
struct VertexScan {
    bool feasible = false;
    double min_value = std::numeric_limits<double>::infinity();
    double max_value = -std::numeric_limits<double>::infinity();
};

bool solve_square(std::vector<std::vector<double>> m, std::vector<double> rhs,
                  std::vector<double>& out) {
    const std::size_t k = m.size();
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < k; ++r)
            if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
        if (std::abs(m[pivot][col]) < 1e-11) return false;
        std::swap(m[pivot], m[col]);
        std::swap(rhs[pivot], rhs[col]);
        for (std::size_t r = 0; r < k; ++r) {
            if (r == col) continue;
            const double f = m[r][col] / m[col][col];
            for (std::size_t c = col; c < k; ++c) m[r][c] -= f * m[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    out.resize(k);
    for (std::size_t i = 0; i < k; ++i) out[i] = rhs[i] / m[i][i];
    return true;
}

VertexScan vertex_scan(const std::vector<double>& objective,
                       const std::vector<std::vector<double>>& a,
                       const std::vector<double>& b) {
    const std::size_t m = a.size();
    const std::size_t n = objective.size();
    VertexScan scan;
    std::vector<std::size_t> subset(m);
    // iterate all m-subsets of columns lexicographically
    for (std::size_t i = 0; i < m; ++i) subset[i] = i;
    while (true) {
        std::vector<std::vector<double>> basis(m, std::vector<double>(m));
        std::vector<double> rhs = b;
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = 0; c < m; ++c) basis[r][c] = a[r][subset[c]];
        std::vector<double> xb;
        if (solve_square(basis, rhs, xb)) {
            bool nonneg = true;
            for (double v : xb)
                if (v < -1e-9) nonneg = false;
            if (nonneg) {
                std::vector<double> x(n, 0.0);
                for (std::size_t c = 0; c < m; ++c) x[subset[c]] = std::max(xb[c], 0.0);
                std::vector<double> residual(m, 0.0);
                bool consistent = true;
                for (std::size_t r = 0; r < m; ++r) {
                    double s = 0.0;
                    for (std::size_t c = 0; c < n; ++c) s += a[r][c] * x[c];
                    if (std::abs(s - b[r]) > 1e-8) consistent = false;
                }
                (void)residual;
                if (consistent) {
                    double v = 0.0;
                    for (std::size_t c = 0; c < n; ++c) v += objective[c] * x[c];
                    scan.feasible = true;
                    scan.min_value = std::min(scan.min_value, v);
                    scan.max_value = std::max(scan.max_value, v);
                }
            }
        }
        // next subset
        std::size_t i = m;
        while (i > 0) {
            --i;
            if (subset[i] != i + n - m) {
                ++subset[i];
                for (std::size_t j = i + 1; j < m; ++j) subset[j] = subset[j - 1] + 1;
                break;
            }
            if (i == 0) return scan;
        }
    }
}

void check_duality(const LinearProgram& lp, const LpSolution& sol) {
    REQUIRE(sol.status == LpStatus::optimal);
    double yb = 0.0;
    for (std::size_t r = 0; r < lp.eq_rhs.size(); ++r) yb += sol.dual[r] * lp.eq_rhs[r];
    CHECK(yb == doctest::Approx(sol.value).epsilon(1e-8).scale(1.0));
    for (std::size_t c = 0; c < lp.objective.size(); ++c) {
        double ya = 0.0;
        for (std::size_t r = 0; r < lp.eq_rhs.size(); ++r) ya += sol.dual[r] * lp.eq_matrix[r][c];
        const double reduced = lp.objective[c] - ya;
        if (lp.sense == LpSense::minimize)
            CHECK(reduced >= -1e-7);
        else
            CHECK(reduced <= 1e-7);
    }
}

}  // namespace

TEST_CASE("one-row programs solve to the cheapest vertex with exact duals") {
    LinearProgram lp;
    lp.objective = {-1.0, -1.0, 0.0};
    lp.eq_matrix = {{1.0, 1.0, 1.0}};
    lp.eq_rhs = {1.0};
    const auto sol = solve(lp);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.value == doctest::Approx(-1.0).epsilon(1e-12));
    double sum = 0.0;
    for (double v : sol.point) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    check_duality(lp, sol);

    lp.sense = LpSense::maximize;
    lp.objective = {2.0, 3.0, 1.0};
    const auto mx = solve(lp);
    REQUIRE(mx.status == LpStatus::optimal);
    CHECK(mx.value == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(mx.point[1] == doctest::Approx(1.0).epsilon(1e-12));
    check_duality(lp, mx);
}

TEST_CASE("contradictory rows are reported infeasible") {
    LinearProgram lp;
    lp.objective = {1.0, 1.0};
    lp.eq_matrix = {{1.0, 1.0}, {1.0, 1.0}};
    lp.eq_rhs = {1.0, 2.0};
    CHECK(solve(lp).status == LpStatus::infeasible);

    // negative rhs with nonnegative variables and a nonnegative row
    lp.eq_matrix = {{1.0, 1.0}};
    lp.eq_rhs = {-1.0};
    lp.objective = {1.0, 1.0};
    CHECK(solve(lp).status == LpStatus::infeasible);
}

TEST_CASE("an uncontained improving ray is reported unbounded") {
    LinearProgram lp;
    lp.objective = {-1.0, 0.0};
    lp.eq_matrix = {{0.0, 1.0}};  // x0 unconstrained above
    lp.eq_rhs = {1.0};
    CHECK(solve(lp).status == LpStatus::unbounded);

    lp.sense = LpSense::maximize;
    lp.objective = {1.0, 0.0};
    CHECK(solve(lp).status == LpStatus::unbounded);
}

TEST_CASE("duplicated rows stay solvable and mark one multiplier redundant") {
    LinearProgram lp;
    lp.objective = {1.0, 2.0};
    lp.eq_matrix = {{1.0, 1.0}, {1.0, 1.0}};
    lp.eq_rhs = {1.0, 1.0};
    const auto sol = solve(lp);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.value == doctest::Approx(1.0).epsilon(1e-12));
    check_duality(lp, sol);
}

TEST_CASE("a small transportation program hits the known optimum") {
    // two supplies (1, 2), two demands (2, 1); costs row-major {1, 4, 3, 1}
    LinearProgram lp;
    lp.objective = {1.0, 4.0, 3.0, 1.0};
    lp.eq_matrix = {
        {1.0, 1.0, 0.0, 0.0},  // supply a
        {0.0, 0.0, 1.0, 1.0},  // supply b
        {1.0, 0.0, 1.0, 0.0},  // demand 1
        {0.0, 1.0, 0.0, 1.0},  // demand 2 (redundant with the rest)
    };
    lp.eq_rhs = {1.0, 2.0, 2.0, 1.0};
    const auto sol = solve(lp);
    REQUIRE(sol.status == LpStatus::optimal);
    // ship a->1 (1 unit), b->1 (1 unit), b->2 (1 unit): 1 + 3 + 1
    CHECK(sol.value == doctest::Approx(5.0).epsilon(1e-10));
    check_duality(lp, sol);
}

TEST_CASE("randomized programs agree with the vertex scan in both senses") {
    Rng gen(2024);
    int solved = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t m = 3, n = 8;
        std::vector<std::vector<double>> a(m, std::vector<double>(n));
        for (auto& row : a)
            for (auto& v : row) v = gen.uniform();
        std::vector<double> x0(n);
        for (auto& v : x0) v = gen.uniform();  // strictly positive => feasible rhs
        std::vector<double> b(m, 0.0);
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = 0; c < n; ++c) b[r] += a[r][c] * x0[c];
        std::vector<double> objective(n);
        for (auto& v : objective) v = gen.normal();

        const auto scan = vertex_scan(objective, a, b);
        REQUIRE(scan.feasible);

        LinearProgram lp;
        lp.objective = objective;
        lp.eq_matrix = a;
        lp.eq_rhs = b;
        const auto lo = solve(lp);
        REQUIRE(lo.status == LpStatus::optimal);
        CHECK(lo.value == doctest::Approx(scan.min_value).epsilon(1e-7).scale(1.0));
        check_duality(lp, lo);

        lp.sense = LpSense::maximize;
        const auto hi = solve(lp);
        REQUIRE(hi.status == LpStatus::optimal);
        CHECK(hi.value == doctest::Approx(scan.max_value).epsilon(1e-7).scale(1.0));
        check_duality(lp, hi);
        ++solved;
    }
    CHECK(solved == 40);
}

TEST_CASE("solutions satisfy their own constraints") {
    LinearProgram lp;
    lp.objective = {0.3, -1.2, 0.0, 2.0};
    lp.eq_matrix = {{1.0, 2.0, 1.0, 0.0}, {0.0, 1.0, 3.0, 1.0}};
    lp.eq_rhs = {4.0, 3.0};
    const auto sol = solve(lp);
    REQUIRE(sol.status == LpStatus::optimal);
    for (double v : sol.point) CHECK(v >= -1e-9);
    for (std::size_t r = 0; r < 2; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < 4; ++c) s += lp.eq_matrix[r][c] * sol.point[c];
        CHECK(s == doctest::Approx(lp.eq_rhs[r]).epsilon(1e-9));
    }
    double v = 0.0;
    for (std::size_t c = 0; c < 4; ++c) v += lp.objective[c] * sol.point[c];
    CHECK(v == doctest::Approx(sol.value).epsilon(1e-10).scale(1.0));
}

TEST_CASE("malformed programs are rejected") {
    LinearProgram lp;
    lp.objective = {1.0, 1.0};
    lp.eq_matrix = {{1.0}};  // row length mismatch
    lp.eq_rhs = {1.0};
    CHECK_THROWS_AS(solve(lp), InputError);

    lp.eq_matrix = {{1.0, 1.0}};
    lp.eq_rhs = {1.0, 2.0};  // rhs length mismatch
    CHECK_THROWS_AS(solve(lp), InputError);

    lp.objective.clear();
    lp.eq_matrix.clear();
    lp.eq_rhs.clear();
    CHECK_THROWS_AS(solve(lp), InputError);
}
