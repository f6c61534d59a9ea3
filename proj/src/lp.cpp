#include "paridec/lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "paridec/errors.hpp"

namespace paridec {

namespace {

struct Tableau {
    // rows of B^{-1}[A | I]; the identity block doubles as phase-1 artificials
    // and, after the solve, as B^{-1} for reading off dual multipliers.
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    std::vector<int> basis;      // column index basic in each row
    std::vector<int> row_origin; // original constraint index per tableau row
    int iterations = 0;
};

void pivot(Tableau& t, std::size_t row, std::size_t col) {
    auto& pivot_row = t.rows[row];
    const double p = pivot_row[col];
    for (auto& v : pivot_row) v /= p;
    t.rhs[row] /= p;
    pivot_row[col] = 1.0;  // cut round-off drift on the pivot itself
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        if (i == row) continue;
        const double factor = t.rows[i][col];
        if (factor == 0.0) continue;
        for (std::size_t j = 0; j < t.rows[i].size(); ++j)
            t.rows[i][j] -= factor * pivot_row[j];
        t.rows[i][col] = 0.0;
        t.rhs[i] -= factor * t.rhs[row];
    }
    t.basis[row] = static_cast<int>(col);
}

enum class StepOutcome { stepped, optimal, unbounded };

// Bland's rule: entering = smallest eligible column with negative reduced cost,
// leaving = min ratio with smallest basic index on ties.
StepOutcome simplex_step(Tableau& t, const std::vector<double>& cost, std::size_t allowed_cols) {
    const std::size_t m = t.rows.size();
    std::vector<double> basic_cost(m);
    for (std::size_t i = 0; i < m; ++i) basic_cost[i] = cost[t.basis[i]];

    std::size_t entering = allowed_cols;
    for (std::size_t j = 0; j < allowed_cols; ++j) {
        double rc = cost[j];
        for (std::size_t i = 0; i < m; ++i) rc -= basic_cost[i] * t.rows[i][j];
        if (rc < -kLpPivotTol) {
            entering = j;
            break;
        }
    }
    if (entering == allowed_cols) return StepOutcome::optimal;

    std::size_t leaving = m;
    double best_ratio = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (t.rows[i][entering] <= kLpPivotTol) continue;
        const double ratio = t.rhs[i] / t.rows[i][entering];
        if (leaving == m || ratio < best_ratio ||
            (ratio == best_ratio && t.basis[i] < t.basis[leaving])) {
            leaving = i;
            best_ratio = ratio;
        }
    }
    if (leaving == m) return StepOutcome::unbounded;
    pivot(t, leaving, entering);
    ++t.iterations;
    if (t.iterations > kLpIterationCap) {
        std::string diag = "simplex exceeded " + std::to_string(kLpIterationCap) +
                           " iterations; basis:";
        for (int b : t.basis) diag += " " + std::to_string(b);
        throw NumericalError(diag);
    }
    return StepOutcome::stepped;
}

// Returns false when the program is unbounded in the given cost direction.
bool run_simplex(Tableau& t, const std::vector<double>& cost, std::size_t allowed_cols) {
    for (;;) {
        switch (simplex_step(t, cost, allowed_cols)) {
            case StepOutcome::stepped: break;
            case StepOutcome::optimal: return true;
            case StepOutcome::unbounded: return false;
        }
    }
}

}  // namespace

LpSolution solve(const LinearProgram& lp) {
    const std::size_t n = lp.objective.size();
    const std::size_t m = lp.eq_matrix.size();
    if (n == 0) throw InputError("LP has no variables");
    if (lp.eq_rhs.size() != m) throw InputError("LP rhs length does not match row count");
    for (const auto& row : lp.eq_matrix)
        if (row.size() != n) throw InputError("LP row length does not match variable count");
    for (double c : lp.objective)
        if (!std::isfinite(c)) throw InputError("LP objective has non-finite entries");
    for (const auto& row : lp.eq_matrix)
        for (double v : row)
            if (!std::isfinite(v)) throw InputError("LP matrix has non-finite entries");
    for (double b : lp.eq_rhs)
        if (!std::isfinite(b)) throw InputError("LP rhs has non-finite entries");

    const bool maximize = lp.sense == LpSense::maximize;
    std::vector<double> c(lp.objective);
    if (maximize)
        for (auto& v : c) v = -v;

    std::vector<double> row_sign(m, 1.0);
    Tableau t;
    t.rows.resize(m, std::vector<double>(n + m, 0.0));
    t.rhs.resize(m);
    t.basis.resize(m);
    t.row_origin.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double sign = lp.eq_rhs[i] < 0.0 ? -1.0 : 1.0;
        row_sign[i] = sign;
        for (std::size_t j = 0; j < n; ++j) t.rows[i][j] = sign * lp.eq_matrix[i][j];
        t.rows[i][n + i] = 1.0;
        t.rhs[i] = sign * lp.eq_rhs[i];
        t.basis[i] = static_cast<int>(n + i);
        t.row_origin[i] = static_cast<int>(i);
    }

    LpSolution solution;

    // phase 1: drive artificial mass to zero
    if (m > 0) {
        std::vector<double> phase1_cost(n + m, 0.0);
        for (std::size_t j = n; j < n + m; ++j) phase1_cost[j] = 1.0;
        run_simplex(t, phase1_cost, n + m);  // bounded below by 0, never unbounded
        double artificial_mass = 0.0;
        for (std::size_t i = 0; i < t.rows.size(); ++i)
            if (t.basis[i] >= static_cast<int>(n)) artificial_mass += t.rhs[i];
        if (artificial_mass > kLpFeasTol) {
            solution.status = LpStatus::infeasible;
            solution.iterations = t.iterations;
            return solution;
        }
        // pivot remaining artificials out; rows that cannot release one are redundant
        for (std::size_t i = t.rows.size(); i-- > 0;) {
            if (t.basis[i] < static_cast<int>(n)) continue;
            std::size_t entering = n;
            for (std::size_t j = 0; j < n; ++j) {
                if (std::abs(t.rows[i][j]) > kLpPivotTol) {
                    entering = j;
                    break;
                }
            }
            if (entering < n) {
                pivot(t, i, entering);
            } else {
                t.rows.erase(t.rows.begin() + static_cast<std::ptrdiff_t>(i));
                t.rhs.erase(t.rhs.begin() + static_cast<std::ptrdiff_t>(i));
                t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(i));
                t.row_origin.erase(t.row_origin.begin() + static_cast<std::ptrdiff_t>(i));
            }
        }
    }

    // phase 2 over the original columns only
    std::vector<double> phase2_cost(n + m, 0.0);
    std::copy(c.begin(), c.end(), phase2_cost.begin());
    if (!run_simplex(t, phase2_cost, n)) {
        solution.status = LpStatus::unbounded;
        solution.iterations = t.iterations;
        return solution;
    }

    solution.point.assign(n, 0.0);
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        if (t.basis[i] < static_cast<int>(n)) solution.point[t.basis[i]] = t.rhs[i];
    double value = 0.0;
    for (std::size_t j = 0; j < n; ++j) value += c[j] * solution.point[j];

    // duals from the identity block: y_i = c_B . (B^{-1} e_i)
    solution.dual.assign(m, 0.0);
    for (std::size_t orig = 0; orig < m; ++orig) {
        bool kept = false;
        for (int kept_origin : t.row_origin)
            if (kept_origin == static_cast<int>(orig)) kept = true;
        if (!kept) continue;
        double y = 0.0;
        for (std::size_t i = 0; i < t.rows.size(); ++i)
            y += phase2_cost[t.basis[i]] * t.rows[i][n + orig];
        solution.dual[orig] = row_sign[orig] * y;
    }

    if (maximize) {
        value = -value;
        for (auto& y : solution.dual) y = -y;
    }
    solution.value = value;
    solution.status = LpStatus::optimal;
    solution.iterations = t.iterations;
    return solution;
}

}  // namespace paridec
