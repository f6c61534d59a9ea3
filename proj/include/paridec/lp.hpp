#pragma once

#include <vector>

// Dense two-phase primal simplex for small, highly degenerate programs:
//   min/max  c.x   s.t.  A x = b,  x >= 0.
// Bland's rule guarantees termination; tolerances are fixed (pivot 1e-10,
// feasibility 1e-9) and the iteration cap is 1e5.

namespace paridec {

enum class LpSense { minimize, maximize };
enum class LpStatus { optimal, infeasible, unbounded };

struct LinearProgram {
    LpSense sense = LpSense::minimize;
    std::vector<double> objective;
    std::vector<std::vector<double>> eq_matrix;
    std::vector<double> eq_rhs;
};

struct LpSolution {
    LpStatus status = LpStatus::optimal;
    double value = 0.0;
    std::vector<double> point;
    std::vector<double> dual;  // one multiplier per equality row (0 on redundant rows)
    int iterations = 0;
};

inline constexpr double kLpPivotTol = 1e-10;
inline constexpr double kLpFeasTol = 1e-9;
inline constexpr int kLpIterationCap = 100'000;

LpSolution solve(const LinearProgram& lp);

}  // namespace paridec
