#pragma once

#include <functional>

// Closed-form Gaussian expectations used by the treatment rules: positive /
// negative parts and pairwise maxima of independent normal coordinates, plus
// the limiting plug-in and optimal sign rules they induce.

namespace paridec {

double normal_pdf(double x);
double normal_cdf(double x);

struct Quadrature {
    double value = 0.0;
    double error = 0.0;  // achieved absolute error estimate
};

// Adaptive Gauss-Kronrod (G7,K15) on [a,b]; throws NumericalError when the
// interval budget is exhausted before reaching abs_tol.
Quadrature integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol);

// E[(X)_+] for X ~ N(center, 1/precision):
//   center * Phi(sqrt(precision) * center) + pdf(...) / sqrt(precision).
double posterior_mean_positive_part(double center, double precision);

// E[(max(X1, X2))_-] for independent Xi ~ N(center_i, 1/precision), evaluated
// from the exact four-term decomposition; the two bivariate-probability terms
// are integrated numerically to 1e-10.
double posterior_mean_max_negative_part(double center1, double center2, double precision);

// E[max(Z1 + z1, Z2 + z2)] for independent standard normal Zi:
//   z1*Phi(d) + z2*Phi(-d) + sqrt(2)*pdf(d),  d = (z1 - z2)/sqrt(2).
// Strictly exceeds max(z1, z2) for all inputs.
double expected_max_gaussian(double z1, double z2);

struct SignRules {
    int plug = 0;     // I[ max(z1, z2) + z3 >= 0 ]
    int optimal = 0;  // I[ expected_max_gaussian(z1, z2) + z3 >= 0 ]
};

// The two limiting treatment rules at a local parameter z = (z1, z2, z3); the
// optimal rule treats whenever the plug-in rule does.
SignRules asymptotic_representations(double z1, double z2, double z3);

}  // namespace paridec
