#include "paridec/gaussian_forms.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "paridec/errors.hpp"

namespace paridec {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

// (G7, K15) node/weight pair on [-1, 1]; Gauss nodes are the odd-indexed
// Kronrod nodes.
constexpr double kNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kKronrodW[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kGaussW[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double error;
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double kronrod = 0.0;
    double gauss = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double offset = half * kNodes[i];
        const double lo = f(mid - offset);
        const double hi = f(mid + offset);
        const double pair = (i == 7) ? lo : lo + hi;
        kronrod += kKronrodW[i] * pair;
        if (i % 2 == 1) gauss += kGaussW[i / 2] * pair;
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

Quadrature integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol) {
    if (!(a < b)) return {0.0, 0.0};
    constexpr int kMaxPanels = 2048;
    std::vector<Panel> panels;
    panels.push_back(evaluate_panel(f, a, b));
    for (int round = 0; round < kMaxPanels; ++round) {
        double total_error = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            total_error += panels[i].error;
            if (panels[i].error > panels[worst].error) worst = i;
        }
        if (total_error <= abs_tol) {
            double value = 0.0;
            for (const auto& panel : panels) value += panel.value;
            return {value, total_error};
        }
        const Panel split = panels[worst];
        const double mid = 0.5 * (split.a + split.b);
        if (!(split.a < mid && mid < split.b))
            throw NumericalError("quadrature interval collapsed before reaching tolerance " +
                                 std::to_string(abs_tol) + "; achieved " +
                                 std::to_string(total_error));
        panels[worst] = evaluate_panel(f, split.a, mid);
        panels.push_back(evaluate_panel(f, mid, split.b));
    }
    double total_error = 0.0;
    for (const auto& panel : panels) total_error += panel.error;
    throw NumericalError("quadrature did not converge to " + std::to_string(abs_tol) +
                         " within " + std::to_string(kMaxPanels) +
                         " panels; achieved error " + std::to_string(total_error));
}

double posterior_mean_positive_part(double center, double precision) {
    if (!(precision > 0.0)) throw InputError("precision must be positive");
    const double rn = std::sqrt(precision);
    return center * normal_cdf(rn * center) + normal_pdf(rn * center) / rn;
}

double posterior_mean_max_negative_part(double center1, double center2, double precision) {
    if (!(precision > 0.0)) throw InputError("precision must be positive");
    const double rn = std::sqrt(precision);
    const double a1 = rn * center1;
    const double a2 = rn * center2;

    const double t12 = -(normal_pdf(a1) * normal_cdf(-a2) + normal_pdf(a2) * normal_cdf(-a1)) / rn +
                       (kSqrt2 / rn) * normal_pdf((a1 - a2) / kSqrt2) *
                           normal_cdf(-(a1 + a2) / kSqrt2);

    // T3 = c1 * Int_{-inf}^{-a1} pdf(x) * cdf(x + (a1 - a2)) dx, and symmetrically T4;
    // the integrand is bounded by pdf(x), so clamping the window to 13 sigma on
    // both sides leaves less than 1e-38 behind and keeps the quadrature away
    // from long stretches where pdf underflows to zero.
    const auto tail_term = [&](double center, double upper, double shift) {
        if (center == 0.0) return 0.0;
        const double hi = std::min(upper, 13.0);
        const double lower = std::min(hi, 0.0) - 13.0;
        const auto integrand = [shift](double x) {
            return normal_pdf(x) * normal_cdf(x + shift);
        };
        return center * integrate(integrand, lower, hi, 1e-12).value;
    };
    const double t3 = tail_term(center1, -a1, a1 - a2);
    const double t4 = tail_term(center2, -a2, a2 - a1);
    return t12 + t3 + t4;
}

double expected_max_gaussian(double z1, double z2) {
    const double d = (z1 - z2) / kSqrt2;
    return z1 * normal_cdf(d) + z2 * normal_cdf(-d) + kSqrt2 * normal_pdf(d);
}

SignRules asymptotic_representations(double z1, double z2, double z3) {
    SignRules rules;
    rules.plug = (std::max(z1, z2) + z3 >= 0.0) ? 1 : 0;
    rules.optimal = (expected_max_gaussian(z1, z2) + z3 >= 0.0) ? 1 : 0;
    return rules;
}

}  // namespace paridec
