#include "paridec/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "paridec/errors.hpp"
#include "paridec/rng.hpp"

namespace paridec {

namespace {

constexpr std::uint64_t kShuffleLabel = 0x7065726d7574ULL;

std::vector<std::vector<double>> try_cholesky(const std::vector<std::vector<double>>& a,
                                              double pivot_tol, bool& ok) {
    const std::size_t k = a.size();
    std::vector<std::vector<double>> l(k, std::vector<double>(k, 0.0));
    ok = true;
    for (std::size_t j = 0; j < k; ++j) {
        double d = a[j][j];
        for (std::size_t t = 0; t < j; ++t) d -= l[j][t] * l[j][t];
        if (d > pivot_tol) {
            l[j][j] = std::sqrt(d);
            for (std::size_t i = j + 1; i < k; ++i) {
                double s = a[i][j];
                for (std::size_t t = 0; t < j; ++t) s -= l[i][t] * l[j][t];
                l[i][j] = s / l[j][j];
            }
        } else if (d >= -pivot_tol) {
            // semidefinite direction: the whole column must vanish
            l[j][j] = 0.0;
        } else {
            ok = false;
            return l;
        }
    }
    // residual check catches semidefinite factorizations that silently dropped mass
    double max_entry = 1.0;
    for (const auto& row : a)
        for (double v : row) max_entry = std::max(max_entry, std::abs(v));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double rec = 0.0;
            for (std::size_t t = 0; t <= j; ++t) rec += l[i][t] * l[j][t];
            if (std::abs(rec - a[i][j]) > 1e-8 * max_entry) {
                ok = false;
                return l;
            }
        }
    }
    return l;
}

double trace_of(const std::vector<std::vector<double>>& a) {
    double t = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) t += a[i][i];
    return t;
}

}  // namespace

std::vector<std::vector<double>> psd_cholesky(const std::vector<std::vector<double>>& a) {
    const std::size_t k = a.size();
    for (const auto& row : a)
        if (row.size() != k) throw InputError("covariance is not square");
    double max_diag = 0.0;
    for (std::size_t i = 0; i < k; ++i) max_diag = std::max(max_diag, std::abs(a[i][i]));
    const double pivot_tol = 1e-12 * std::max(1.0, max_diag);

    bool ok = false;
    auto l = try_cholesky(a, pivot_tol, ok);
    if (ok) return l;

    const double jitter = 1e-10 * trace_of(a) / static_cast<double>(k);
    auto jittered = a;
    for (std::size_t i = 0; i < k; ++i) jittered[i][i] += jitter;
    l = try_cholesky(jittered, pivot_tol, ok);
    if (ok) return l;

    std::string diag = "covariance factorization failed after jitter " + std::to_string(jitter) +
                       "; diagonal:";
    for (std::size_t i = 0; i < k; ++i) diag += " " + std::to_string(a[i][i]);
    throw NumericalError(diag);
}

DrawSet sample_gaussian(const GaussianQuasiPosterior& gqp) {
    const std::size_t k = gqp.center.size();
    if (k == 0) throw InputError("quasi-posterior center is empty");
    if (gqp.draw_count < 1) throw InputError("draw count must be positive");
    ReducedForm rf{gqp.center, gqp.covariance};
    validate_reduced_form(rf);
    const auto l = psd_cholesky(gqp.covariance);

    DrawSet out;
    out.source_tag = DrawSource::quasi_posterior;
    out.seed = gqp.seed;
    out.draws.resize(gqp.draw_count);
    std::vector<double> z(k);
    for (int m = 0; m < gqp.draw_count; ++m) {
        Rng rng(derive_seed(gqp.seed, {static_cast<std::uint64_t>(m)}));
        for (std::size_t i = 0; i < k; ++i) z[i] = rng.normal();
        auto& draw = out.draws[m];
        draw = gqp.center;
        for (std::size_t i = 0; i < k; ++i) {
            double shift = 0.0;
            for (std::size_t j = 0; j <= i; ++j) shift += l[i][j] * z[j];
            draw[i] += shift;
        }
    }
    return out;
}

DrawSet sample_dirichlet(const MultinomialPosterior& mp, int draw_count, std::uint64_t seed) {
    const std::size_t k = mp.counts.size();
    if (k == 0) throw InputError("multinomial posterior has no cells");
    if (mp.prior_alpha.size() != k)
        throw InputError("prior_alpha length does not match counts length");
    if (draw_count < 1) throw InputError("draw count must be positive");
    std::vector<double> alpha(k);
    for (std::size_t i = 0; i < k; ++i) {
        if (mp.counts[i] < 0.0) throw InputError("negative count in cell " + std::to_string(i));
        if (!(mp.prior_alpha[i] > 0.0))
            throw InputError("prior_alpha must be positive in cell " + std::to_string(i));
        alpha[i] = mp.counts[i] + mp.prior_alpha[i];
        if (!(alpha[i] > 0.0))
            throw InputError("zero total mass in cell " + std::to_string(i));
    }

    DrawSet out;
    out.source_tag = DrawSource::dirichlet;
    out.seed = seed;
    out.draws.resize(draw_count);
    for (int m = 0; m < draw_count; ++m) {
        Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(m)}));
        out.draws[m] = rng.dirichlet(alpha);
    }
    return out;
}

DrawSet bootstrap(const BootstrapPlan& plan) {
    const std::size_t n = plan.dataset.size();
    if (n == 0) throw InputError("bootstrap dataset is empty");
    if (!plan.estimator) throw InputError("bootstrap plan has no estimator");
    if (plan.replications < 1) throw InputError("replications must be positive");

    // order-independence contract: the estimator must agree on a shuffled copy
    const auto baseline = plan.estimator(plan.dataset);
    {
        auto shuffled = plan.dataset;
        Rng rng(derive_seed(plan.seed, {kShuffleLabel}));
        for (std::size_t i = n - 1; i > 0; --i)
            std::swap(shuffled[i], shuffled[rng.bounded(i + 1)]);
        const auto permuted = plan.estimator(shuffled);
        if (permuted.size() != baseline.size())
            throw InputError("estimator output length depends on data order");
        for (std::size_t i = 0; i < baseline.size(); ++i) {
            const double a = baseline[i];
            const double b = permuted[i];
            if (std::abs(a - b) > 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}))
                throw InputError(
                    "estimator is not invariant to data order (coordinate " +
                    std::to_string(i) + ": " + std::to_string(a) + " vs " + std::to_string(b) +
                    ")");
        }
    }

    DrawSet out;
    out.source_tag = DrawSource::bootstrap;
    out.seed = plan.seed;
    out.draws.resize(plan.replications);
    std::vector<std::vector<double>> resample(n);
    for (int r = 0; r < plan.replications; ++r) {
        Rng rng(derive_seed(plan.seed, {static_cast<std::uint64_t>(r)}));
        for (std::size_t i = 0; i < n; ++i) resample[i] = plan.dataset[rng.bounded(n)];
        try {
            out.draws[r] = plan.estimator(resample);
        } catch (const Error&) {
            throw;
        } catch (const std::exception& e) {
            throw NumericalError("estimator failed on bootstrap replication " +
                                 std::to_string(r) + ": " + e.what());
        }
        if (out.draws[r].size() != baseline.size())
            throw NumericalError("estimator output length changed on replication " +
                                 std::to_string(r));
    }
    return out;
}

}  // namespace paridec
