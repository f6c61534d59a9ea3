#include <CLI11.hpp>
#include <cstdint>
#include <string>

#include "paridec/cli.hpp"

namespace {

struct Flags {
    paridec::RunConfig config;
    double lipschitz = 0.0;
    std::size_t n = 0;
    double grid_half_width = 0.0;
    std::size_t grid_points = 0;
};

void add_common(CLI::App* sub, Flags& flags, bool input_required) {
    auto* input = sub->add_option("--input", flags.config.input_path, "input JSON (or directory)");
    if (input_required) input->required();
    sub->add_option("--out", flags.config.output_dir,
                    "output directory (default: $PARIDEC_OUT_DIR or .)");
    sub->add_option("--seed", flags.config.seed, "master seed");
    sub->add_option("--draws", flags.config.draw_count, "posterior draw count");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"decision rules for partially identified payoffs"};
    app.require_subcommand(1);

    Flags treat_flags;
    auto* treat = app.add_subcommand("treat", "treatment decision from a study panel");
    add_common(treat, treat_flags, true);
    auto* c_opt = treat->add_option("--C", treat_flags.lipschitz,
                                    "override the panel's Lipschitz constant");

    Flags price_flags;
    auto* price = app.add_subcommand("price", "price decision from demand data");
    add_common(price, price_flags, true);

    Flags evaluate_flags;
    auto* evaluate = app.add_subcommand("evaluate", "Monte Carlo rule comparison");
    add_common(evaluate, evaluate_flags, true);
    auto* n_opt = evaluate->add_option("--n", evaluate_flags.n, "override the sample size");
    auto* hw_opt = evaluate->add_option("--grid-half-width", evaluate_flags.grid_half_width,
                                        "override the grid half width");
    auto* points_opt = evaluate->add_option("--grid-points", evaluate_flags.grid_points,
                                            "override the grid point count");

    Flags reproduce_flags;
    auto* reproduce = app.add_subcommand("reproduce", "run the release checks on the fixtures");
    add_common(reproduce, reproduce_flags, true);

    CLI11_PARSE(app, argc, argv);

    if (treat->parsed()) {
        if (c_opt->count() > 0) treat_flags.config.lipschitz_override = treat_flags.lipschitz;
        return paridec::cmd_treat(treat_flags.config);
    }
    if (price->parsed()) return paridec::cmd_price(price_flags.config);
    if (evaluate->parsed()) {
        if (n_opt->count() > 0) evaluate_flags.config.n_override = evaluate_flags.n;
        if (hw_opt->count() > 0)
            evaluate_flags.config.grid_half_width_override = evaluate_flags.grid_half_width;
        if (points_opt->count() > 0)
            evaluate_flags.config.grid_points_override = evaluate_flags.grid_points;
        return paridec::cmd_evaluate(evaluate_flags.config);
    }
    return paridec::cmd_reproduce(reproduce_flags.config);
}
