#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "minklab/config.hpp"
#include "minklab/runners.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for asymptotically Minkowski wave models"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "experiment config file")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "RNG seed");
    };

    CLI::App* geo = app.add_subcommand("geodesic", "geodesic flow ensemble");
    CLI::App* mourre = app.add_subcommand("mourre", "escape-function positivity scan");
    CLI::App* resolvent = app.add_subcommand("resolvent", "resolvent and smoothing suite");
    CLI::App* optimality = app.add_subcommand("optimality", "counterexample dichotomy");
    for (CLI::App* sub : {geo, mourre, resolvent, optimality}) add_common(sub);

    CLI11_PARSE(app, argc, argv);

    try {
        const minklab::ExperimentConfig cfg = minklab::ExperimentConfig::load(config_path);
        if (geo->parsed()) return minklab::run_geodesic(cfg, out_dir, seed);
        if (mourre->parsed()) return minklab::run_mourre(cfg, out_dir, seed);
        if (resolvent->parsed()) return minklab::run_resolvent(cfg, out_dir, seed);
        return minklab::run_optimality(cfg, out_dir, seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
