// Command line front end: run a configured scenario, reproduce the two figure
// sets, or execute the built-in property suites.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <qfigrow/qfigrow.hpp>

int main(int argc, char** argv) {
    CLI::App app{"QFI growth-bound toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "simulate a configured scenario and emit its table");
    run->add_option("--config", config_path, "path to the run configuration")->required();

    std::string fig1_dir = "figures";
    auto* fig1 = app.add_subcommand("fig1", "trajectories and bounds for ground/Fock-2 starts");
    fig1->add_option("--out", fig1_dir, "output directory");

    std::string fig2_dir = "figures";
    auto* fig2 = app.add_subcommand("fig2", "detuning sweeps and measurement-cycle panels");
    fig2->add_option("--out", fig2_dir, "output directory");

    double rank_tol = qfigrow::kDefaultRankTol;
    unsigned long long seed = 7;
    auto* selftest = app.add_subcommand("selftest", "run the built-in property suites");
    selftest->add_option("--rank-tol", rank_tol, "density-matrix rank tolerance override");
    selftest->add_option("--seed", seed, "random suite seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            const qfigrow::RunConfig cfg = qfigrow::load_run_config(config_path);
            qfigrow::run_command(cfg, std::cout);
        } else if (fig1->parsed()) {
            qfigrow::fig1_command(fig1_dir, std::cout);
        } else if (fig2->parsed()) {
            qfigrow::fig2_command(fig2_dir, std::cout);
        } else if (selftest->parsed()) {
            qfigrow::SelftestOptions opts;
            opts.rank_tol = rank_tol;
            opts.seed = seed;
            if (!qfigrow::run_selftest(opts, std::cout)) return 1;
        }
    } catch (const qfigrow::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
