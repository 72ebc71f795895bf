// medwit: batch runner for mediated-witness experiments.
//
//   medwit <mode> --config PATH [--out PATH] [--seed N] [--quiet]
//
// Modes: bound, evolve, sweep_t, sweep_p, verify, randcheck. The subcommand
// overrides experiment.mode from the config. MEDWIT_THREADS caps internal
// parallelism. Exit codes: 0 success, 2 config error, 3 numerical-validation
// failure, 4 I/O error.

#include <CLI11.hpp>

#include "medwit/medwit.hpp"
#include "medwit/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"quantitative witness of mediator non-classicality"};
    app.set_version_flag("--version", std::string("medwit ") + medwit::kVersion);
    app.require_subcommand(1);

    const std::vector<std::pair<std::string, medwit::RunMode>> modes = {
        {"bound", medwit::RunMode::bound},       {"evolve", medwit::RunMode::evolve},
        {"sweep_t", medwit::RunMode::sweep_t},   {"sweep_p", medwit::RunMode::sweep_p},
        {"verify", medwit::RunMode::verify},     {"randcheck", medwit::RunMode::randcheck},
    };

    struct SubArgs {
        std::string config;
        std::string out;
        std::uint64_t seed = 0;
        bool seed_given = false;
        bool quiet = false;
    };
    std::vector<SubArgs> args(modes.size());
    std::vector<CLI::App*> subs;

    for (std::size_t i = 0; i < modes.size(); ++i) {
        CLI::App* sub = app.add_subcommand(modes[i].first, modes[i].first + " mode");
        sub->add_option("--config", args[i].config, "experiment config file")->required();
        sub->add_option("--out", args[i].out, "output path (CSV, or report file for verify)");
        sub->add_option("--seed", args[i].seed, "override the config seed")
            ->each([&args, i](const std::string&) { args[i].seed_given = true; });
        sub->add_flag("--quiet", args[i].quiet, "suppress stdout");
        subs.push_back(sub);
    }

    CLI11_PARSE(app, argc, argv);

    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (!subs[i]->parsed()) continue;
        medwit::CliOverrides overrides;
        overrides.mode = modes[i].second;
        if (args[i].seed_given) overrides.seed = args[i].seed;
        if (!args[i].out.empty()) overrides.out = args[i].out;
        overrides.quiet = args[i].quiet;
        return medwit::run_cli(args[i].config, overrides);
    }
    return 2;
}
