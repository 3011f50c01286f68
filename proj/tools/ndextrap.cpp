// ndextrap: command-line front end for band-limited multi-region extrapolation.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

#include "ndextrap/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Band-limited signal extrapolation from weighted region measurements"};
    app.require_subcommand(1);

    ndextrap::app::Options opts;
    std::string config;
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config,-c", config, "Experiment configuration (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--seed", seed, "Override synthesis.seed");
        sub->add_flag("--quiet,-q", opts.quiet, "Suppress progress output");
    };

    auto* synth = app.add_subcommand("synth", "Synthesize ground truth and region measurements");
    auto* run = app.add_subcommand("run", "Run the iterative extrapolation");
    auto* eigen = app.add_subcommand("eigen", "Region eigen-spectra and contraction constants");
    auto* oracle = app.add_subcommand("oracle", "Compare the iterate against direct least-squares solutions");
    for (auto* sub : {synth, run, eigen, oracle}) {
        add_common(sub);
    }

    auto* report = app.add_subcommand("report", "Summarize a metrics.csv file");
    std::string metrics;
    bool report_quiet = false;
    report->add_option("metrics", metrics, "metrics.csv written by `run`")->required();
    report->add_flag("--quiet,-q", report_quiet, "Only print the final figures");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : ndextrap::app::kExitConfig;
    }

    opts.config = config;
    for (auto* sub : {synth, run, eigen, oracle}) {
        if (sub->count("--seed") > 0) {
            opts.seed = seed;
        }
    }

    if (*synth) {
        return ndextrap::app::synth(opts, std::cout, std::cerr);
    }
    if (*run) {
        return ndextrap::app::run(opts, std::cout, std::cerr);
    }
    if (*eigen) {
        return ndextrap::app::eigen(opts, std::cout, std::cerr);
    }
    if (*oracle) {
        return ndextrap::app::oracle(opts, std::cout, std::cerr);
    }
    return ndextrap::app::report(metrics, report_quiet, std::cout, std::cerr);
}
