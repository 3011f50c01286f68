#pragma once

// Subcommand implementations behind the `ndextrap` CLI. Each returns a
// process exit code and never throws.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include "ndextrap/config.hpp"
#include "ndextrap/grid.hpp"

namespace ndextrap::app {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitConfig = 2,
    kExitDivergence = 3,
    kExitIo = 4,
};

struct Options {
    std::filesystem::path config;
    std::optional<std::uint64_t> seed;
    bool quiet = false;
};

/// Everything an experiment needs, derived deterministically from its config.
struct Scenario {
    ExperimentConfig config;
    SpectralSupport support;
    WeightedRegionSet regions;
    /// Bandlimited ground truth h.
    Signal truth;
    /// h plus optional out-of-band noise; what the regions observe.
    Signal observed;
    MeasuredSignal measurement;
};

ExperimentConfig load_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override);
Scenario build_scenario(const ExperimentConfig& cfg);

int synth(const Options& opts, std::ostream& out, std::ostream& err);
int run(const Options& opts, std::ostream& out, std::ostream& err);
int eigen(const Options& opts, std::ostream& out, std::ostream& err);
int oracle(const Options& opts, std::ostream& out, std::ostream& err);
int report(const std::filesystem::path& metrics, bool quiet, std::ostream& out, std::ostream& err);

}  // namespace ndextrap::app
