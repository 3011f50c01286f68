#pragma once

// JSON experiment configuration.
//
// {
//   "grid": [64, 64],                                   required
//   "support": {"half_bandwidth": [4, 4]},              required
//   "regions": [{"corner": [0, 0], "extent": [8, 8]}],  required, M >= 1
//   "weights": {"mode": "uniform"}
//            | {"mode": "explicit", "values": [...]}
//            | {"mode": "suggested", "order": N},
//   "mode": "unregularized" | "regularized",
//   "regularization": {"mu": 0.005, "tau": 1.97},      iff mode is regularized
//   "synthesis": {"seed": 1, "rms": 1.0,
//                 "noise": {"snr_db": 6.9, "mode": "bumps" | "spectral",
//                           "bumps": 16, "width_min": 0.75, "width_max": 2.0,
//                           "amplitude": 0.001}},
//   "run": {"max_iters": 1000, "residual_tol": 0.0, "record_every": 1},
//   "eigen": {"count": 8, "tol": 1e-10, "order": 0},
//   "output": {"directory": ".", "pgm": false}
// }
//
// Unknown keys are rejected. The noise generator is seeded with seed + 1.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ndextrap/engine.hpp"
#include "ndextrap/grid.hpp"
#include "ndextrap/synthesis.hpp"

namespace ndextrap {

struct ConfigIssue {
    std::string path;
    std::string message;
};

class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<ConfigIssue> issues);
    const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

private:
    std::vector<ConfigIssue> issues_;
};

struct RectSpec {
    Index corner;
    Index extent;
};

enum class WeightMode { uniform, explicit_values, suggested };

struct WeightSpec {
    WeightMode mode = WeightMode::uniform;
    std::vector<double> values;
    std::size_t order = 0;
};

struct NoiseSpec {
    double snr_db = 0.0;
    NoiseParams params;
};

struct SynthesisConfig {
    std::uint64_t seed = 1;
    double rms = 1.0;
    std::optional<NoiseSpec> noise;

    std::uint64_t noise_seed() const noexcept { return seed + 1; }
};

struct EigenConfig {
    std::size_t count = 8;
    double tol = 1e-10;
    std::size_t order = 0;
};

struct OutputConfig {
    std::string directory = ".";
    bool pgm = false;
};

struct ExperimentConfig {
    std::vector<std::size_t> grid;
    std::vector<std::size_t> half_bandwidth;
    std::vector<RectSpec> regions;
    WeightSpec weights;
    RunMode mode = RunMode::unregularized;
    std::optional<RegularizationParams> regularization;
    SynthesisConfig synthesis;
    std::size_t max_iters = 1000;
    double residual_tol = 0.0;
    std::size_t record_every = 1;
    EigenConfig eigen;
    OutputConfig output;

    RunConfig run_config() const;
};

/// Parses and fully validates a configuration document. Throws ConfigError
/// listing every problem found, each with a JSON path.
ExperimentConfig parse_config(const std::string& text);

/// Canonical JSON for a configuration; parse_config(to_json(c)) == c.
std::string to_json(const ExperimentConfig& cfg);

}  // namespace ndextrap
