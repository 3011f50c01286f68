#pragma once

#include <optional>
#include <vector>

#include "ndextrap/grid.hpp"
#include "ndextrap/operators.hpp"

namespace ndextrap {

enum class RunMode { unregularized, regularized };
enum class StopReason { max_iters, residual_tol };

const char* to_string(RunMode mode);
const char* to_string(StopReason reason);

struct RunConfig {
    RunMode mode = RunMode::unregularized;
    std::optional<RegularizationParams> params;
    std::size_t max_iters = 1000;
    double residual_tol = 0.0;
    std::size_t record_every = 1;

    /// Throws ParameterError on inconsistent settings.
    void validate() const;
};

struct IterationRecord {
    std::size_t iteration = 0;
    /// Present only when the run was given the ground truth.
    std::optional<double> nmse_db;
    /// ||f_k - f_{k-1}|| / max(||f_{k-1}||, 1e-300)
    double residual = 0.0;
    /// ||f_k - f_{k-1}|| / ||f_{k-1} - f_{k-2}||; absent for k = 1 or a zero previous step.
    std::optional<double> contraction;
};

struct IterationReport {
    std::vector<IterationRecord> records;
    Signal estimate;
    StopReason stop = StopReason::max_iters;
    std::size_t iterations = 0;
};

/// NMSE above this (dB) is treated as divergence.
inline constexpr double kDivergenceNmseDb = 100.0;
inline constexpr double kResidualFloor = 1e-300;

/// The iteration produced a non-finite value or blew past the NMSE ceiling.
/// Carries the report up to the last finite iterate.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, std::optional<IterationReport> last)
        : Error(what), last_(std::move(last)) {}
    const std::optional<IterationReport>& last_report() const noexcept { return last_; }

private:
    std::optional<IterationReport> last_;
};

/// Starts from initial_estimate and repeats the selected step until the
/// residual drops to `residual_tol` or `max_iters` steps have run.
IterationReport run_extrapolation(const MeasuredSignal& meas, const SpectralSupport& support, const RunConfig& cfg,
                                  const std::optional<Signal>& truth = std::nullopt);

/// Largest bandlimited-subspace dimension the dense oracles accept.
inline constexpr std::size_t kDenseBudget = 4096;
inline constexpr double kIllPosedCondition = 1e12;

struct OracleResult {
    Signal solution;
    /// Condition number of the (regularized) normal matrix.
    double condition_number = 0.0;
    bool ill_posed = false;
    std::size_t dimension = 0;
};

/// Direct minimizer over bandlimited f of sum_m w_m ||X_m f - h||^2, from the
/// normal equations in a real orthonormal Fourier basis of the support.
/// Rank-deficient systems return the minimum-norm solution and set ill_posed.
OracleResult least_squares_oracle(const MeasuredSignal& meas, const SpectralSupport& support);

/// As least_squares_oracle with the added penalty mu ||f||^2 (mu > 0).
OracleResult tikhonov_oracle(const MeasuredSignal& meas, const SpectralSupport& support, double mu);

}  // namespace ndextrap
