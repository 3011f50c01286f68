#pragma once

// Eigen-analysis of the composite operator Q = P X_D P restricted to the
// bandlimited subspace (the discrete analogue of the prolate spheroidal
// eigenproblem), and the contraction constants derived from its spectrum.

#include <cstdint>
#include <optional>
#include <vector>

#include "ndextrap/grid.hpp"
#include "ndextrap/operators.hpp"

namespace ndextrap {

/// Eigen-solver ran out of iterations. Carries the best residuals reached.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::vector<double> residuals)
        : Error(what), residuals_(std::move(residuals)) {}
    const std::vector<double>& residuals() const noexcept { return residuals_; }

private:
    std::vector<double> residuals_;
};

struct EigenSpectrum {
    std::size_t region_index = 0;
    /// Descending, clamped to [0, 1].
    std::vector<double> eigenvalues;
    /// Unit-norm, bandlimited, mutually orthogonal. Empty when not requested.
    std::vector<Signal> eigenvectors;
    /// ||Q psi_n - lambda_n psi_n|| per pair.
    std::vector<double> residuals;
    std::size_t iterations = 0;

    /// Spectrum with only eigenvalues, for evaluating the contraction formulas.
    static EigenSpectrum from_eigenvalues(std::size_t region_index, std::vector<double> eigenvalues);

    double lambda(std::size_t n) const;
};

struct ContractionEstimate {
    double predicted = 0.0;
    double measured = 0.0;
    std::size_t subspace_dim = 0;
};

struct EigenOptions {
    std::size_t max_iters = 10000;
    bool keep_vectors = true;
    std::uint64_t seed = 0x5eed5eedull;
    std::size_t region_index = 0;
};

/// Top `count` eigenpairs of Q via blocked subspace iteration with
/// Rayleigh-Ritz and locking of converged pairs.
EigenSpectrum eigen_spectrum(const Region& region, const SpectralSupport& support, std::size_t count, double tol,
                             const EigenOptions& options = {});

/// 1 - lambda_N.
double lipschitz_unregularized(const EigenSpectrum& spec, std::size_t order);

/// |1 - tau (lambda_N + mu)|; requires 0 < tau <= tau_upper_bound(spec, order, mu).
double lipschitz_regularized(const EigenSpectrum& spec, std::size_t order, const RegularizationParams& params);

/// 2 / (lambda_0 + lambda_N + 2 mu).
double tau_upper_bound(const EigenSpectrum& spec, std::size_t order, double mu);
double tau_upper_bound(double lambda_0, double lambda_N, double mu);

/// Regularized constant with tau at its upper bound:
/// 1 - 2 (lambda_N + mu) / (lambda_0 + lambda_N + 2 mu).
double lipschitz_at_tau_bound(double lambda_0, double lambda_N, double mu);

/// sum_m w_m L_m with L_m the per-region constant (regularized when params given).
double combined_lipschitz(const std::vector<EigenSpectrum>& spectra, const std::vector<double>& weights,
                          std::size_t order, const std::optional<RegularizationParams>& params = std::nullopt);

/// Weights proportional to lambda_N of each region, normalized to sum 1.
/// Throws ValidationError if any lambda_N is zero (it would get weight 0).
std::vector<double> suggest_weights(const std::vector<EigenSpectrum>& spectra, std::size_t order);

/// Largest measured ||T e|| / ||e|| of the single-region step over random
/// errors e in the span of the top (order + 1) eigenvectors, next to the
/// predicted constant. The spectrum must carry eigenvectors.
ContractionEstimate estimate_contraction(const EigenSpectrum& spec, const Region& region,
                                         const SpectralSupport& support, std::size_t order,
                                         const std::optional<RegularizationParams>& params = std::nullopt,
                                         std::size_t trials = 16, std::uint64_t seed = 1);

namespace detail {

/// Cyclic Jacobi eigen-decomposition of a symmetric n x n row-major matrix.
/// Returns eigenvalues in descending order; `vectors` receives the matching
/// eigenvectors as columns (row-major n x n).
std::vector<double> jacobi_eigen(std::vector<double> matrix, std::size_t n, std::vector<double>& vectors);

}  // namespace detail

}  // namespace ndextrap
