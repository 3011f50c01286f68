#include "ndextrap/engine.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <sstream>

#include "ndextrap/kernels.hpp"
#include "ndextrap/synthesis.hpp"

namespace ndextrap {

const char* to_string(RunMode mode) {
    return mode == RunMode::regularized ? "regularized" : "unregularized";
}

const char* to_string(StopReason reason) {
    return reason == StopReason::residual_tol ? "residual_tol" : "max_iters";
}

void RunConfig::validate() const {
    if (mode == RunMode::regularized && !params) {
        throw ParameterError("regularized mode requires regularization parameters");
    }
    if (mode == RunMode::unregularized && params) {
        throw ParameterError("unregularized mode takes no regularization parameters");
    }
    if (params) {
        RegularizationParams::make(params->mu, params->tau);
    }
    if (max_iters < 1) {
        throw ParameterError("max_iters must be at least 1");
    }
    if (!(residual_tol >= 0.0)) {
        throw ParameterError("residual_tol must be non-negative");
    }
    if (record_every < 1) {
        throw ParameterError("record_every must be at least 1");
    }
}

IterationReport run_extrapolation(const MeasuredSignal& meas, const SpectralSupport& support, const RunConfig& cfg,
                                  const std::optional<Signal>& truth) {
    cfg.validate();
    require_same_shape(meas.shape(), support.shape(), "run_extrapolation");
    if (truth) {
        require_same_shape(meas.shape(), truth->shape(), "run_extrapolation truth");
    }
    const GridShape& shape = meas.shape();
    const std::size_t n = shape.size();

    StepOperator step(meas, support, cfg.params);
    std::vector<double> prev = Signal(initial_estimate(meas, support)).release();
    std::vector<double> next(n);

    std::vector<IterationRecord> records;
    double prev_step = -1.0;
    StopReason stop = StopReason::max_iters;
    std::size_t k = 0;

    auto partial_report = [&]() {
        return IterationReport{records, Signal(shape, prev), stop, k};
    };

    while (k < cfg.max_iters) {
        step.apply(prev, next);
        ++k;
        if (!kernels::all_finite(next)) {
            --k;
            std::ostringstream os;
            os << "iterate " << k + 1 << " contains non-finite values";
            throw DivergenceError(os.str(), partial_report());
        }
        const double step_norm = std::sqrt(kernels::distance_squared(next, prev));
        const double prev_norm = std::sqrt(kernels::sum_squares(prev));
        IterationRecord rec;
        rec.iteration = k;
        rec.residual = step_norm / std::max(prev_norm, kResidualFloor);
        if (prev_step > 0.0) {
            rec.contraction = step_norm / prev_step;
        }
        prev_step = step_norm;
        std::swap(prev, next);

        if (truth) {
            const double e = nmse(*truth, Signal(shape, prev));
            rec.nmse_db = e;
            if (e > kDivergenceNmseDb) {
                records.push_back(rec);
                std::ostringstream os;
                os << "NMSE reached " << e << " dB at iteration " << k;
                throw DivergenceError(os.str(), partial_report());
            }
        }
        const bool converged = rec.residual <= cfg.residual_tol;
        if (converged) {
            stop = StopReason::residual_tol;
        }
        if (k % cfg.record_every == 0 || converged || k == cfg.max_iters) {
            records.push_back(rec);
        }
        if (converged) {
            break;
        }
    }
    return IterationReport{std::move(records), Signal(shape, std::move(prev)), stop, k};
}

namespace {

/// Real orthonormal basis of the bandlimited subspace: for every in-band bin
/// pair {k, -k}, cos and sin of the bin frequency (cos only for self-conjugate
/// bins), scaled to unit norm. Columns follow ascending flat bin order.
Eigen::MatrixXd fourier_basis(const SpectralSupport& support) {
    const GridShape& shape = support.shape();
    const std::size_t n = shape.size();
    const std::size_t d = support.bin_count();
    Eigen::MatrixXd basis(n, d);
    std::vector<Index> coords(n);
    for (std::size_t i = 0; i < n; ++i) {
        coords[i] = shape.unravel(i);
    }
    const double two_pi = 2.0 * std::numbers::pi;
    std::size_t col = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (!support.contains(k)) {
            continue;
        }
        const std::size_t mk = shape.mirror(k);
        if (mk < k) {
            continue;
        }
        const Index kidx = shape.unravel(k);
        const bool self = mk == k;
        const double scale = self ? 1.0 / std::sqrt(static_cast<double>(n)) : std::sqrt(2.0 / static_cast<double>(n));
        for (std::size_t i = 0; i < n; ++i) {
            // Phase as an exact rational turn before converting to radians.
            double turns = 0.0;
            for (std::size_t a = 0; a < shape.rank(); ++a) {
                const std::size_t len = shape.dim(a);
                turns += static_cast<double>((kidx[a] * coords[i][a]) % len) / static_cast<double>(len);
            }
            turns -= std::floor(turns);
            const double phase = two_pi * turns;
            basis(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(col)) = scale * std::cos(phase);
            if (!self) {
                basis(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(col + 1)) = scale * std::sin(phase);
            }
        }
        col += self ? 1 : 2;
    }
    if (col != d) {
        throw InternalConsistencyError("Fourier basis size does not match support bin count");
    }
    return basis;
}

OracleResult solve_normal_equations(const MeasuredSignal& meas, const SpectralSupport& support, double mu) {
    require_same_shape(meas.shape(), support.shape(), "oracle");
    const std::size_t d = support.bin_count();
    if (d > kDenseBudget) {
        std::ostringstream os;
        os << "bandlimited subspace dimension " << d << " exceeds the dense solve budget of " << kDenseBudget;
        throw ParameterError(os.str());
    }
    const Eigen::MatrixXd basis = fourier_basis(support);
    const auto n = static_cast<Eigen::Index>(meas.shape().size());
    const auto w_span = meas.regions().sample_weights();
    const auto h_span = meas.samples().values();
    const Eigen::Map<const Eigen::VectorXd> w(w_span.data(), n);
    const Eigen::Map<const Eigen::VectorXd> h(h_span.data(), n);

    Eigen::MatrixXd gram = basis.transpose() * w.asDiagonal() * basis;
    gram.diagonal().array() += mu;
    const Eigen::VectorXd rhs = basis.transpose() * w.cwiseProduct(h);

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    if (eig.info() != Eigen::Success) {
        throw InternalConsistencyError("oracle eigen-decomposition failed");
    }
    const Eigen::VectorXd& vals = eig.eigenvalues();
    const double vmax = vals.maxCoeff();
    const double vmin = vals.minCoeff();
    OracleResult out{Signal::zeros(meas.shape()), 0.0, false, d};
    out.condition_number = vmin > 0.0 ? vmax / vmin : std::numeric_limits<double>::infinity();
    out.ill_posed = !(out.condition_number <= kIllPosedCondition);

    const double cutoff = vmax * 1e-14;
    Eigen::VectorXd proj = eig.eigenvectors().transpose() * rhs;
    for (Eigen::Index i = 0; i < proj.size(); ++i) {
        proj(i) = vals(i) > cutoff ? proj(i) / vals(i) : 0.0;
    }
    const Eigen::VectorXd coeffs = eig.eigenvectors() * proj;
    const Eigen::VectorXd f = basis * coeffs;
    out.solution = Signal(meas.shape(), std::vector<double>(f.data(), f.data() + f.size()));
    return out;
}

}  // namespace

OracleResult least_squares_oracle(const MeasuredSignal& meas, const SpectralSupport& support) {
    return solve_normal_equations(meas, support, 0.0);
}

OracleResult tikhonov_oracle(const MeasuredSignal& meas, const SpectralSupport& support, double mu) {
    if (!(mu > 0.0) || !std::isfinite(mu)) {
        throw ParameterError("tikhonov_oracle needs mu > 0");
    }
    return solve_normal_equations(meas, support, mu);
}

}  // namespace ndextrap
