#include "ndextrap/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "ndextrap/kernels.hpp"
#include "ndextrap/random.hpp"

namespace ndextrap {

namespace detail {

std::vector<double> jacobi_eigen(std::vector<double> a, std::size_t n, std::vector<double>& vectors) {
    if (a.size() != n * n) {
        throw ParameterError("jacobi_eigen: matrix size mismatch");
    }
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        v[i * n + i] = 1.0;
    }
    auto at = [n](std::vector<double>& m, std::size_t r, std::size_t c) -> double& { return m[r * n + c]; };

    double total = 0.0;
    for (double x : a) {
        total += x * x;
    }
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                off += at(a, p, q) * at(a, p, q);
            }
        }
        if (off == 0.0 || off <= 1e-32 * total) {
            break;
        }
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = at(a, p, q);
                if (apq == 0.0) {
                    continue;
                }
                const double theta = (at(a, q, q) - at(a, p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = at(a, k, p);
                    const double akq = at(a, k, q);
                    at(a, k, p) = c * akp - s * akq;
                    at(a, k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = at(a, p, k);
                    const double aqk = at(a, q, k);
                    at(a, p, k) = c * apk - s * aqk;
                    at(a, q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = at(v, k, p);
                    const double vkq = at(v, k, q);
                    at(v, k, p) = c * vkp - s * vkq;
                    at(v, k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a[i * n + i] > a[j * n + j]; });
    std::vector<double> values(n);
    vectors.assign(n * n, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
        values[c] = a[order[c] * n + order[c]];
        for (std::size_t r = 0; r < n; ++r) {
            vectors[r * n + c] = v[r * n + order[c]];
        }
    }
    return values;
}

}  // namespace detail

namespace {

using Vec = std::vector<double>;

constexpr double kEigenRangeSlack = 1e-8;

void random_bandlimited_vector(SplitMix64& rng, Projector& proj, Vec& out) {
    for (double& x : out) {
        x = rng.normal();
    }
    proj.project(out, out);
}

/// Orthogonalizes `x` against `basis` (two Gram-Schmidt passes) and normalizes.
/// Returns false when x lies (numerically) in the span of the basis.
bool orthonormalize_against(Vec& x, const std::vector<Vec>& basis) {
    const double before = std::sqrt(kernels::sum_squares(x));
    if (before == 0.0) {
        return false;
    }
    for (int pass = 0; pass < 2; ++pass) {
        for (const Vec& b : basis) {
            const double c = kernels::dot(b, x);
            kernels::axpby(1.0, x, -c, b, x);
        }
    }
    const double after = std::sqrt(kernels::sum_squares(x));
    if (after <= 1e-10 * before) {
        return false;
    }
    kernels::axpby(1.0 / after, x, 0.0, x, x);
    return true;
}

void fix_sign(Vec& v) {
    double peak = 0.0;
    for (double x : v) {
        peak = std::max(peak, std::abs(x));
    }
    for (double x : v) {
        if (std::abs(x) > 1e-8 * peak) {
            if (x < 0.0) {
                for (double& y : v) {
                    y = -y;
                }
            }
            return;
        }
    }
}

void check_order(const EigenSpectrum& spec, std::size_t order) {
    if (order >= spec.eigenvalues.size()) {
        std::ostringstream os;
        os << "order N = " << order << " needs at least " << order + 1 << " eigenvalues, spectrum has "
           << spec.eigenvalues.size();
        throw ParameterError(os.str());
    }
}

}  // namespace

EigenSpectrum EigenSpectrum::from_eigenvalues(std::size_t region_index, std::vector<double> eigenvalues) {
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
        if (!(eigenvalues[i] >= 0.0 && eigenvalues[i] <= 1.0)) {
            throw ParameterError("eigenvalue " + std::to_string(i) + " is outside [0, 1]");
        }
        if (i > 0 && eigenvalues[i] > eigenvalues[i - 1]) {
            throw ParameterError("eigenvalues must be in descending order");
        }
    }
    EigenSpectrum s;
    s.region_index = region_index;
    s.residuals.assign(eigenvalues.size(), 0.0);
    s.eigenvalues = std::move(eigenvalues);
    return s;
}

double EigenSpectrum::lambda(std::size_t n) const {
    if (n >= eigenvalues.size()) {
        throw ParameterError("eigenvalue index " + std::to_string(n) + " out of range");
    }
    return eigenvalues[n];
}

EigenSpectrum eigen_spectrum(const Region& region, const SpectralSupport& support, std::size_t count, double tol,
                             const EigenOptions& options) {
    require_same_shape(region.shape(), support.shape(), "eigen_spectrum");
    const std::size_t dim = support.bin_count();
    if (count < 1 || count > dim) {
        std::ostringstream os;
        os << "requested " << count << " eigenpairs but the bandlimited subspace has dimension " << dim;
        throw ParameterError(os.str());
    }
    if (!(tol > 0.0)) {
        throw ParameterError("eigen tolerance must be positive");
    }

    const std::size_t n = region.shape().size();
    const std::size_t block = std::min(dim, count + std::max<std::size_t>(count, 8));
    Projector proj(support);
    SplitMix64 rng(options.seed);

    std::vector<Vec> locked;
    std::vector<double> locked_values;
    std::vector<double> locked_residuals;

    auto refill = [&](std::vector<Vec>& active, std::size_t want) {
        std::vector<Vec> basis = locked;
        basis.insert(basis.end(), active.begin(), active.end());
        Vec x(n);
        int attempts = 0;
        while (active.size() < want) {
            random_bandlimited_vector(rng, proj, x);
            if (orthonormalize_against(x, basis)) {
                active.push_back(x);
                basis.push_back(x);
            } else if (++attempts > 1000) {
                throw InternalConsistencyError("eigen_spectrum: cannot extend the search block");
            }
        }
    };

    std::vector<Vec> active;
    refill(active, block);

    std::vector<double> best_residuals(count, std::numeric_limits<double>::infinity());
    std::size_t iter = 0;
    Vec tmp(n);
    while (locked.size() < count) {
        if (++iter > options.max_iters) {
            std::ostringstream os;
            os << "eigen_spectrum did not converge in " << options.max_iters << " iterations (" << locked.size()
               << " of " << count << " pairs converged)";
            throw ConvergenceError(os.str(), best_residuals);
        }
        const std::size_t p = active.size();
        std::vector<Vec> applied(p, Vec(n));
        for (std::size_t j = 0; j < p; ++j) {
            kernels::masked_multiply(active[j], region.mask(), tmp);
            proj.project(tmp, applied[j]);
        }
        std::vector<double> h(p * p);
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = i; j < p; ++j) {
                const double hij = 0.5 * (kernels::dot(active[i], applied[j]) + kernels::dot(active[j], applied[i]));
                h[i * p + j] = hij;
                h[j * p + i] = hij;
            }
        }
        std::vector<double> vecs;
        const std::vector<double> theta = detail::jacobi_eigen(std::move(h), p, vecs);

        std::vector<Vec> ritz(p, Vec(n, 0.0));
        std::vector<Vec> qritz(p, Vec(n, 0.0));
        for (std::size_t c = 0; c < p; ++c) {
            for (std::size_t j = 0; j < p; ++j) {
                const double coef = vecs[j * p + c];
                kernels::axpby(1.0, ritz[c], coef, active[j], ritz[c]);
                kernels::axpby(1.0, qritz[c], coef, applied[j], qritz[c]);
            }
        }

        std::size_t newly_locked = 0;
        for (std::size_t c = 0; c < p && locked.size() < count; ++c) {
            kernels::axpby(1.0, qritz[c], -theta[c], ritz[c], tmp);
            const double res = std::sqrt(kernels::sum_squares(tmp));
            const std::size_t slot = locked.size();
            best_residuals[slot] = std::min(best_residuals[slot], res);
            if (res >= tol) {
                break;
            }
            locked.push_back(ritz[c]);
            locked_values.push_back(theta[c]);
            locked_residuals.push_back(res);
            ++newly_locked;
        }
        if (locked.size() >= count) {
            break;
        }

        // Power step on the unconverged Ritz vectors; directions Q nearly
        // annihilates keep the Ritz vector itself.
        double qmax = 0.0;
        for (std::size_t c = newly_locked; c < p; ++c) {
            qmax = std::max(qmax, std::sqrt(kernels::sum_squares(qritz[c])));
        }
        std::vector<Vec> next;
        std::vector<Vec> basis = locked;
        const std::size_t want = std::min(block, dim) - locked.size();
        for (std::size_t c = newly_locked; c < p && next.size() < want; ++c) {
            Vec x = std::sqrt(kernels::sum_squares(qritz[c])) > 1e-8 * qmax ? qritz[c] : ritz[c];
            if (orthonormalize_against(x, basis)) {
                basis.push_back(x);
                next.push_back(std::move(x));
            }
        }
        active = std::move(next);
        refill(active, want);
    }

    EigenSpectrum spec;
    spec.region_index = options.region_index;
    spec.iterations = iter;
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return locked_values[i] > locked_values[j]; });
    for (std::size_t i : order) {
        const double lam = locked_values[i];
        if (lam < -kEigenRangeSlack || lam > 1.0 + kEigenRangeSlack) {
            std::ostringstream os;
            os << "eigenvalue " << lam << " lies outside [0, 1]";
            throw InternalConsistencyError(os.str());
        }
        spec.eigenvalues.push_back(std::clamp(lam, 0.0, 1.0));
        spec.residuals.push_back(locked_residuals[i]);
        if (options.keep_vectors) {
            Vec v = locked[i];
            fix_sign(v);
            spec.eigenvectors.emplace_back(region.shape(), std::move(v));
        }
    }
    return spec;
}

double lipschitz_unregularized(const EigenSpectrum& spec, std::size_t order) {
    check_order(spec, order);
    return 1.0 - spec.eigenvalues[order];
}

double tau_upper_bound(double lambda_0, double lambda_N, double mu) {
    if (!(mu >= 0.0)) {
        throw ParameterError("mu must be non-negative");
    }
    const double denom = lambda_0 + lambda_N + 2.0 * mu;
    if (!(denom > 0.0)) {
        throw ParameterError("tau bound undefined: lambda_0 + lambda_N + 2 mu is zero");
    }
    return 2.0 / denom;
}

double tau_upper_bound(const EigenSpectrum& spec, std::size_t order, double mu) {
    check_order(spec, order);
    return tau_upper_bound(spec.eigenvalues[0], spec.eigenvalues[order], mu);
}

double lipschitz_regularized(const EigenSpectrum& spec, std::size_t order, const RegularizationParams& params) {
    const double bound = tau_upper_bound(spec, order, params.mu);
    if (!(params.tau > 0.0) || params.tau > bound) {
        std::ostringstream os;
        os.precision(17);
        os << "tau = " << params.tau << " is outside (0, " << bound << "]; contraction is not guaranteed";
        throw ParameterError(os.str());
    }
    return std::abs(1.0 - params.tau * (spec.eigenvalues[order] + params.mu));
}

double lipschitz_at_tau_bound(double lambda_0, double lambda_N, double mu) {
    return 1.0 - 2.0 * (lambda_N + mu) / (lambda_0 + lambda_N + 2.0 * mu);
}

double combined_lipschitz(const std::vector<EigenSpectrum>& spectra, const std::vector<double>& weights,
                          std::size_t order, const std::optional<RegularizationParams>& params) {
    if (spectra.size() != weights.size() || spectra.empty()) {
        throw ParameterError("combined_lipschitz needs one weight per spectrum");
    }
    double total = 0.0;
    for (std::size_t m = 0; m < spectra.size(); ++m) {
        const double l = params ? lipschitz_regularized(spectra[m], order, *params)
                                : lipschitz_unregularized(spectra[m], order);
        total += weights[m] * l;
    }
    return total;
}

std::vector<double> suggest_weights(const std::vector<EigenSpectrum>& spectra, std::size_t order) {
    if (spectra.empty()) {
        throw ParameterError("suggest_weights needs at least one spectrum");
    }
    std::vector<double> w(spectra.size());
    double total = 0.0;
    for (std::size_t m = 0; m < spectra.size(); ++m) {
        check_order(spectra[m], order);
        w[m] = spectra[m].eigenvalues[order];
        total += w[m];
    }
    if (total == 0.0) {
        throw ValidationError("degenerate spectra: lambda_N is zero for every region");
    }
    for (std::size_t m = 0; m < w.size(); ++m) {
        if (w[m] == 0.0) {
            throw ValidationError("degenerate spectrum: lambda_N is zero for region " + std::to_string(m),
                                  static_cast<long>(m));
        }
        w[m] /= total;
    }
    return w;
}

ContractionEstimate estimate_contraction(const EigenSpectrum& spec, const Region& region,
                                         const SpectralSupport& support, std::size_t order,
                                         const std::optional<RegularizationParams>& params, std::size_t trials,
                                         std::uint64_t seed) {
    check_order(spec, order);
    if (spec.eigenvectors.size() <= order) {
        throw ParameterError("estimate_contraction needs the eigenvectors of the spectrum");
    }
    ContractionEstimate est;
    est.subspace_dim = order + 1;
    est.predicted = params ? lipschitz_regularized(spec, order, *params) : lipschitz_unregularized(spec, order);

    // Differences of two iterates do not depend on h, so a zero measurement
    // isolates the linear part: T e - T 0 = T e.
    const GridShape& shape = region.shape();
    auto regions = validate_weighted_regions({region}, {1.0});
    const MeasuredSignal meas(std::move(regions), Signal::zeros(shape));
    StepOperator step(meas, support, params);

    SplitMix64 rng(seed);
    Vec e(shape.size());
    Vec te(shape.size());
    for (std::size_t t = 0; t < trials; ++t) {
        std::fill(e.begin(), e.end(), 0.0);
        for (std::size_t k = 0; k <= order; ++k) {
            kernels::axpby(1.0, e, rng.normal(), spec.eigenvectors[k].values(), e);
        }
        step.apply(e, te);
        const double ratio = std::sqrt(kernels::sum_squares(te) / kernels::sum_squares(e));
        est.measured = std::max(est.measured, ratio);
    }
    return est;
}

}  // namespace ndextrap
