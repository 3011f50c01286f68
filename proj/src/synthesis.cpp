#include "ndextrap/synthesis.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "ndextrap/fft.hpp"
#include "ndextrap/kernels.hpp"
#include "ndextrap/operators.hpp"
#include "ndextrap/random.hpp"

namespace ndextrap {

namespace {

/// Real field whose DFT has i.i.d. standard-normal coefficients on the bins
/// where mask == want, paired so that F[-k] = conj(F[k]). Bins are visited in
/// ascending flat order; self-conjugate bins draw one real value, other bins
/// draw real then imaginary part at their lower-indexed partner.
std::vector<double> hermitian_random_field(const SpectralSupport& support, bool want, SplitMix64& rng) {
    const GridShape& shape = support.shape();
    const std::size_t n = shape.size();
    DftBuffer buf(shape);
    auto spec = buf.data();
    for (std::size_t k = 0; k < n; ++k) {
        spec[k] = 0.0;
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (support.contains(k) != want) {
            continue;
        }
        const std::size_t mk = shape.mirror(k);
        if (mk < k) {
            continue;
        }
        if (mk == k) {
            spec[k] = rng.normal();
        } else {
            const double re = rng.normal();
            const double im = rng.normal();
            spec[k] = {re, im};
            spec[mk] = {re, -im};
        }
    }
    buf.inverse();
    std::vector<double> out(n);
    const auto stats = kernels::real_part(spec, out);
    if (stats.max_abs_imag > kImagResidualTolerance * std::max(stats.max_abs_real, 1.0)) {
        throw InternalConsistencyError("random field is not real; support pairing is broken");
    }
    const double scale = 1.0 / static_cast<double>(n);
    kernels::axpby(scale, out, 0.0, out, out);
    return out;
}

double periodic_offset(double x, double c, double n) {
    double d = std::abs(x - c);
    return std::min(d, n - d);
}

std::vector<double> gaussian_bumps(const GridShape& shape, const NoiseParams& params, SplitMix64& rng) {
    struct Bump {
        std::vector<double> center;
        double width;
        double amplitude;
    };
    std::vector<Bump> bumps(params.bump_count);
    for (Bump& b : bumps) {
        b.center.resize(shape.rank());
        for (std::size_t a = 0; a < shape.rank(); ++a) {
            b.center[a] = rng.uniform(0.0, static_cast<double>(shape.dim(a)));
        }
        b.width = rng.uniform(params.width_min, params.width_max);
        b.amplitude = rng.normal();
    }
    const auto n = static_cast<std::ptrdiff_t>(shape.size());
    std::vector<double> field(shape.size(), 0.0);
#pragma omp parallel for if (shape.size() >= kernels::kParallelThreshold)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const Index idx = shape.unravel(static_cast<std::size_t>(i));
        double v = 0.0;
        for (const Bump& b : bumps) {
            double r2 = 0.0;
            for (std::size_t a = 0; a < shape.rank(); ++a) {
                const double d =
                    periodic_offset(static_cast<double>(idx[a]), b.center[a], static_cast<double>(shape.dim(a)));
                r2 += d * d;
            }
            v += b.amplitude * std::exp(-r2 / (2.0 * b.width * b.width));
        }
        field[i] = v;
    }
    return field;
}

}  // namespace

Signal random_bandlimited(const SynthesisSpec& spec) {
    if (!(spec.rms > 0.0) || !std::isfinite(spec.rms)) {
        throw ParameterError("synthesis rms must be positive");
    }
    SplitMix64 rng(spec.seed);
    std::vector<double> h = hermitian_random_field(spec.support, true, rng);
    const double rms = std::sqrt(kernels::sum_squares(h) / static_cast<double>(h.size()));
    if (rms == 0.0) {
        throw SynthesisError("random bandlimited draw is identically zero");
    }
    kernels::axpby(spec.rms / rms, h, 0.0, h, h);
    return Signal(spec.shape(), std::move(h));
}

Signal add_out_of_band_noise(const Signal& h, const SpectralSupport& support, double target_snr_db,
                             std::uint64_t seed, const NoiseParams& params) {
    require_same_shape(h.shape(), support.shape(), "add_out_of_band_noise");
    if (!std::isfinite(target_snr_db)) {
        throw ParameterError("target SNR must be finite");
    }
    if (params.mode == NoiseMode::gaussian_bumps &&
        (params.bump_count == 0 || !(params.width_min > 0.0) || params.width_max < params.width_min ||
         !(params.amplitude > 0.0))) {
        throw ParameterError("bump parameters need count >= 1, 0 < width_min <= width_max and amplitude > 0");
    }
    Projector proj(support);
    const double defect = proj.bandlimit_defect(h.values());
    if (defect > kBandlimitTolerance) {
        throw ContractViolation("noise can only be added to a bandlimited signal");
    }
    const double h_norm = std::sqrt(kernels::sum_squares(h.values()));
    if (h_norm == 0.0) {
        throw SynthesisError("cannot set an SNR relative to a zero signal");
    }

    SplitMix64 rng(seed);
    const std::size_t n = h.size();
    std::vector<double> in_part(n, 0.0);
    std::vector<double> out_part;
    if (params.mode == NoiseMode::gaussian_bumps) {
        std::vector<double> raw = gaussian_bumps(h.shape(), params, rng);
        const double raw_norm = std::sqrt(kernels::sum_squares(raw));
        if (raw_norm == 0.0) {
            throw SynthesisError("Gaussian bumps sum to zero");
        }
        kernels::axpby(params.amplitude * h_norm / raw_norm, raw, 0.0, raw, raw);
        proj.project(raw, in_part);
        out_part.resize(n);
        kernels::axpby(1.0, raw, -1.0, in_part, out_part);
    } else {
        out_part = hermitian_random_field(support, false, rng);
    }
    const double out_energy = kernels::sum_squares(out_part);
    const double ref_energy = std::max(kernels::sum_squares(in_part), h_norm * h_norm);
    if (!(out_energy > kOutOfBandFloor * ref_energy)) {
        throw SynthesisError("noise has no out-of-band energy (widths too large or support covers every bin)");
    }

    std::vector<double> result(n);
    kernels::axpby(1.0, h.values(), 1.0, in_part, result);
    const double in_energy = kernels::sum_squares(result);
    const double alpha = std::sqrt(in_energy / (out_energy * std::pow(10.0, target_snr_db / 10.0)));
    kernels::axpby(1.0, result, alpha, out_part, result);
    return Signal(h.shape(), std::move(result));
}

EnergySplit energy_split(const Signal& f, const SpectralSupport& support) {
    require_same_shape(f.shape(), support.shape(), "energy_split");
    Projector proj(support);
    const auto e = proj.energies(f.values());
    return {e.in_band, e.out_of_band, kernels::sum_squares(f.values())};
}

double snr_in_out(const Signal& f, const SpectralSupport& support) {
    const EnergySplit e = energy_split(f, support);
    if (!(e.out_of_band > kOutOfBandFloor * (e.in_band + e.out_of_band))) {
        throw UndefinedMetricError("signal is exactly bandlimited: out-of-band energy is zero");
    }
    return 10.0 * std::log10(e.in_band / e.out_of_band);
}

double nmse(const Signal& truth, const Signal& estimate) {
    require_same_shape(truth.shape(), estimate.shape(), "nmse");
    const double ref = kernels::sum_squares(truth.values());
    if (ref == 0.0) {
        throw UndefinedMetricError("NMSE is undefined for a zero reference signal");
    }
    const double err = kernels::distance_squared(truth.values(), estimate.values());
    if (err == 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    return 10.0 * std::log10(err / ref);
}

}  // namespace ndextrap
