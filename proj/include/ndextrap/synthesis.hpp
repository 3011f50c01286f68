#pragma once

// Seeded test-signal generation and the error metrics used to score runs.

#include <cstdint>

#include "ndextrap/grid.hpp"

namespace ndextrap {

struct SynthesisSpec {
    SpectralSupport support;
    std::uint64_t seed = 0;
    double rms = 1.0;

    const GridShape& shape() const noexcept { return support.shape(); }
};

enum class NoiseMode {
    gaussian_bumps,  ///< periodic spatial Gaussians, out-of-band part rescaled
    spectral,        ///< i.i.d. normal out-of-band DFT coefficients
};

struct NoiseParams {
    NoiseMode mode = NoiseMode::gaussian_bumps;
    std::size_t bump_count = 16;
    /// Standard deviation range of each bump, in samples.
    double width_min = 0.75;
    double width_max = 2.0;
    /// Norm of the raw bump field relative to ||h|| before the out-of-band
    /// rescale. The in-band part keeps this scale.
    double amplitude = 1e-3;
};

/// Exactly bandlimited signal with i.i.d. standard-normal in-band DFT
/// coefficients (Hermitian-paired), rescaled to the requested RMS.
Signal random_bandlimited(const SynthesisSpec& spec);

/// Adds seeded noise to bandlimited `h` and scales its out-of-band component
/// so that snr_in_out of the result equals `target_snr_db`.
Signal add_out_of_band_noise(const Signal& h, const SpectralSupport& support, double target_snr_db,
                             std::uint64_t seed, const NoiseParams& params = {});

struct EnergySplit {
    double in_band = 0.0;
    double out_of_band = 0.0;
    double total = 0.0;
};

/// In-band, out-of-band (DFT domain, Parseval-scaled) and spatial total energy.
EnergySplit energy_split(const Signal& f, const SpectralSupport& support);

/// Out-of-band energy at or below this fraction of the total is DFT roundoff;
/// such signals count as exactly bandlimited.
inline constexpr double kOutOfBandFloor = 1e-26;

/// 10 log10(in-band energy / out-of-band energy). Throws UndefinedMetricError
/// for exactly bandlimited input.
double snr_in_out(const Signal& f, const SpectralSupport& support);

/// 10 log10(||h - f||^2 / ||h||^2); -infinity when f == h exactly.
double nmse(const Signal& truth, const Signal& estimate);

}  // namespace ndextrap
