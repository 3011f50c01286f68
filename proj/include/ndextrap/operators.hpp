#pragma once

// Bandlimiting projection, region truncation and the weighted extrapolation
// steps built from them.
//
// For a measurement set with regions D_m, weights w_m and samples h:
//
//   papoulis_step(f)    = sum_m w_m P( f + X_m (h - f) )
//   regularized_step(f) = sum_m w_m P( (1 - mu tau) f + tau X_m (h - f) )
//
// where P zeroes DFT bins outside the support and X_m masks to D_m. Both are
// evaluated as a single projection of  s f + c W (h - f)  with W the per-sample
// weight sum over covering regions and s the weight sum, both accumulated in
// ascending region order. P is linear, so this is the same operator with one
// DFT pair per step instead of one per region.

#include <optional>
#include <span>
#include <vector>

#include "ndextrap/fft.hpp"
#include "ndextrap/grid.hpp"

namespace ndextrap {

inline constexpr double kImagResidualTolerance = 1e-10;
inline constexpr double kBandlimitTolerance = 1e-8;

/// Tikhonov weight mu and step size tau. Valid iff mu > 0 and 0 < tau < 2 / (1 + 2 mu).
struct RegularizationParams {
    double mu = 0.0;
    double tau = 0.0;

    static RegularizationParams make(double mu, double tau);
    static double tau_limit(double mu) { return 2.0 / (1.0 + 2.0 * mu); }
};

/// Reusable bandlimiting projector for one support. Not safe for concurrent use.
class Projector {
public:
    explicit Projector(const SpectralSupport& support);

    const SpectralSupport& support() const noexcept { return support_; }

    /// out = P in. `in` and `out` may alias.
    void project(std::span<const double> in, std::span<double> out);

    struct Energies {
        double in_band = 0.0;
        double out_of_band = 0.0;
    };
    /// Spatial-domain energies of the in-band and out-of-band parts (Parseval).
    Energies energies(std::span<const double> in);

    /// ||P f - f|| / ||f||, or 0 for f = 0.
    double bandlimit_defect(std::span<const double> f);

private:
    SpectralSupport support_;
    DftBuffer buffer_;
    std::vector<double> scratch_;
};

/// Applies one extrapolation step to raw arrays without rechecking inputs.
/// The engine and spectral analysis build on this.
class StepOperator {
public:
    StepOperator(const MeasuredSignal& meas, const SpectralSupport& support,
                 std::optional<RegularizationParams> params = std::nullopt);

    void apply(std::span<const double> f, std::span<double> out);

    const SpectralSupport& support() const noexcept { return projector_.support(); }
    Projector& projector() noexcept { return projector_; }

private:
    Projector projector_;
    std::vector<double> data_;
    std::vector<double> weights_;
    double self_scale_ = 1.0;
    double data_scale_ = 1.0;
    std::vector<double> work_;
};

Signal bandlimit_project(const Signal& f, const SpectralSupport& support);

Signal region_truncate(const Signal& f, const Region& region);

/// f0 = sum_m P(X_m h), accumulated in ascending region order.
Signal initial_estimate(const MeasuredSignal& meas, const SpectralSupport& support);

/// Throws ContractViolation unless ||P f - f|| <= 1e-8 ||f||.
Signal papoulis_step(const Signal& f, const MeasuredSignal& meas, const SpectralSupport& support);

Signal regularized_step(const Signal& f, const MeasuredSignal& meas, const SpectralSupport& support,
                        const RegularizationParams& params);

/// Unit-weight projected Landweber step P(f + X_union (h - f)).
Signal landweber_step(const Signal& f, const MeasuredSignal& meas, const SpectralSupport& support);

/// Q f = P X_D P f.
Signal composite_apply(const Signal& f, const Region& region, const SpectralSupport& support);

}  // namespace ndextrap
