#include "ndextrap/operators.hpp"

#include <cmath>
#include <sstream>

#include "ndextrap/kernels.hpp"

namespace ndextrap {

RegularizationParams RegularizationParams::make(double mu, double tau) {
    if (!(mu > 0.0) || !std::isfinite(mu)) {
        throw ParameterError("regularization weight mu must be positive");
    }
    const double limit = tau_limit(mu);
    if (!(tau > 0.0 && tau < limit)) {
        std::ostringstream os;
        os.precision(17);
        os << "step size tau = " << tau << " must lie in (0, 2/(1+2mu)) = (0, " << limit << ")";
        throw ParameterError(os.str());
    }
    return {mu, tau};
}

Projector::Projector(const SpectralSupport& support)
    : support_(support), buffer_(support.shape()), scratch_(support.shape().size()) {}

void Projector::project(std::span<const double> in, std::span<double> out) {
    const std::size_t n = support_.shape().size();
    if (in.size() != n || out.size() != n) {
        throw ParameterError("projector input size does not match support grid");
    }
    auto spec = buffer_.data();
    kernels::load_real(in, spec);
    double in_max = 0.0;
    for (double v : in) {
        in_max = std::max(in_max, std::abs(v));
    }
    buffer_.forward();
    kernels::apply_spectral_mask(spec, support_.mask(), 1.0 / static_cast<double>(n));
    buffer_.inverse();
    const auto stats = kernels::real_part(spec, out);
    if (stats.max_abs_imag > kImagResidualTolerance * in_max) {
        std::ostringstream os;
        os << "projection left an imaginary residual of " << stats.max_abs_imag << " (input scale " << in_max
           << "); the support mask is not Hermitian";
        throw InternalConsistencyError(os.str());
    }
}

Projector::Energies Projector::energies(std::span<const double> in) {
    const std::size_t n = support_.shape().size();
    if (in.size() != n) {
        throw ParameterError("energy input size does not match support grid");
    }
    auto spec = buffer_.data();
    kernels::load_real(in, spec);
    buffer_.forward();
    const double scale = 1.0 / static_cast<double>(n);
    return {scale * kernels::masked_spectral_energy(spec, support_.mask(), true),
            scale * kernels::masked_spectral_energy(spec, support_.mask(), false)};
}

double Projector::bandlimit_defect(std::span<const double> f) {
    const double norm2 = kernels::sum_squares(f);
    if (norm2 == 0.0) {
        return 0.0;
    }
    project(f, scratch_);
    return std::sqrt(kernels::distance_squared(scratch_, f) / norm2);
}

StepOperator::StepOperator(const MeasuredSignal& meas, const SpectralSupport& support,
                           std::optional<RegularizationParams> params)
    : projector_(support),
      data_(meas.samples().values().begin(), meas.samples().values().end()),
      weights_(meas.regions().sample_weights().begin(), meas.regions().sample_weights().end()),
      work_(meas.shape().size()) {
    require_same_shape(meas.shape(), support.shape(), "step operator");
    const double s = meas.regions().weight_sum();
    if (params) {
        self_scale_ = s * (1.0 - params->mu * params->tau);
        data_scale_ = params->tau;
    } else {
        self_scale_ = s;
        data_scale_ = 1.0;
    }
}

void StepOperator::apply(std::span<const double> f, std::span<double> out) {
    kernels::landweber_update(f, data_, weights_, self_scale_, data_scale_, work_);
    projector_.project(work_, out);
}

namespace {

void require_bandlimited(Projector& proj, const Signal& f) {
    const double defect = proj.bandlimit_defect(f.values());
    if (defect > kBandlimitTolerance) {
        std::ostringstream os;
        os << "step input is not bandlimited: relative defect " << defect << " exceeds " << kBandlimitTolerance;
        throw ContractViolation(os.str());
    }
}

Signal run_step(const Signal& f, const MeasuredSignal& meas, const SpectralSupport& support,
                std::optional<RegularizationParams> params) {
    require_same_shape(f.shape(), meas.shape(), "step input");
    require_same_shape(f.shape(), support.shape(), "step input");
    StepOperator op(meas, support, params);
    require_bandlimited(op.projector(), f);
    std::vector<double> out(f.size());
    op.apply(f.values(), out);
    return Signal(f.shape(), std::move(out));
}

}  // namespace

Signal bandlimit_project(const Signal& f, const SpectralSupport& support) {
    require_same_shape(f.shape(), support.shape(), "bandlimit_project");
    Projector proj(support);
    std::vector<double> out(f.size());
    proj.project(f.values(), out);
    return Signal(f.shape(), std::move(out));
}

Signal region_truncate(const Signal& f, const Region& region) {
    require_same_shape(f.shape(), region.shape(), "region_truncate");
    std::vector<double> out(f.size());
    kernels::masked_multiply(f.values(), region.mask(), out);
    return Signal(f.shape(), std::move(out));
}

Signal initial_estimate(const MeasuredSignal& meas, const SpectralSupport& support) {
    require_same_shape(meas.shape(), support.shape(), "initial_estimate");
    Projector proj(support);
    const std::size_t n = meas.shape().size();
    std::vector<double> acc(n, 0.0);
    std::vector<double> masked(n);
    for (const Region& region : meas.regions().regions()) {
        kernels::masked_multiply(meas.samples().values(), region.mask(), masked);
        proj.project(masked, masked);
        kernels::axpby(1.0, acc, 1.0, masked, acc);
    }
    return Signal(meas.shape(), std::move(acc));
}

Signal papoulis_step(const Signal& f, const MeasuredSignal& meas, const SpectralSupport& support) {
    return run_step(f, meas, support, std::nullopt);
}

Signal regularized_step(const Signal& f, const MeasuredSignal& meas, const SpectralSupport& support,
                        const RegularizationParams& params) {
    const auto checked = RegularizationParams::make(params.mu, params.tau);
    return run_step(f, meas, support, checked);
}

Signal landweber_step(const Signal& f, const MeasuredSignal& meas, const SpectralSupport& support) {
    require_same_shape(f.shape(), meas.shape(), "landweber_step");
    require_same_shape(f.shape(), support.shape(), "landweber_step");
    Projector proj(support);
    require_bandlimited(proj, f);
    const std::size_t n = f.size();
    std::vector<double> unit(n);
    const auto uni = meas.regions().union_mask();
    for (std::size_t i = 0; i < n; ++i) {
        unit[i] = uni[i] ? 1.0 : 0.0;
    }
    std::vector<double> out(n);
    kernels::landweber_update(f.values(), meas.samples().values(), unit, 1.0, 1.0, out);
    proj.project(out, out);
    return Signal(f.shape(), std::move(out));
}

Signal composite_apply(const Signal& f, const Region& region, const SpectralSupport& support) {
    require_same_shape(f.shape(), region.shape(), "composite_apply");
    require_same_shape(f.shape(), support.shape(), "composite_apply");
    Projector proj(support);
    std::vector<double> v(f.size());
    proj.project(f.values(), v);
    kernels::masked_multiply(v, region.mask(), v);
    proj.project(v, v);
    return Signal(f.shape(), std::move(v));
}

}  // namespace ndextrap
