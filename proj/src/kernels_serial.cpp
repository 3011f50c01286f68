#include <algorithm>
#include <cmath>

#include "ndextrap/kernels.hpp"

namespace ndextrap::kernels::serial {

void masked_multiply(std::span<const double> x, std::span<const std::uint8_t> mask, std::span<double> out) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = mask[i] ? x[i] : 0.0;
    }
}

void landweber_update(std::span<const double> f, std::span<const double> h, std::span<const double> w,
                      double self_scale, double data_scale, std::span<double> out) {
    for (std::size_t i = 0; i < f.size(); ++i) {
        out[i] = self_scale * f[i] + data_scale * (w[i] * (h[i] - f[i]));
    }
}

void axpby(double a, std::span<const double> x, double b, std::span<const double> y, std::span<double> out) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = a * x[i] + b * y[i];
    }
}

void load_real(std::span<const double> x, std::span<complex> out) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = complex(x[i], 0.0);
    }
}

void apply_spectral_mask(std::span<complex> spec, std::span<const std::uint8_t> mask, double scale) {
    for (std::size_t k = 0; k < spec.size(); ++k) {
        spec[k] = mask[k] ? spec[k] * scale : complex(0.0, 0.0);
    }
}

RealPartStats real_part(std::span<const complex> z, std::span<double> out) {
    RealPartStats stats;
    for (std::size_t i = 0; i < z.size(); ++i) {
        out[i] = z[i].real();
        stats.max_abs_real = std::max(stats.max_abs_real, std::abs(z[i].real()));
        stats.max_abs_imag = std::max(stats.max_abs_imag, std::abs(z[i].imag()));
    }
    return stats;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

double sum_squares(std::span<const double> a) {
    return dot(a, a);
}

double distance_squared(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double masked_spectral_energy(std::span<const complex> spec, std::span<const std::uint8_t> mask, bool want) {
    double s = 0.0;
    for (std::size_t k = 0; k < spec.size(); ++k) {
        if ((mask[k] != 0) == want) {
            s += std::norm(spec[k]);
        }
    }
    return s;
}

bool all_finite(std::span<const double> a) {
    return std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace ndextrap::kernels::serial
