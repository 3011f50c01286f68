#include "ndextrap/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace ndextrap::kernels {

namespace {

using ssize = std::ptrdiff_t;

template <class ChunkFn>
double chunked_sum(std::size_t n, ChunkFn&& chunk) {
    const std::size_t chunks = (n + kReductionChunk - 1) / kReductionChunk;
    if (chunks <= 1) {
        return n == 0 ? 0.0 : chunk(std::size_t{0}, n);
    }
    std::vector<double> partial(chunks);
    const auto nc = static_cast<ssize>(chunks);
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
    for (ssize c = 0; c < nc; ++c) {
        const auto begin = static_cast<std::size_t>(c) * kReductionChunk;
        partial[c] = chunk(begin, std::min(n, begin + kReductionChunk));
    }
    double total = 0.0;
    for (double p : partial) {
        total += p;
    }
    return total;
}

}  // namespace

void masked_multiply(std::span<const double> x, std::span<const std::uint8_t> mask, std::span<double> out) {
    const auto n = static_cast<ssize>(x.size());
#pragma omp parallel for simd if (x.size() >= kParallelThreshold)
    for (ssize i = 0; i < n; ++i) {
        out[i] = mask[i] ? x[i] : 0.0;
    }
}

void landweber_update(std::span<const double> f, std::span<const double> h, std::span<const double> w,
                      double self_scale, double data_scale, std::span<double> out) {
    const auto n = static_cast<ssize>(f.size());
#pragma omp parallel for simd if (f.size() >= kParallelThreshold)
    for (ssize i = 0; i < n; ++i) {
        out[i] = self_scale * f[i] + data_scale * (w[i] * (h[i] - f[i]));
    }
}

void axpby(double a, std::span<const double> x, double b, std::span<const double> y, std::span<double> out) {
    const auto n = static_cast<ssize>(x.size());
#pragma omp parallel for simd if (x.size() >= kParallelThreshold)
    for (ssize i = 0; i < n; ++i) {
        out[i] = a * x[i] + b * y[i];
    }
}

void load_real(std::span<const double> x, std::span<complex> out) {
    const auto n = static_cast<ssize>(x.size());
#pragma omp parallel for if (x.size() >= kParallelThreshold)
    for (ssize i = 0; i < n; ++i) {
        out[i] = complex(x[i], 0.0);
    }
}

void apply_spectral_mask(std::span<complex> spec, std::span<const std::uint8_t> mask, double scale) {
    const auto n = static_cast<ssize>(spec.size());
#pragma omp parallel for if (spec.size() >= kParallelThreshold)
    for (ssize k = 0; k < n; ++k) {
        spec[k] = mask[k] ? spec[k] * scale : complex(0.0, 0.0);
    }
}

RealPartStats real_part(std::span<const complex> z, std::span<double> out) {
    const auto n = static_cast<ssize>(z.size());
    double max_im = 0.0;
    double max_re = 0.0;
#pragma omp parallel for reduction(max : max_im, max_re) if (z.size() >= kParallelThreshold)
    for (ssize i = 0; i < n; ++i) {
        out[i] = z[i].real();
        max_re = std::max(max_re, std::abs(z[i].real()));
        max_im = std::max(max_im, std::abs(z[i].imag()));
    }
    return {max_im, max_re};
}

double dot(std::span<const double> a, std::span<const double> b) {
    return chunked_sum(a.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            s += a[i] * b[i];
        }
        return s;
    });
}

double sum_squares(std::span<const double> a) {
    return chunked_sum(a.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            s += a[i] * a[i];
        }
        return s;
    });
}

double distance_squared(std::span<const double> a, std::span<const double> b) {
    return chunked_sum(a.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            const double d = a[i] - b[i];
            s += d * d;
        }
        return s;
    });
}

double masked_spectral_energy(std::span<const complex> spec, std::span<const std::uint8_t> mask, bool want) {
    return chunked_sum(spec.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t k = lo; k < hi; ++k) {
            if ((mask[k] != 0) == want) {
                s += std::norm(spec[k]);
            }
        }
        return s;
    });
}

bool all_finite(std::span<const double> a) {
    const auto n = static_cast<ssize>(a.size());
    int bad = 0;
#pragma omp parallel for reduction(| : bad) if (a.size() >= kParallelThreshold)
    for (ssize i = 0; i < n; ++i) {
        bad |= std::isfinite(a[i]) ? 0 : 1;
    }
    return bad == 0;
}

}  // namespace ndextrap::kernels
