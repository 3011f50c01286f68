#pragma once

// Data-parallel inner loops shared by every operator.
//
// `ndextrap::kernels` holds the OpenMP versions used by the library.
// `ndextrap::kernels::serial` holds plain loop versions with the same
// signatures; they are kept as the reference the parallel versions are tested
// and benchmarked against.
//
// Reductions in the parallel namespace split the input into fixed-size chunks
// (independent of the thread count), reduce each chunk left to right, then add
// the chunk partials in ascending order. Results are therefore bit-identical
// for any number of threads. Elementwise kernels are bit-identical to the
// serial reference.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>

namespace ndextrap::kernels {

using complex = std::complex<double>;

inline constexpr std::size_t kReductionChunk = 2048;
inline constexpr std::size_t kParallelThreshold = 1 << 15;

struct RealPartStats {
    double max_abs_imag = 0.0;
    double max_abs_real = 0.0;
};

/// out = x * mask
void masked_multiply(std::span<const double> x, std::span<const std::uint8_t> mask, std::span<double> out);

/// out = self_scale * f + data_scale * w * (h - f)
void landweber_update(std::span<const double> f, std::span<const double> h, std::span<const double> w,
                      double self_scale, double data_scale, std::span<double> out);

/// out = a * x + b * y
void axpby(double a, std::span<const double> x, double b, std::span<const double> y, std::span<double> out);

void load_real(std::span<const double> x, std::span<complex> out);

/// spec[k] = mask[k] ? scale * spec[k] : 0
void apply_spectral_mask(std::span<complex> spec, std::span<const std::uint8_t> mask, double scale);

/// out = Re(z); also reports the largest |Im| and |Re| seen.
RealPartStats real_part(std::span<const complex> z, std::span<double> out);

double dot(std::span<const double> a, std::span<const double> b);
double sum_squares(std::span<const double> a);
double distance_squared(std::span<const double> a, std::span<const double> b);

/// Sum of |spec[k]|^2 over bins with mask[k] == want.
double masked_spectral_energy(std::span<const complex> spec, std::span<const std::uint8_t> mask, bool want);

bool all_finite(std::span<const double> a);

namespace serial {

void masked_multiply(std::span<const double> x, std::span<const std::uint8_t> mask, std::span<double> out);
void landweber_update(std::span<const double> f, std::span<const double> h, std::span<const double> w,
                      double self_scale, double data_scale, std::span<double> out);
void axpby(double a, std::span<const double> x, double b, std::span<const double> y, std::span<double> out);
void load_real(std::span<const double> x, std::span<complex> out);
void apply_spectral_mask(std::span<complex> spec, std::span<const std::uint8_t> mask, double scale);
RealPartStats real_part(std::span<const complex> z, std::span<double> out);
double dot(std::span<const double> a, std::span<const double> b);
double sum_squares(std::span<const double> a);
double distance_squared(std::span<const double> a, std::span<const double> b);
double masked_spectral_energy(std::span<const complex> spec, std::span<const std::uint8_t> mask, bool want);
bool all_finite(std::span<const double> a);

}  // namespace serial

}  // namespace ndextrap::kernels
