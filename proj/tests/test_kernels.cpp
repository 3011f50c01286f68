#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <vector>

#include "ndextrap/kernels.hpp"
#include "ndextrap/random.hpp"

using namespace ndextrap;
namespace k = ndextrap::kernels;

namespace {

std::vector<double> normals(std::size_t n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<double> v(n);
    for (double& x : v) {
        x = rng.normal();
    }
    return v;
}

std::vector<std::uint8_t> bits(std::size_t n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<std::uint8_t> v(n);
    for (auto& x : v) {
        x = rng.uniform() < 0.4 ? 1 : 0;
    }
    return v;
}

std::vector<k::complex> complexes(std::size_t n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<k::complex> v(n);
    for (auto& z : v) {
        z = {rng.normal(), rng.normal()};
    }
    return v;
}

struct ThreadCount {
    explicit ThreadCount(int n) : saved(omp_get_max_threads()) { omp_set_num_threads(n); }
    ~ThreadCount() { omp_set_num_threads(saved); }
    int saved;
};

const std::size_t kSizes[] = {1, 17, 2048, 2049, 40000, (1u << 15) + 3, 200003};

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("elementwise kernels match the serial reference bit for bit") {
    for (std::size_t n : kSizes) {
        const auto x = normals(n, 1), y = normals(n, 2), w = normals(n, 3);
        const auto m = bits(n, 4);
        for (int threads : {1, 2, 3, 8}) {
            ThreadCount tc(threads);
            std::vector<double> a(n), b(n);

            k::masked_multiply(x, m, a);
            k::serial::masked_multiply(x, m, b);
            CHECK(a == b);

            k::landweber_update(x, y, w, 0.98, 1.97, a);
            k::serial::landweber_update(x, y, w, 0.98, 1.97, b);
            CHECK(a == b);

            k::axpby(0.3, x, -1.7, y, a);
            k::serial::axpby(0.3, x, -1.7, y, b);
            CHECK(a == b);

            std::vector<k::complex> za(n), zb(n);
            k::load_real(x, za);
            k::serial::load_real(x, zb);
            CHECK(za == zb);

            auto sa = complexes(n, 5), sb = sa;
            k::apply_spectral_mask(sa, m, 0.125);
            k::serial::apply_spectral_mask(sb, m, 0.125);
            CHECK(sa == sb);

            const auto ra = k::real_part(sa, a);
            const auto rb = k::serial::real_part(sb, b);
            CHECK(a == b);
            CHECK(ra.max_abs_imag == rb.max_abs_imag);
            CHECK(ra.max_abs_real == rb.max_abs_real);
        }
    }
}

TEST_CASE("reductions are thread-count invariant and agree with serial to roundoff") {
    for (std::size_t n : kSizes) {
        const auto x = normals(n, 10), y = normals(n, 11);
        const auto z = complexes(n, 12);
        const auto m = bits(n, 13);
        double dot1 = 0, ss1 = 0, dist1 = 0, in1 = 0, out1 = 0;
        {
            ThreadCount tc(1);
            dot1 = k::dot(x, y);
            ss1 = k::sum_squares(x);
            dist1 = k::distance_squared(x, y);
            in1 = k::masked_spectral_energy(z, m, true);
            out1 = k::masked_spectral_energy(z, m, false);
        }
        for (int threads : {2, 3, 8}) {
            ThreadCount tc(threads);
            CHECK(k::dot(x, y) == dot1);
            CHECK(k::sum_squares(x) == ss1);
            CHECK(k::distance_squared(x, y) == dist1);
            CHECK(k::masked_spectral_energy(z, m, true) == in1);
            CHECK(k::masked_spectral_energy(z, m, false) == out1);
        }
        const double scale = static_cast<double>(n);
        CHECK(std::abs(dot1 - k::serial::dot(x, y)) <= 1e-12 * scale);
        CHECK(std::abs(ss1 - k::serial::sum_squares(x)) <= 1e-13 * ss1);
        CHECK(std::abs(dist1 - k::serial::distance_squared(x, y)) <= 1e-13 * dist1);
        CHECK(std::abs(in1 - k::serial::masked_spectral_energy(z, m, true)) <= 1e-13 * (in1 + 1));
        CHECK(std::abs(out1 - k::serial::masked_spectral_energy(z, m, false)) <= 1e-13 * (out1 + 1));
        CHECK(std::abs(in1 + out1 - (k::serial::masked_spectral_energy(z, m, true) +
                                     k::serial::masked_spectral_energy(z, m, false))) <= 1e-12 * (in1 + out1 + 1));
    }
}

TEST_CASE("small inputs reduce exactly like the serial loop") {
    // Below one chunk the parallel reduction is a single left-to-right pass.
    const auto x = normals(1000, 20), y = normals(1000, 21);
    CHECK(k::dot(x, y) == k::serial::dot(x, y));
    CHECK(k::sum_squares(x) == k::serial::sum_squares(x));
}

TEST_CASE("all_finite detects NaN and infinity anywhere") {
    for (std::size_t n : {std::size_t{5}, std::size_t{100000}}) {
        auto x = normals(n, 30);
        CHECK(k::all_finite(x));
        CHECK(k::serial::all_finite(x));
        x[n - 1] = NAN;
        CHECK_FALSE(k::all_finite(x));
        CHECK_FALSE(k::serial::all_finite(x));
        x[n - 1] = 0.0;
        x[n / 2] = -INFINITY;
        CHECK_FALSE(k::all_finite(x));
        CHECK_FALSE(k::serial::all_finite(x));
    }
}

}  // TEST_SUITE
