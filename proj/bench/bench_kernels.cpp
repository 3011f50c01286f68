// Serial reference vs OpenMP kernels, plus one full step on a 2-D grid.
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <vector>

#include "ndextrap/grid.hpp"
#include "ndextrap/kernels.hpp"
#include "ndextrap/operators.hpp"
#include "ndextrap/random.hpp"

namespace k = ndextrap::kernels;

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
    ndextrap::SplitMix64 rng(seed);
    std::vector<double> v(n);
    for (double& x : v) {
        x = rng.normal();
    }
    return v;
}

template <bool Parallel>
void BM_Landweber(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto f = noise(n, 1), h = noise(n, 2), w = noise(n, 3);
    std::vector<double> out(n);
    for (auto _ : state) {
        if constexpr (Parallel) {
            k::landweber_update(f, h, w, 0.99, 1.0, out);
        } else {
            k::serial::landweber_update(f, h, w, 0.99, 1.0, out);
        }
        benchmark::DoNotOptimize(out.data());
    }
    state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * n * 4 * sizeof(double)));
}

template <bool Parallel>
void BM_Dot(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = noise(n, 4), b = noise(n, 5);
    for (auto _ : state) {
        double d = Parallel ? k::dot(a, b) : k::serial::dot(a, b);
        benchmark::DoNotOptimize(d);
    }
    state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * n * 2 * sizeof(double)));
}

template <bool Parallel>
void BM_SpectralMask(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto re = noise(n, 6);
    std::vector<k::complex> spec(n);
    std::vector<std::uint8_t> mask(n);
    for (std::size_t i = 0; i < n; ++i) {
        mask[i] = i % 5 == 0;
    }
    for (auto _ : state) {
        state.PauseTiming();
        for (std::size_t i = 0; i < n; ++i) {
            spec[i] = {re[i], -re[i]};
        }
        state.ResumeTiming();
        if constexpr (Parallel) {
            k::apply_spectral_mask(spec, mask, 0.5);
        } else {
            k::serial::apply_spectral_mask(spec, mask, 0.5);
        }
        benchmark::DoNotOptimize(spec.data());
    }
}

void BM_Step(benchmark::State& state) {
    const auto side = static_cast<std::size_t>(state.range(0));
    const ndextrap::GridShape g({side, side});
    const auto sup = ndextrap::make_spectral_support(g, {side / 16, side / 16});
    const std::size_t q = side / 4;
    std::vector<ndextrap::Region> regions;
    regions.push_back(ndextrap::region_from_rect(g, {0, 0}, {q, q}));
    regions.push_back(ndextrap::region_from_rect(g, {2 * q, 2 * q}, {q, q}));
    auto set = ndextrap::validate_weighted_regions(std::move(regions), ndextrap::uniform_weights(2));
    const auto meas = ndextrap::MeasuredSignal::measure(ndextrap::Signal(g, noise(g.size(), 7)), std::move(set));
    ndextrap::StepOperator step(meas, sup);
    std::vector<double> f(g.size(), 0.0), out(g.size());
    for (auto _ : state) {
        step.apply(f, out);
        f.swap(out);
        benchmark::DoNotOptimize(f.data());
    }
}

}  // namespace

BENCHMARK(BM_Landweber<false>)->Name("landweber/serial")->RangeMultiplier(8)->Range(1 << 12, 1 << 21);
BENCHMARK(BM_Landweber<true>)->Name("landweber/omp")->RangeMultiplier(8)->Range(1 << 12, 1 << 21);
BENCHMARK(BM_Dot<false>)->Name("dot/serial")->RangeMultiplier(8)->Range(1 << 12, 1 << 21);
BENCHMARK(BM_Dot<true>)->Name("dot/omp")->RangeMultiplier(8)->Range(1 << 12, 1 << 21);
BENCHMARK(BM_SpectralMask<false>)->Name("spectral_mask/serial")->Arg(1 << 18);
BENCHMARK(BM_SpectralMask<true>)->Name("spectral_mask/omp")->Arg(1 << 18);
BENCHMARK(BM_Step)->Name("step")->Arg(64)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
