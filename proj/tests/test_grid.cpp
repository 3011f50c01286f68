#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ndextrap/error.hpp"
#include "ndextrap/grid.hpp"
#include "ndextrap/random.hpp"

using namespace ndextrap;

namespace {

std::vector<std::size_t> set_bins(const SpectralSupport& s) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < s.shape().size(); ++k) {
        if (s.contains(k)) {
            out.push_back(k);
        }
    }
    return out;
}

}  // namespace

TEST_SUITE("grid") {

TEST_CASE("shape validation and sizes") {
    CHECK_THROWS_AS(GridShape({}), ParameterError);
    CHECK_THROWS_AS(GridShape({4, 0}), ParameterError);
    const GridShape s({3, 4, 5});
    CHECK(s.size() == 60);
    CHECK(s.rank() == 3);
    CHECK(s.flat({0, 0, 1}) == 1);
    CHECK(s.flat({1, 0, 0}) == 20);
    CHECK_THROWS_AS(s.flat({3, 0, 0}), ParameterError);
    CHECK_THROWS_AS(s.flat({0, 0}), ParameterError);
}

TEST_CASE("row-major linearization round-trips") {
    for (const auto& dims : {std::vector<std::size_t>{7}, {4, 6}, {3, 5, 2}, {2, 2, 3, 2}}) {
        const GridShape s(dims);
        for (std::size_t i = 0; i < s.size(); ++i) {
            const Index idx = s.unravel(i);
            CHECK(s.flat(idx) == i);
            for (std::size_t a = 0; a < s.rank(); ++a) {
                CHECK(idx[a] < s.dim(a));
            }
        }
    }
}

TEST_CASE("mirror is an involution negating every axis") {
    const GridShape s({5, 8});
    for (std::size_t k = 0; k < s.size(); ++k) {
        const std::size_t m = s.mirror(k);
        CHECK(s.mirror(m) == k);
        const Index a = s.unravel(k);
        const Index b = s.unravel(m);
        for (std::size_t ax = 0; ax < 2; ++ax) {
            CHECK((a[ax] + b[ax]) % s.dim(ax) == 0);
        }
    }
    CHECK(GridShape::wrapped(0, 8) == 0);
    CHECK(GridShape::wrapped(4, 8) == 4);
    CHECK(GridShape::wrapped(5, 8) == -3);
    CHECK(GridShape::wrapped(7, 8) == -1);
    CHECK(GridShape::wrapped(3, 7) == 3);
    CHECK(GridShape::wrapped(4, 7) == -3);
}

TEST_CASE("signal rejects wrong size and non-finite values") {
    const GridShape s({2, 2});
    CHECK_THROWS_AS(Signal(s, {1, 2, 3}), ParameterError);
    CHECK_THROWS_AS(Signal(s, {1, 2, NAN, 4}), ParameterError);
    CHECK_THROWS_AS(Signal(s, {1, 2, INFINITY, 4}), ParameterError);
    const Signal z = Signal::zeros(s);
    CHECK(std::all_of(z.values().begin(), z.values().end(), [](double v) { return v == 0.0; }));
}

TEST_CASE("spectral support examples") {
    const auto dc = make_spectral_support(GridShape({8}), {0});
    CHECK(dc.bin_count() == 1);
    CHECK(set_bins(dc) == std::vector<std::size_t>{0});

    const auto s1 = make_spectral_support(GridShape({8}), {1});
    CHECK(s1.bin_count() == 3);
    CHECK(set_bins(s1) == std::vector<std::size_t>{0, 1, 7});

    CHECK(make_spectral_support(GridShape({16, 16}), {4, 4}).bin_count() == 81);
    CHECK(make_spectral_support(GridShape({64, 64}), {4, 4}).bin_count() == 81);
}

TEST_CASE("support bin count matches wrapped-index enumeration") {
    const GridShape s({9, 12});
    for (std::size_t b0 = 0; b0 <= 4; ++b0) {
        for (std::size_t b1 = 0; b1 <= 5; ++b1) {
            const auto sup = make_spectral_support(s, {b0, b1});
            std::size_t count = 0;
            for (std::size_t k = 0; k < s.size(); ++k) {
                const Index idx = s.unravel(k);
                const bool in = std::labs(GridShape::wrapped(idx[0], 9)) <= static_cast<long>(b0) &&
                                std::labs(GridShape::wrapped(idx[1], 12)) <= static_cast<long>(b1);
                CHECK(sup.contains(k) == in);
                count += in;
            }
            CHECK(sup.bin_count() == count);
            CHECK(count == (2 * b0 + 1) * (2 * b1 + 1));
        }
    }
}

TEST_CASE("half-bandwidth out of range is a parameter error") {
    CHECK_THROWS_AS(make_spectral_support(GridShape({8}), {4}), ParameterError);
    CHECK_THROWS_AS(make_spectral_support(GridShape({8, 8}), {1}), ParameterError);
    CHECK_NOTHROW(make_spectral_support(GridShape({9}), {4}));
    CHECK_THROWS_AS(make_spectral_support(GridShape({9}), {5}), ParameterError);
}

TEST_CASE("every constructible support is Hermitian; asymmetric masks are rejected") {
    const GridShape s({4, 3});
    // Exhaustive over all 2^12 masks: accepted iff non-empty and symmetric.
    for (unsigned bits = 0; bits < (1u << 12); ++bits) {
        std::vector<std::uint8_t> m(12);
        bool symmetric = true;
        for (std::size_t k = 0; k < 12; ++k) {
            m[k] = (bits >> k) & 1u;
        }
        for (std::size_t k = 0; k < 12; ++k) {
            symmetric = symmetric && m[k] == m[s.mirror(k)];
        }
        if (bits != 0 && symmetric) {
            CHECK_NOTHROW(SpectralSupport(s, m));
        } else {
            CHECK_THROWS_AS(SpectralSupport(s, m), ValidationError);
        }
    }
}

TEST_CASE("region_from_rect examples") {
    const auto full = region_from_rect(GridShape({8}), {0}, {8});
    CHECK(full.sample_count() == 8);
    const auto r = region_from_rect(GridShape({8}), {2}, {3});
    CHECK(r.sample_count() == 3);
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(r.contains(i) == (i >= 2 && i <= 4));
    }
    CHECK(region_from_rect(GridShape({16, 16}), {4, 4}, {4, 4}).sample_count() == 16);
    CHECK_THROWS_AS(region_from_rect(GridShape({8}), {6}, {3}), ParameterError);
    CHECK_THROWS_AS(region_from_rect(GridShape({8}), {0}, {0}), ParameterError);
    CHECK_THROWS_AS(Region(GridShape({4}), {0, 0, 0, 0}), ValidationError);
}

TEST_CASE("weighted region validation") {
    const GridShape s({8});
    auto reg = [&](std::size_t c) { return region_from_rect(s, {c}, {2}); };

    CHECK_NOTHROW(validate_weighted_regions({reg(0), reg(2), reg(4), reg(6)}, {0.25, 0.25, 0.25, 0.25}));
    CHECK_NOTHROW(validate_weighted_regions({region_from_rect(s, {0}, {8})}, {1.0}));
    CHECK_NOTHROW(validate_weighted_regions({reg(0), reg(2), reg(4)}, {1.0 / 3, 1.0 / 3, 1.0 / 3}));

    try {
        validate_weighted_regions({reg(0), reg(2)}, {0.6, 0.5});
        FAIL("sum 1.1 accepted");
    } catch (const ValidationError& e) {
        CHECK(e.index() == 1);
    }
    try {
        validate_weighted_regions({reg(0), reg(2), reg(4)}, {0.5, 0.0, 0.5});
        FAIL("zero weight accepted");
    } catch (const ValidationError& e) {
        CHECK(e.index() == 1);
    }
    try {
        validate_weighted_regions({reg(0), reg(2)}, {1.5, -0.5});
        FAIL("negative weight accepted");
    } catch (const ValidationError& e) {
        CHECK(e.index() == 0);
    }
    try {
        validate_weighted_regions({reg(0), region_from_rect(GridShape({9}), {0}, {2})}, {0.5, 0.5});
        FAIL("shape mismatch accepted");
    } catch (const ValidationError& e) {
        CHECK(e.index() == 1);
    }
    CHECK_THROWS_AS(validate_weighted_regions({reg(0)}, {0.5, 0.5}), ValidationError);
    CHECK_THROWS_AS(validate_weighted_regions({}, {}), ValidationError);
}

TEST_CASE("weight-sum tolerance is 1e-12") {
    const GridShape s({8});
    auto two = [&](double a, double b) {
        return validate_weighted_regions({region_from_rect(s, {0}, {2}), region_from_rect(s, {4}, {2})}, {a, b});
    };
    CHECK_NOTHROW(two(0.5, 0.5 + 0.9e-12));
    CHECK_THROWS_AS(two(0.5, 0.5 + 1.1e-12), ValidationError);
    CHECK_THROWS_AS(two(0.5, 0.5 - 1.1e-12), ValidationError);

    // Random convex weights normalized in floating point are always accepted.
    SplitMix64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = 1 + rng.next() % 7;
        std::vector<Region> regions;
        std::vector<double> w(m);
        double sum = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            regions.push_back(region_from_rect(s, {i % 8}, {1}));
            w[i] = rng.uniform(0.05, 1.0);
            sum += w[i];
        }
        for (double& x : w) {
            x /= sum;
        }
        CHECK_NOTHROW(validate_weighted_regions(std::move(regions), w));
    }
}

TEST_CASE("overlapping regions accumulate per-sample weights") {
    const GridShape s({8});
    const auto set = validate_weighted_regions({region_from_rect(s, {0}, {4}), region_from_rect(s, {2}, {4})}, {0.25, 0.75});
    const std::vector<double> expect_w = {0.25, 0.25, 1.0, 1.0, 0.75, 0.75, 0, 0};
    const std::vector<double> expect_c = {1, 1, 2, 2, 1, 1, 0, 0};
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(set.sample_weights()[i] == expect_w[i]);
        CHECK(set.coverage()[i] == expect_c[i]);
        CHECK(set.union_mask()[i] == (i < 6 ? 1 : 0));
    }
    CHECK(set.weight_sum() == 1.0);
}

TEST_CASE("measured signal must vanish outside the union") {
    const GridShape s({6});
    auto set = [&] { return validate_weighted_regions({region_from_rect(s, {1}, {2})}, {1.0}); };
    CHECK_NOTHROW(MeasuredSignal(set(), Signal(s, {0, 1, 2, 0, 0, 0})));
    try {
        MeasuredSignal(set(), Signal(s, {0, 1, 2, 0, 1e-300, 0}));
        FAIL("nonzero outside accepted");
    } catch (const ValidationError& e) {
        CHECK(e.index() == 4);
    }
    const auto m = MeasuredSignal::measure(Signal(s, {5, 1, 2, 3, 4, 5}), set());
    CHECK(std::vector<double>(m.samples().values().begin(), m.samples().values().end()) ==
          std::vector<double>{0, 1, 2, 0, 0, 0});
}

}  // TEST_SUITE
