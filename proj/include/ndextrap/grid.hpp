#pragma once

// Data model for signals on an N-dimensional periodic grid.
//
// All arrays are stored row-major (last axis fastest). Frequency bins use the
// unshifted DFT layout: bin 0 on every axis is DC and bin j > dims/2 stands for
// the negative frequency j - dims.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ndextrap/error.hpp"

namespace ndextrap {

using Index = std::vector<std::size_t>;

class GridShape {
public:
    explicit GridShape(std::vector<std::size_t> dims);

    const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    std::size_t rank() const noexcept { return dims_.size(); }
    std::size_t size() const noexcept { return size_; }
    std::size_t dim(std::size_t axis) const { return dims_.at(axis); }

    std::size_t flat(const Index& idx) const;
    Index unravel(std::size_t flat) const;

    /// Flat index of the bin holding frequency -k (mod dims) for the bin at `flat`.
    std::size_t mirror(std::size_t flat) const;

    /// Signed frequency of `bin` along `axis`, in (-dims/2, dims/2].
    static long wrapped(std::size_t bin, std::size_t n) noexcept;

    bool operator==(const GridShape& other) const noexcept { return dims_ == other.dims_; }

private:
    std::vector<std::size_t> dims_;
    std::vector<std::size_t> strides_;
    std::size_t size_ = 0;
};

/// Real-valued field on a grid. Immutable once constructed; all values finite.
class Signal {
public:
    Signal(GridShape shape, std::vector<double> values);

    static Signal zeros(const GridShape& shape);

    const GridShape& shape() const noexcept { return shape_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

    /// Moves the storage out, leaving the signal empty.
    std::vector<double> release() && { return std::move(values_); }

private:
    GridShape shape_;
    std::vector<double> values_;
};

/// Boolean mask over DFT bins, Hermitian-symmetric and non-empty.
class SpectralSupport {
public:
    SpectralSupport(GridShape shape, std::vector<std::uint8_t> mask);

    const GridShape& shape() const noexcept { return shape_; }
    std::span<const std::uint8_t> mask() const noexcept { return mask_; }
    bool contains(std::size_t bin) const { return mask_[bin] != 0; }
    std::size_t bin_count() const noexcept { return count_; }

private:
    GridShape shape_;
    std::vector<std::uint8_t> mask_;
    std::size_t count_ = 0;
};

/// Boolean mask over spatial samples with at least one sample set.
class Region {
public:
    Region(GridShape shape, std::vector<std::uint8_t> mask);

    const GridShape& shape() const noexcept { return shape_; }
    std::span<const std::uint8_t> mask() const noexcept { return mask_; }
    bool contains(std::size_t i) const { return mask_[i] != 0; }
    std::size_t sample_count() const noexcept { return count_; }

private:
    GridShape shape_;
    std::vector<std::uint8_t> mask_;
    std::size_t count_ = 0;
};

inline constexpr double kWeightSumTolerance = 1e-12;

/// Measurement regions with convex weights. Regions may overlap.
class WeightedRegionSet {
public:
    const GridShape& shape() const noexcept { return regions_.front().shape(); }
    const std::vector<Region>& regions() const noexcept { return regions_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    std::size_t size() const noexcept { return regions_.size(); }

    /// Sum of the weights accumulated in ascending region order.
    double weight_sum() const noexcept { return weight_sum_; }

    /// Per-sample sum of the weights of the regions containing that sample,
    /// accumulated in ascending region order.
    std::span<const double> sample_weights() const noexcept { return sample_weights_; }

    /// 1 where at least one region covers the sample.
    std::span<const std::uint8_t> union_mask() const noexcept { return union_mask_; }

    /// Per-sample count of covering regions.
    std::span<const double> coverage() const noexcept { return coverage_; }

private:
    friend WeightedRegionSet validate_weighted_regions(std::vector<Region>, std::vector<double>);
    WeightedRegionSet() = default;

    std::vector<Region> regions_;
    std::vector<double> weights_;
    std::vector<double> sample_weights_;
    std::vector<double> coverage_;
    std::vector<std::uint8_t> union_mask_;
    double weight_sum_ = 0.0;
};

/// Samples of h on the union of the regions, zero elsewhere.
class MeasuredSignal {
public:
    /// Validates that `samples` vanishes outside the region union.
    MeasuredSignal(WeightedRegionSet regions, Signal samples);

    /// Masks a full-grid signal to the region union.
    static MeasuredSignal measure(const Signal& h, WeightedRegionSet regions);

    const WeightedRegionSet& regions() const noexcept { return regions_; }
    const Signal& samples() const noexcept { return samples_; }
    const GridShape& shape() const noexcept { return samples_.shape(); }

private:
    WeightedRegionSet regions_;
    Signal samples_;
};

/// Rectangular lowpass support: bins whose wrapped frequency magnitude along every
/// axis is at most `half_bandwidth[axis]`.
SpectralSupport make_spectral_support(const GridShape& shape, const std::vector<std::size_t>& half_bandwidth);

/// Axis-aligned box region (no wrap-around).
Region region_from_rect(const GridShape& shape, const Index& corner, const Index& extent);

WeightedRegionSet validate_weighted_regions(std::vector<Region> regions, std::vector<double> weights);

std::vector<double> uniform_weights(std::size_t count);

void require_same_shape(const GridShape& a, const GridShape& b, const char* what);

}  // namespace ndextrap
