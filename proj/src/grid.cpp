#include "ndextrap/grid.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace ndextrap {

GridShape::GridShape(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) {
        throw ParameterError("grid shape needs at least one axis");
    }
    strides_.assign(dims_.size(), 1);
    size_ = 1;
    for (std::size_t a = dims_.size(); a-- > 0;) {
        if (dims_[a] < 1) {
            throw ParameterError("grid axis " + std::to_string(a) + " has zero length");
        }
        strides_[a] = size_;
        size_ *= dims_[a];
    }
}

std::size_t GridShape::flat(const Index& idx) const {
    if (idx.size() != dims_.size()) {
        throw ParameterError("index rank does not match grid rank");
    }
    std::size_t f = 0;
    for (std::size_t a = 0; a < dims_.size(); ++a) {
        if (idx[a] >= dims_[a]) {
            throw ParameterError("index out of bounds on axis " + std::to_string(a));
        }
        f += idx[a] * strides_[a];
    }
    return f;
}

Index GridShape::unravel(std::size_t flat) const {
    if (flat >= size_) {
        throw ParameterError("flat index out of bounds");
    }
    Index idx(dims_.size());
    for (std::size_t a = 0; a < dims_.size(); ++a) {
        idx[a] = flat / strides_[a];
        flat %= strides_[a];
    }
    return idx;
}

std::size_t GridShape::mirror(std::size_t flat) const {
    std::size_t out = 0;
    for (std::size_t a = 0; a < dims_.size(); ++a) {
        const std::size_t k = flat / strides_[a];
        flat %= strides_[a];
        out += ((dims_[a] - k) % dims_[a]) * strides_[a];
    }
    return out;
}

long GridShape::wrapped(std::size_t bin, std::size_t n) noexcept {
    const auto b = static_cast<long>(bin);
    const auto len = static_cast<long>(n);
    return 2 * b > len ? b - len : b;
}

Signal::Signal(GridShape shape, std::vector<double> values) : shape_(std::move(shape)), values_(std::move(values)) {
    if (values_.size() != shape_.size()) {
        throw ParameterError("signal has " + std::to_string(values_.size()) + " values, grid needs " +
                             std::to_string(shape_.size()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw ParameterError("signal value at flat index " + std::to_string(i) + " is not finite");
        }
    }
}

Signal Signal::zeros(const GridShape& shape) {
    return Signal(shape, std::vector<double>(shape.size(), 0.0));
}

SpectralSupport::SpectralSupport(GridShape shape, std::vector<std::uint8_t> mask)
    : shape_(std::move(shape)), mask_(std::move(mask)) {
    if (mask_.size() != shape_.size()) {
        throw ParameterError("support mask size does not match grid");
    }
    for (std::size_t k = 0; k < mask_.size(); ++k) {
        mask_[k] = mask_[k] ? 1 : 0;
        count_ += mask_[k];
    }
    if (count_ == 0) {
        throw ValidationError("spectral support has no bins set");
    }
    for (std::size_t k = 0; k < mask_.size(); ++k) {
        if ((mask_[k] != 0) != (mask_[shape_.mirror(k)] != 0)) {
            throw ValidationError("spectral support is not Hermitian-symmetric at bin " + std::to_string(k),
                                  static_cast<long>(k));
        }
    }
}

Region::Region(GridShape shape, std::vector<std::uint8_t> mask) : shape_(std::move(shape)), mask_(std::move(mask)) {
    if (mask_.size() != shape_.size()) {
        throw ParameterError("region mask size does not match grid");
    }
    for (auto& m : mask_) {
        m = m ? 1 : 0;
        count_ += m;
    }
    if (count_ == 0) {
        throw ValidationError("region has no samples set");
    }
}

MeasuredSignal::MeasuredSignal(WeightedRegionSet regions, Signal samples)
    : regions_(std::move(regions)), samples_(std::move(samples)) {
    require_same_shape(regions_.shape(), samples_.shape(), "measured samples");
    const auto uni = regions_.union_mask();
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (!uni[i] && samples_[i] != 0.0) {
            throw ValidationError("measured samples are nonzero outside the region union at flat index " +
                                      std::to_string(i),
                                  static_cast<long>(i));
        }
    }
}

MeasuredSignal MeasuredSignal::measure(const Signal& h, WeightedRegionSet regions) {
    require_same_shape(regions.shape(), h.shape(), "measured signal");
    std::vector<double> v(h.size());
    const auto uni = regions.union_mask();
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = uni[i] ? h[i] : 0.0;
    }
    return MeasuredSignal(std::move(regions), Signal(h.shape(), std::move(v)));
}

SpectralSupport make_spectral_support(const GridShape& shape, const std::vector<std::size_t>& half_bandwidth) {
    if (half_bandwidth.size() != shape.rank()) {
        throw ParameterError("half-bandwidth needs one entry per axis");
    }
    for (std::size_t a = 0; a < shape.rank(); ++a) {
        // halfbw < dims/2, i.e. 2*halfbw < dims
        if (2 * half_bandwidth[a] >= shape.dim(a)) {
            std::ostringstream os;
            os << "half-bandwidth " << half_bandwidth[a] << " on axis " << a << " must be below " << shape.dim(a)
               << "/2";
            throw ParameterError(os.str());
        }
    }
    std::vector<std::uint8_t> mask(shape.size(), 0);
    for (std::size_t k = 0; k < shape.size(); ++k) {
        const Index idx = shape.unravel(k);
        bool in = true;
        for (std::size_t a = 0; a < shape.rank() && in; ++a) {
            const long f = GridShape::wrapped(idx[a], shape.dim(a));
            in = static_cast<std::size_t>(f < 0 ? -f : f) <= half_bandwidth[a];
        }
        mask[k] = in ? 1 : 0;
    }
    return SpectralSupport(shape, std::move(mask));
}

Region region_from_rect(const GridShape& shape, const Index& corner, const Index& extent) {
    if (corner.size() != shape.rank() || extent.size() != shape.rank()) {
        throw ParameterError("rectangle corner and extent need one entry per axis");
    }
    for (std::size_t a = 0; a < shape.rank(); ++a) {
        if (extent[a] < 1 || corner[a] + extent[a] > shape.dim(a)) {
            std::ostringstream os;
            os << "rectangle [" << corner[a] << ", " << corner[a] + extent[a] << ") out of bounds on axis " << a
               << " (length " << shape.dim(a) << ")";
            throw ParameterError(os.str());
        }
    }
    std::vector<std::uint8_t> mask(shape.size(), 0);
    for (std::size_t i = 0; i < shape.size(); ++i) {
        const Index idx = shape.unravel(i);
        bool in = true;
        for (std::size_t a = 0; a < shape.rank() && in; ++a) {
            in = idx[a] >= corner[a] && idx[a] < corner[a] + extent[a];
        }
        mask[i] = in ? 1 : 0;
    }
    return Region(shape, std::move(mask));
}

WeightedRegionSet validate_weighted_regions(std::vector<Region> regions, std::vector<double> weights) {
    if (regions.empty()) {
        throw ValidationError("at least one region is required");
    }
    if (regions.size() != weights.size()) {
        throw ValidationError("got " + std::to_string(regions.size()) + " regions but " +
                              std::to_string(weights.size()) + " weights");
    }
    const GridShape& shape = regions.front().shape();
    double sum = 0.0;
    for (std::size_t m = 0; m < regions.size(); ++m) {
        if (!(regions[m].shape() == shape)) {
            throw ValidationError("region " + std::to_string(m) + " has a different grid shape",
                                  static_cast<long>(m));
        }
        if (!(weights[m] > 0.0 && weights[m] <= 1.0)) {
            throw ValidationError("weight " + std::to_string(m) + " = " + std::to_string(weights[m]) +
                                      " is outside (0, 1]",
                                  static_cast<long>(m));
        }
        sum += weights[m];
    }
    if (std::abs(sum - 1.0) > kWeightSumTolerance) {
        std::ostringstream os;
        os.precision(17);
        os << "weights sum to " << sum << ", expected 1";
        throw ValidationError(os.str(), static_cast<long>(regions.size() - 1));
    }

    WeightedRegionSet set;
    set.sample_weights_.assign(shape.size(), 0.0);
    set.coverage_.assign(shape.size(), 0.0);
    set.union_mask_.assign(shape.size(), 0);
    for (std::size_t m = 0; m < regions.size(); ++m) {
        const auto mask = regions[m].mask();
        for (std::size_t i = 0; i < shape.size(); ++i) {
            if (mask[i]) {
                set.sample_weights_[i] += weights[m];
                set.coverage_[i] += 1.0;
                set.union_mask_[i] = 1;
            }
        }
    }
    set.regions_ = std::move(regions);
    set.weights_ = std::move(weights);
    set.weight_sum_ = sum;
    return set;
}

std::vector<double> uniform_weights(std::size_t count) {
    if (count == 0) {
        throw ParameterError("uniform weights need at least one region");
    }
    return std::vector<double>(count, 1.0 / static_cast<double>(count));
}

void require_same_shape(const GridShape& a, const GridShape& b, const char* what) {
    if (!(a == b)) {
        throw ParameterError(std::string(what) + ": grid shapes differ");
    }
}

}  // namespace ndextrap
