#pragma once

#include <complex>
#include <span>

#include "ndextrap/grid.hpp"

namespace ndextrap {

/// In-place N-dimensional complex DFT workspace backed by FFTW.
///
/// The buffer is SIMD-aligned and plans are shared per grid shape, so a given
/// input always runs through the same codelets and produces the same bits.
/// Both directions are unnormalized. One instance must not be used from two
/// threads at once; separate instances may.
class DftBuffer {
public:
    explicit DftBuffer(const GridShape& shape);
    ~DftBuffer();
    DftBuffer(DftBuffer&& other) noexcept;
    DftBuffer& operator=(DftBuffer&& other) noexcept;
    DftBuffer(const DftBuffer&) = delete;
    DftBuffer& operator=(const DftBuffer&) = delete;

    const GridShape& shape() const noexcept { return shape_; }
    std::span<std::complex<double>> data() noexcept { return {data_, shape_.size()}; }
    std::span<const std::complex<double>> data() const noexcept { return {data_, shape_.size()}; }

    void forward();
    void inverse();

private:
    GridShape shape_;
    std::complex<double>* data_ = nullptr;
    void* forward_plan_ = nullptr;
    void* inverse_plan_ = nullptr;
};

}  // namespace ndextrap
