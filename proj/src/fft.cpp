#include "ndextrap/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <new>
#include <utility>
#include <vector>

namespace ndextrap {

namespace {

struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
};

// FFTW planning is not thread-safe; execution of an existing plan is.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

PlanPair plans_for(const GridShape& shape) {
    static std::map<std::vector<std::size_t>, PlanPair> cache;
    std::lock_guard lock(plan_mutex());
    auto it = cache.find(shape.dims());
    if (it != cache.end()) {
        return it->second;
    }
    std::vector<int> n(shape.dims().begin(), shape.dims().end());
    auto* scratch = fftw_alloc_complex(shape.size());
    if (scratch == nullptr) {
        throw std::bad_alloc();
    }
    PlanPair p;
    p.forward = fftw_plan_dft(static_cast<int>(n.size()), n.data(), scratch, scratch, FFTW_FORWARD, FFTW_ESTIMATE);
    p.inverse = fftw_plan_dft(static_cast<int>(n.size()), n.data(), scratch, scratch, FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_free(scratch);
    if (p.forward == nullptr || p.inverse == nullptr) {
        throw InternalConsistencyError("FFTW failed to create a plan");
    }
    cache.emplace(shape.dims(), p);
    return p;
}

}  // namespace

DftBuffer::DftBuffer(const GridShape& shape) : shape_(shape) {
    const PlanPair p = plans_for(shape_);
    forward_plan_ = p.forward;
    inverse_plan_ = p.inverse;
    data_ = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(shape_.size()));
    if (data_ == nullptr) {
        throw std::bad_alloc();
    }
}

DftBuffer::~DftBuffer() {
    if (data_ != nullptr) {
        fftw_free(data_);
    }
}

DftBuffer::DftBuffer(DftBuffer&& other) noexcept
    : shape_(other.shape_),
      data_(std::exchange(other.data_, nullptr)),
      forward_plan_(other.forward_plan_),
      inverse_plan_(other.inverse_plan_) {}

DftBuffer& DftBuffer::operator=(DftBuffer&& other) noexcept {
    if (this != &other) {
        if (data_ != nullptr) {
            fftw_free(data_);
        }
        shape_ = other.shape_;
        data_ = std::exchange(other.data_, nullptr);
        forward_plan_ = other.forward_plan_;
        inverse_plan_ = other.inverse_plan_;
    }
    return *this;
}

void DftBuffer::forward() {
    auto* d = reinterpret_cast<fftw_complex*>(data_);
    fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), d, d);
}

void DftBuffer::inverse() {
    auto* d = reinterpret_cast<fftw_complex*>(data_);
    fftw_execute_dft(static_cast<fftw_plan>(inverse_plan_), d, d);
}

}  // namespace ndextrap
