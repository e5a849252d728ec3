#pragma once

#include <complex>
#include <cstddef>
#include <new>
#include <stdexcept>
#include <string>
#include <vector>

namespace nudge {

using cplx = std::complex<double>;

/// Allocator returning 64-byte aligned storage so FFTW plans stay valid for every buffer.
template <class T>
struct AlignedAllocator {
    using value_type = T;
    static constexpr std::size_t alignment = 64;

    AlignedAllocator() noexcept = default;
    template <class U>
    AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

    T* allocate(std::size_t n) {
        if (n == 0) return nullptr;
        void* p = ::operator new(n * sizeof(T), std::align_val_t(alignment));
        return static_cast<T*>(p);
    }
    void deallocate(T* p, std::size_t) noexcept {
        ::operator delete(p, std::align_val_t(alignment));
    }
    template <class U>
    bool operator==(const AlignedAllocator<U>&) const noexcept { return true; }
};

using CVec = std::vector<cplx, AlignedAllocator<cplx>>;
using RVec = std::vector<double, AlignedAllocator<double>>;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ShapeError : Error { using Error::Error; };
struct SymmetryError : Error { using Error::Error; };
struct TypeError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct PreconditionError : Error { using Error::Error; };
struct KindMismatchError : Error { using Error::Error; };
struct SamplingError : Error { using Error::Error; };
struct MissingInputError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct FormatError : Error { using Error::Error; };

struct StabilityError : Error {
    StabilityError(const std::string& msg, double suggested)
        : Error(msg), suggested_dt(suggested) {}
    double suggested_dt;
};

struct DivergenceError : Error {
    DivergenceError(const std::string& msg, double t_valid)
        : Error(msg), last_valid_time(t_valid) {}
    double last_valid_time;
};

}  // namespace nudge
