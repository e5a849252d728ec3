#pragma once

#include <cstddef>

#include "nudgelab/core.hpp"

namespace nudge::kernels {

/// Modewise and pointwise loops used by the spectral operators.
///
/// Two implementations share this table: an OpenMP one used by the library and a plain
/// serial one kept as a reference for tests and benchmarks. Pointwise kernels agree bitwise;
/// reductions in the OpenMP table sum fixed index blocks in order, so their result does not
/// depend on the thread count.
struct Table {
    const char* name;
    /// y = a*y + b*x
    void (*axpby)(cplx* y, const cplx* x, double a, double b, std::size_t n);
    /// y = s*x (s real per slot)
    void (*scale)(cplx* y, const cplx* x, const double* s, std::size_t n);
    /// y = i*f*s*x
    void (*deriv)(cplx* y, const cplx* x, const double* s, double f, std::size_t n);
    /// Torus Leray projection on dim components using derivative wavenumbers.
    void (*leray_torus)(cplx* const* u, const double* const* k, int dim, std::size_t n);
    /// Channel Leray projection for (cosine u_x, sine u_y) pairs.
    void (*leray_channel)(cplx* ux, cplx* uy, const double* kx, const double* ky, std::size_t n);
    /// out = sum_i a_i * b_i pointwise over m factor pairs.
    void (*dot)(double* out, const double* const* a, const double* const* b, int m, std::size_t n);
    /// Crank-Nicolson on diff*k2 and mu*mask, Adams-Bashforth on the explicit terms.
    void (*imex_update)(cplx* y, const cplx* nl_now, const cplx* nl_prev, const double* k2, const double* mask,
                        const cplx* obs_sum, double diff, double mu, double dt, double c_now, double c_prev,
                        std::size_t n);
    /// sum w*s*|x|^2 (s may be null).
    double (*norm2)(const cplx* x, const double* w, const double* s, std::size_t n);
    /// sum w*s*Re(x conj(y)) (s may be null).
    double (*inner)(const cplx* x, const cplx* y, const double* w, const double* s, std::size_t n);
    /// sum |x|^p
    double (*sum_abs_pow)(const double* x, double p, std::size_t n);
    double (*max_abs)(const double* x, std::size_t n);
};

const Table& openmp();
const Table& serial();
/// Table used by the library operators.
const Table& active();

/// Applies NUDGE_LAB_THREADS (if set) to the OpenMP runtime once.
void configure_threads();

}  // namespace nudge::kernels
