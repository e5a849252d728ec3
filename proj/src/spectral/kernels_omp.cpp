#include <omp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <mutex>

#include "nudgelab/kernels.hpp"

namespace nudge::kernels {

namespace {

constexpr int kBlocks = 64;
using Index = std::ptrdiff_t;

// Sums per-block partials in block order so the result is independent of the thread count.
template <class F>
double blocked_sum(std::size_t n, F&& body) {
    std::array<double, kBlocks> part{};
#pragma omp parallel for schedule(static)
    for (int b = 0; b < kBlocks; ++b) {
        const std::size_t lo = n * static_cast<std::size_t>(b) / kBlocks;
        const std::size_t hi = n * static_cast<std::size_t>(b + 1) / kBlocks;
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) acc += body(i);
        part[b] = acc;
    }
    double s = 0.0;
    for (double p : part) s += p;
    return s;
}

void axpby(cplx* y, const cplx* x, double a, double b, std::size_t n) {
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < static_cast<Index>(n); ++i) y[i] = a * y[i] + b * x[i];
}

void scale(cplx* y, const cplx* x, const double* s, std::size_t n) {
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < static_cast<Index>(n); ++i) y[i] = s[i] * x[i];
}

void deriv(cplx* y, const cplx* x, const double* s, double f, std::size_t n) {
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < static_cast<Index>(n); ++i) {
        const double m = f * s[i];
        y[i] = cplx(-m * x[i].imag(), m * x[i].real());
    }
}

void leray_torus(cplx* const* u, const double* const* k, int dim, std::size_t n) {
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < static_cast<Index>(n); ++i) {
        double kk = 0.0;
        cplx kdotu(0.0, 0.0);
        for (int a = 0; a < dim; ++a) {
            kk += k[a][i] * k[a][i];
            kdotu += k[a][i] * u[a][i];
        }
        if (kk == 0.0) continue;
        const cplx s = kdotu / kk;
        for (int a = 0; a < dim; ++a) u[a][i] -= k[a][i] * s;
    }
}

void leray_channel(cplx* ux, cplx* uy, const double* kx, const double* ky, std::size_t n) {
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < static_cast<Index>(n); ++i) {
        const double gg = kx[i] * kx[i] + ky[i] * ky[i];
        if (gg == 0.0) continue;
        const cplx d = cplx(0.0, -kx[i]) * ux[i] - ky[i] * uy[i];
        const cplx s = d / gg;
        ux[i] -= cplx(0.0, kx[i]) * s;
        uy[i] += ky[i] * s;
    }
}

void dot(double* out, const double* const* a, const double* const* b, int m, std::size_t n) {
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < static_cast<Index>(n); ++i) {
        double s = 0.0;
        for (int j = 0; j < m; ++j) s += a[j][i] * b[j][i];
        out[i] = s;
    }
}

void imex_update(cplx* y, const cplx* nl_now, const cplx* nl_prev, const double* k2, const double* mask,
                 const cplx* obs_sum, double diff, double mu, double dt, double c_now, double c_prev, std::size_t n) {
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < static_cast<Index>(n); ++i) {
        const double damp = diff * k2[i] + (mask ? mu * mask[i] : 0.0);
        cplx rhs = y[i] * (1.0 - 0.5 * dt * damp) + dt * c_now * nl_now[i];
        if (nl_prev) rhs += dt * c_prev * nl_prev[i];
        if (obs_sum && mask) rhs += (0.5 * dt * mu * mask[i]) * obs_sum[i];
        y[i] = rhs / (1.0 + 0.5 * dt * damp);
    }
}

double norm2(const cplx* x, const double* w, const double* s, std::size_t n) {
    return blocked_sum(n, [&](std::size_t i) { return w[i] * (s ? s[i] : 1.0) * std::norm(x[i]); });
}

double inner(const cplx* x, const cplx* y, const double* w, const double* s, std::size_t n) {
    return blocked_sum(n, [&](std::size_t i) {
        return w[i] * (s ? s[i] : 1.0) * (x[i].real() * y[i].real() + x[i].imag() * y[i].imag());
    });
}

double sum_abs_pow(const double* x, double p, std::size_t n) {
    return blocked_sum(n, [&](std::size_t i) { return std::pow(std::abs(x[i]), p); });
}

double max_abs(const double* x, std::size_t n) {
    double m = 0.0;
#pragma omp parallel for schedule(static) reduction(max : m)
    for (Index i = 0; i < static_cast<Index>(n); ++i) m = std::max(m, std::abs(x[i]));
    return m;
}

}  // namespace

const Table& openmp() {
    static const Table t{"openmp", axpby, scale, deriv, leray_torus, leray_channel, dot,
                         imex_update, norm2, inner, sum_abs_pow, max_abs};
    return t;
}

const Table& active() {
    configure_threads();
    return openmp();
}

void configure_threads() {
    static std::once_flag once;
    std::call_once(once, [] {
        if (const char* env = std::getenv("NUDGE_LAB_THREADS")) {
            const int n = std::atoi(env);
            if (n > 0) omp_set_num_threads(std::min(n, omp_get_max_threads()));
        }
    });
}

}  // namespace nudge::kernels
