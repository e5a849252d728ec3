#include <doctest.h>

#include <cmath>
#include <random>

#include "nudgelab/kernels.hpp"

using namespace nudge;

namespace {

CVec random_cvec(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d(0.0, 1.0);
    CVec v(n);
    for (auto& z : v) z = {d(rng), d(rng)};
    return v;
}

RVec random_rvec(std::size_t n, std::uint64_t seed, double lo = 0.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(lo, 1.0);
    RVec v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

bool same(const CVec& a, const CVec& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

}  // namespace

TEST_CASE("pointwise kernels agree bitwise across tables") {
    const auto& S = kernels::serial();
    const auto& P = kernels::openmp();
    const std::size_t n = 100003;
    const CVec x = random_cvec(n, 1), nl = random_cvec(n, 2), nlp = random_cvec(n, 3), obs = random_cvec(n, 4);
    const RVec s = random_rvec(n, 5), k2 = random_rvec(n, 6), mask = random_rvec(n, 7);

    CVec a = random_cvec(n, 8), b = a;
    S.axpby(a.data(), x.data(), 0.3, -1.7, n);
    P.axpby(b.data(), x.data(), 0.3, -1.7, n);
    CHECK(same(a, b));

    S.scale(a.data(), x.data(), s.data(), n);
    P.scale(b.data(), x.data(), s.data(), n);
    CHECK(same(a, b));

    S.deriv(a.data(), x.data(), s.data(), 2.5, n);
    P.deriv(b.data(), x.data(), s.data(), 2.5, n);
    CHECK(same(a, b));

    a = x;
    b = x;
    S.imex_update(a.data(), nl.data(), nlp.data(), k2.data(), mask.data(), obs.data(), 0.1, 3.0, 1e-2, 1.5, -0.5, n);
    P.imex_update(b.data(), nl.data(), nlp.data(), k2.data(), mask.data(), obs.data(), 0.1, 3.0, 1e-2, 1.5, -0.5, n);
    CHECK(same(a, b));
}

TEST_CASE("reductions agree across tables and thread counts") {
    const auto& S = kernels::serial();
    const auto& P = kernels::openmp();
    const std::size_t n = 250001;
    const CVec x = random_cvec(n, 11), y = random_cvec(n, 12);
    const RVec w = random_rvec(n, 13), s = random_rvec(n, 14);
    const double ns = S.norm2(x.data(), w.data(), s.data(), n);
    const double np = P.norm2(x.data(), w.data(), s.data(), n);
    CHECK(std::abs(ns - np) < 1e-13 * ns);
    const double is = S.inner(x.data(), y.data(), w.data(), nullptr, n);
    CHECK(std::abs(is - P.inner(x.data(), y.data(), w.data(), nullptr, n)) < 1e-12 * std::sqrt(ns * ns));
    const RVec r = random_rvec(n, 15, -1.0);
    CHECK(S.sum_abs_pow(r.data(), 4.0, n) == doctest::Approx(P.sum_abs_pow(r.data(), 4.0, n)).epsilon(1e-13));
    CHECK(S.max_abs(r.data(), n) == P.max_abs(r.data(), n));
    const double first = P.norm2(x.data(), w.data(), s.data(), n);
    for (int rep = 0; rep < 3; ++rep) CHECK(P.norm2(x.data(), w.data(), s.data(), n) == first);
}

TEST_CASE("imex update solves the scalar Crank-Nicolson recurrence") {
    const auto& K = kernels::active();
    const double nu = 0.2, mu = 5.0, dt = 1e-3, lam = 40.0;
    CVec y(1, cplx(1.0, -0.5)), zero(1, cplx(0.0, 0.0)), obs(1, cplx(0.0, 0.0));
    const RVec k2(1, lam), mask(1, 1.0);
    cplx ref = y[0];
    const double a = 0.5 * dt * (nu * lam + mu);
    for (int i = 0; i < 200; ++i) {
        K.imex_update(y.data(), zero.data(), nullptr, k2.data(), mask.data(), obs.data(), nu, mu, dt, 1.0, 0.0, 1);
        ref *= (1.0 - a) / (1.0 + a);
    }
    CHECK(std::abs(y[0] - ref) < 1e-14);
    CHECK(std::abs(y[0]) == doctest::Approx(std::abs(cplx(1.0, -0.5)) * std::exp(-(nu * lam + mu) * 0.2)).epsilon(1e-5));
}

TEST_CASE("Leray kernels remove the longitudinal part") {
    const auto& K = kernels::active();
    const std::size_t n = 64;
    CVec u0 = random_cvec(n, 21), u1 = random_cvec(n, 22);
    RVec k0 = random_rvec(n, 23, -1.0), k1 = random_rvec(n, 24, -1.0);
    cplx* u[2] = {u0.data(), u1.data()};
    const double* k[2] = {k0.data(), k1.data()};
    K.leray_torus(u, k, 2, n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(k0[i] * u0[i] + k1[i] * u1[i]) < 1e-14);
}
