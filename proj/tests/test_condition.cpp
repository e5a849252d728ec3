#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nudgelab/condition.hpp"
#include "nudgelab/random_fields.hpp"

using namespace nudge;

namespace {

const double kDeskL = std::sqrt(2.0) / 4.0;

Params unit_params() {
    Params p;
    p.nu = 1.0;
    p.kappa = 1.0;
    p.c_interp = 1.0;
    p.C_sob = 1.0;
    return p;
}

ConditionExtras full_extras() {
    ConditionExtras ex;
    ex.S2 = 0.5;
    ex.f_norm = 0.3;
    ex.rho = 0.2;
    return ex;
}

const ConditionVariant kAll[] = {ConditionVariant::Weak,      ConditionVariant::Strong,   ConditionVariant::Sync,
                                 ConditionVariant::Attractor, ConditionVariant::Criterion, ConditionVariant::Weakened,
                                 ConditionVariant::Criterion1};

}  // namespace

TEST_CASE("h0 closed forms") {
    const Params p = unit_params();
    CHECK(h0_variant(p, 1.0, ConditionVariant::Weak, {}) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(h0_variant(p, 1.0, ConditionVariant::Attractor, {}) == doctest::Approx(0.5).epsilon(1e-15));
    // max{8/(kappa lambda1), (2/kappa)(1 + 2/lambda1^2)} = 8 at unit values, times 4c/nu
    CHECK(h0_variant(p, 1.0, ConditionVariant::Strong, {}) == doctest::Approx(1.0 / std::sqrt(32.0)).epsilon(1e-15));
    ConditionExtras ex;
    ex.f_norm = 0.0;
    CHECK(h0_variant(p, 1.0, ConditionVariant::Criterion, ex) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(h0_variant(p, 1.0, ConditionVariant::Weakened, ex) == doctest::Approx(0.5).epsilon(1e-15));
    ex.f_norm = 1.0;
    CHECK(h0_variant(p, 1.0, ConditionVariant::Criterion, ex) == doctest::Approx(1.0 / std::sqrt(32.0)).epsilon(1e-15));
    CHECK(h0_variant(p, 1.0, ConditionVariant::Weakened, ex) == doctest::Approx(1.0 / 32.0).epsilon(1e-15));
    Params q = p;
    q.nu = 0.5;
    const double a = h0_variant(q, 1.0, ConditionVariant::Weakened, ex);
    const double b = h0_variant(q, 1.0, ConditionVariant::Criterion1, ex);
    CHECK(1.0 / (a * a) == doctest::Approx(1024.0 / std::pow(0.5, 8)).epsilon(1e-13));
    CHECK(1.0 / (b * b) == doctest::Approx(1024.0 / std::pow(0.5, 5)).epsilon(1e-13));
    ConditionExtras sync;
    sync.S2 = 0.0;
    CHECK(h0_variant(p, 1.0, ConditionVariant::Sync, sync) == doctest::Approx(1.0 / std::sqrt(32.0)).epsilon(1e-15));
}

TEST_CASE("h0 is nonincreasing in c except for the criterion variant") {
    const ConditionExtras ex = full_extras();
    for (ConditionVariant v : kAll) {
        if (v == ConditionVariant::Criterion) continue;
        Params p = unit_params();
        double prev = std::numeric_limits<double>::infinity();
        for (double c : {1e-3, 1e-2, 0.1, 1.0, 10.0}) {
            p.c_interp = c;
            const double h0 = h0_variant(p, 2.0, v, ex);
            CHECK(h0 <= prev);
            prev = h0;
        }
    }
    // h0^-2 = max{1/(4 c lambda1), ...}: while the first term is active h0 grows with c
    Params p = unit_params();
    ConditionExtras f0;
    f0.f_norm = 0.0;
    p.c_interp = 0.1;
    const double small = h0_variant(p, 1.0, ConditionVariant::Criterion, f0);
    p.c_interp = 1.0;
    CHECK(h0_variant(p, 1.0, ConditionVariant::Criterion, f0) > small);
}

TEST_CASE("missing extras are reported") {
    const Params p = unit_params();
    CHECK_THROWS_AS(h0_variant(p, 1.0, ConditionVariant::Sync, {}), MissingInputError);
    CHECK_THROWS_AS(h0_variant(p, 1.0, ConditionVariant::Criterion, {}), MissingInputError);
    CHECK_THROWS_AS(h0_variant(p, 1.0, ConditionVariant::Weakened, {}), MissingInputError);
    CHECK_THROWS_AS(condition_variant_from_string("bogus"), ConfigError);
    for (ConditionVariant v : kAll) CHECK(condition_variant_from_string(to_string(v)) == v);
}

TEST_CASE("mu range arithmetic") {
    const Params p = unit_params();
    const MuInterval point = mu_range(0.0, 1.0, 1.0, p);
    CHECK_FALSE(point.empty);
    CHECK(point.lo == 0.25);
    CHECK(point.hi == 0.25);

    const MuInterval r = mu_range(std::pow(1.0 / 64.0, 0.25), 0.5, 1.0, p);
    CHECK_FALSE(r.empty);
    CHECK(r.lo == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(r.hi == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.geometric_mean() == doctest::Approx(0.5).epsilon(1e-15));

    double prev = 0.0;
    for (double h : {0.9, 0.5, 0.25, 0.1}) {
        const MuInterval m = mu_range(0.3, h, 1.0, p);
        CHECK(m.hi > prev);
        prev = m.hi;
    }
    const MuInterval coarse = mu_range(0.0, 2.0, 1.0, p);
    CHECK(coarse.empty);
    CHECK(coarse.violated.find("h <= h0") != std::string::npos);
    const MuInterval big = mu_range(10.0, 0.5, 1.0, p);
    CHECK(big.empty);
    CHECK(big.violated.find("M_h") != std::string::npos);

    const MuInterval weak = mu_range(123.0, 0.5, 1.0, p, ConditionVariant::Weak);
    CHECK(weak.lo == 0.5);
    CHECK(weak.hi == 2.0);
    const MuInterval crit = mu_range(1.0, 0.5, 1.0, p, ConditionVariant::Criterion);
    CHECK(crit.lo == 2.0);
    CHECK(crit.hi == 0.25);
    CHECK(crit.empty);
    CHECK_THROWS_AS(mu_range(1.0, 0.0, 1.0, p), DomainError);
}

TEST_CASE("weakened mu range") {
    const Params p = unit_params();
    const WeakenedRange r = mu_range_weakened(1.0, 0.5, 1.0, 3.0, 1.0, p, 1.0);
    const double expected = std::max(0.25, std::pow(32.0 / std::pow(1.5, 4.0 / 3.0), 3.0));
    CHECK(r.q == doctest::Approx(1.5));
    CHECK(r.interval.lo == doctest::Approx(expected).epsilon(1e-13));
    CHECK(r.interval.hi == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.interval.empty);

    const WeakenedRange z = mu_range_weakened(0.0, 0.5, 1.0, 3.0, 1.0, p, 1.0);
    CHECK(z.interval.lo == 0.25);
    CHECK_FALSE(z.interval.empty);

    double prev = 0.0;
    for (double h : {0.9, 0.5, 0.25}) {
        const WeakenedRange w = mu_range_weakened(0.01, h, 1.0, 3.0, 1.0, p, 1.0);
        REQUIRE_FALSE(w.interval.empty);
        CHECK(w.Mh > prev);
        prev = w.Mh;
    }
    CHECK_THROWS_AS(mu_range_weakened(1.0, 0.5, 1.0, 2.0, 1.0, p, 1.0), DomainError);
}

TEST_CASE("empty-interval detection agrees with the direct inequality") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> lg(-3.0, 1.0);
    int checked = 0;
    for (int i = 0; i < 100; ++i) {
        Params p = unit_params();
        p.nu = std::pow(10.0, lg(rng));
        p.c_interp = std::pow(10.0, lg(rng));
        const double Mh = std::pow(10.0, lg(rng)), h = std::pow(10.0, lg(rng)) * 0.1;
        const double h0 = h0_variant(p, 1.0, ConditionVariant::Strong, {});
        const MuInterval r = mu_range(Mh, h, h0, p, ConditionVariant::Strong);
        const bool direct = h <= h0 && std::max(p.nu / (4 * p.c_interp * h0 * h0),
                                                16 * p.c_interp * std::pow(Mh, 4) / std::pow(p.nu, 3)) <=
                                           p.nu / (4 * p.c_interp * h * h);
        CHECK(r.empty == !direct);
        ++checked;
    }
    CHECK(checked == 100);
}

TEST_CASE("temperature bound") {
    CHECK(temperature_bound_S(2.0, 1.5, 0.4, 3.0) == doctest::Approx(1.5 * 2 * 0.4 / std::pow(9.0, 0.25)).epsilon(1e-15));
}

TEST_CASE("M_h and K_h from streams") {
    auto g = Grid::torus({32, 32}, {kDeskL, kDeskL});
    const Interpolant ip = Interpolant::modal(g, 8);
    ObservationStream zero(InterpolantSpec::of(ip));
    zero.append(observe(SpectralField::velocity(g), ip, 0.0));
    zero.append(observe(SpectralField::velocity(g), ip, 2.0));
    CHECK(compute_Mh(zero, ip, 1.0) == 0.0);
    CHECK(compute_Kh(zero, ip, 1.0, 3.0) == 0.0);
    CHECK_THROWS_AS(compute_Mh(ObservationStream(InterpolantSpec::of(ip)), ip, 1.0), MissingInputError);

    // single lowest mode u = (0, A sin(2 pi x / L)): |u|^2 = A^2 L^2 / 2 and ||u||^2 = lambda1 |u|^2
    const double A = 0.01;
    std::vector<double> s(2 * g->physical_size(), 0.0);
    for (int i = 0; i < 32; ++i)
        for (int j = 0; j < 32; ++j)
            s[g->physical_size() + i * 32 + j] = A * std::sin(2 * std::numbers::pi * g->coordinate(0, i) / kDeskL);
    const SpectralField u = to_spectral(s, g, 2, FieldKind::Velocity);
    ObservationStream one(InterpolantSpec::of(ip));
    one.append(observe(u, ip, 0.0));
    const double a2 = A * A * kDeskL * kDeskL / 2;
    CHECK(compute_Mh(one, ip, 1.0) * compute_Mh(one, ip, 1.0) == doctest::Approx(32 * g->lambda1() * a2).epsilon(1e-12));

    // constant ||I_h u|| = a on [0, 2] gives K_h = a tau0^{1/2p}
    ObservationStream flat(InterpolantSpec::of(ip));
    for (int k = 0; k <= 20; ++k) flat.append(observe(u, ip, 0.1 * k));
    const double a = std::sqrt(g->lambda1() * a2);
    CHECK(compute_Kh(flat, ip, 1.0, 3.0) == doctest::Approx(a).epsilon(1e-12));
    CHECK(compute_Kh(flat, ip, 0.5, 4.0) == doctest::Approx(a * std::pow(0.5, 1.0 / 8)).epsilon(1e-12));
    CHECK_THROWS_AS(compute_Kh(flat, ip, 3.0, 3.0), DomainError);
    CHECK_THROWS_AS(compute_Kh(flat, ip, 1.0, 2.5), DomainError);

    RandomSpectrum spec;
    spec.kmax = 5;
    ObservationStream rnd(InterpolantSpec::of(ip));
    double sup = 0.0;
    for (int k = 0; k < 10; ++k) {
        const SpectralField v = random_velocity(g, 40 + k, spec);
        rnd.append(observe(v, ip, 0.3 * k));
        const double n = h1_norm(apply(v, ip));
        sup = std::max(sup, n * n);
    }
    CHECK(compute_Mh(rnd, ip, 1.0) == doctest::Approx(std::sqrt(32 * sup)).epsilon(1e-10));
    double prev = 0.0;
    for (double tau : {0.3, 0.9, 1.5, 2.7}) {
        const double k = compute_Kh(rnd, ip, tau, 3.0);
        CHECK(k >= prev);
        prev = k;
    }

    const Interpolant vol = Interpolant::volume(g, {4, 4, 1});
    ObservationStream vs(InterpolantSpec::of(vol));
    const Observation vo = observe(u, vol, 0.0);
    vs.append(vo);
    double e = 0.0;
    for (double x : vo.payload) e += x * x;
    CHECK(compute_Mh(vs, vol, 0.01) == doctest::Approx(std::sqrt(32 * 0.01 * vol.h() * e)).epsilon(1e-14));
}

TEST_CASE("check_condition composes the pieces") {
    auto g = Grid::torus({32, 32}, {kDeskL, kDeskL});
    const Interpolant ip = Interpolant::modal(g, 8);
    Params p;
    p.c_interp = 1e-3;
    ObservationStream zero(InterpolantSpec::of(ip));
    zero.append(observe(SpectralField::velocity(g), ip, 0.0));
    const ConditionReport z = check_condition(zero, ip, p, ConditionVariant::Sync);
    CHECK(z.satisfied);
    CHECK(z.Mh == 0.0);
    CHECK(z.alpha == doctest::Approx(std::min(z.mu_selected / 4, p.kappa * g->lambda1() / 2)));
    CHECK(z.mu_selected == doctest::Approx(z.mu_interval.geometric_mean()));

    ObservationStream none(InterpolantSpec::of(ip));
    CHECK(check_condition(none, ip, p, ConditionVariant::Sync).satisfied);

    RandomSpectrum spec;
    spec.kmax = 4;
    spec.energy = 1e-5;
    const SpectralField u = random_velocity(g, 3, spec);
    ObservationStream s(InterpolantSpec::of(ip));
    s.append(observe(u, ip, 0.0));
    const ConditionReport ok = check_condition(s, ip, p, ConditionVariant::Sync);
    REQUIRE(ok.satisfied);
    CHECK(ok.alpha == doctest::Approx(std::min(ok.mu_selected / 4, p.kappa * g->lambda1() / 2)));
    // the largest admissible M_h solves 16 c M^4 / nu^3 = nu / (4 c h^2)
    const double Mmax = std::pow(std::pow(p.nu, 4) / (64 * p.c_interp * p.c_interp * ip.h() * ip.h()), 0.25);
    SpectralField big = u;
    const double scale = 1.01 * Mmax / ok.Mh;
    for (auto& z2 : big.raw()) z2 *= scale;
    ObservationStream s2(InterpolantSpec::of(ip));
    s2.append(observe(big, ip, 0.0));
    const ConditionReport bad = check_condition(s2, ip, p, ConditionVariant::Sync);
    CHECK_FALSE(bad.satisfied);
    CHECK(bad.violated.find("M_h") != std::string::npos);
    SpectralField edge = u;
    for (auto& z2 : edge.raw()) z2 *= 0.99 * Mmax / ok.Mh;
    ObservationStream s3(InterpolantSpec::of(ip));
    s3.append(observe(edge, ip, 0.0));
    CHECK(check_condition(s3, ip, p, ConditionVariant::Sync).satisfied);

    ConditionExtras ex;
    ex.mu_override = 1e6;
    const ConditionReport o = check_condition(s, ip, p, ConditionVariant::Sync, ex);
    CHECK(o.mu_overridden);
    CHECK_FALSE(o.mu_in_interval);
    CHECK(ok.c_max > p.c_interp);

    const ConditionReport crit = check_condition(s, ip, p, ConditionVariant::Criterion);
    CHECK(crit.regularity_verdict.has_value());
    const Interpolant vol = Interpolant::volume(g, {4, 4, 1});
    CHECK_THROWS_AS(check_condition(s, vol, p, ConditionVariant::Sync), KindMismatchError);
}
