#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "nudgelab/estimates.hpp"
#include "nudgelab/interpolant.hpp"
#include "nudgelab/operators.hpp"
#include "nudgelab/random_fields.hpp"

using namespace nudge;

namespace {

const double kDeskL = std::sqrt(2.0) / 4.0;

GridPtr desk(int n = 128) { return Grid::torus({n, n}, {kDeskL, kDeskL}); }

SpectralField minus(const SpectralField& a, const SpectralField& b) {
    SpectralField d = a;
    for (std::size_t i = 0; i < d.raw().size(); ++i) d.raw()[i] -= b.raw()[i];
    return d;
}

}  // namespace

TEST_CASE("modal interpolant is the orthogonal projection onto the lowest modes") {
    auto g = desk(64);
    const Interpolant ip = Interpolant::modal(g, 8);
    CHECK(ip.lambda_N() == doctest::Approx(2.0 * g->lambda1()).epsilon(1e-12));
    CHECK(ip.h() == doctest::Approx(1.0 / std::sqrt(ip.lambda_N())).epsilon(1e-14));
    double kept_max = 0.0, dropped_min = 1e300;
    for (std::size_t s = 0; s < g->spectral_size(); ++s) {
        if (g->k2()[s] == 0.0) continue;
        if (ip.modal_mask()[s] > 0) kept_max = std::max(kept_max, g->k2()[s]);
        else dropped_min = std::min(dropped_min, g->k2()[s]);
    }
    CHECK(kept_max <= dropped_min * (1 + 1e-12));
    RandomSpectrum spec;
    spec.kmax = 10;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const SpectralField v = random_velocity(g, seed, spec);
        const SpectralField pv = apply(v, ip);
        CHECK(l2_norm(pv) <= l2_norm(v) * (1 + 1e-12));
        CHECK(l2_norm(minus(apply(pv, ip), pv)) < 1e-14 * l2_norm(v));
        CHECK(std::abs(inner(minus(v, pv), pv)) < 1e-13 * inner(v, v));
        CHECK(l2_norm(minus(v, pv)) <= ip.h() * h1_norm(v) * (1 + 1e-12));
    }
}

TEST_CASE("volume observations are cell means") {
    auto g = Grid::torus({32, 16}, {1.0, 0.5});
    const Interpolant ip = Interpolant::volume(g, {4, 8, 1});
    RandomSpectrum spec;
    spec.kmax = 6;
    const SpectralField v = random_velocity(g, 3, spec);
    const PhysicalField pv = to_physical(v);
    const Observation o = observe(v, ip, 0.25);
    CHECK(o.t == 0.25);
    REQUIRE(o.payload.size() == 2u * 32);
    const double dx = 1.0 / 32, dy = 0.5 / 16, sx = 0.25, sy = 0.5 / 8;
    std::vector<double> sum(2 * 32, 0.0);
    std::vector<int> cnt(32, 0);
    for (int i = 0; i < 32; ++i)
        for (int j = 0; j < 16; ++j) {
            // cells start half a spacing before the first sample
            const int ci = static_cast<int>(std::floor((i * dx + 0.5 * dx) / sx)) % 4;
            const int cj = static_cast<int>(std::floor((j * dy + 0.5 * dy) / sy)) % 8;
            const int a = ci * 8 + cj;
            ++cnt[a];
            for (int c = 0; c < 2; ++c) sum[c * 32 + a] += pv.data(c)[i * 16 + j];
        }
    double worst = 0.0;
    for (int c = 0; c < 2; ++c)
        for (int a = 0; a < 32; ++a) {
            const auto idx = ip.partition().cell_index(a);
            const int oracle = idx[0] * 8 + idx[1];
            worst = std::max(worst, std::abs(sum[c * 32 + oracle] / cnt[oracle] - o.payload[c * 32 + a]));
        }
    CHECK(worst < 1e-13);
    const PhysicalField rec = to_physical(reconstruct(o, ip, FieldKind::Velocity));
    double pw = 0.0;
    for (int i = 0; i < 32; ++i)
        for (int j = 0; j < 16; ++j) {
            const std::size_t a = ip.partition().cell_of_sample({i, j, 0});
            pw = std::max(pw, std::abs(rec.data(0)[i * 16 + j] - o.payload[a]));
        }
    CHECK(pw < 1e-12);
}

TEST_CASE("desk cell diameters") {
    auto g = desk(64);
    CHECK(Interpolant::volume_h(g, 0.25, false).partition().cells[0] == 2);
    CHECK(Interpolant::volume_h(g, 0.125, true).partition().cells[0] == 4);
    CHECK(Interpolant::volume_h(g, 1.0 / 16, false).h() == doctest::Approx(1.0 / 16).epsilon(1e-14));
    CHECK_THROWS_AS(Interpolant::volume_h(g, 0.3, false), DomainError);
}

TEST_CASE("smoothed volume reproduces constants and has unit kernel mass") {
    auto g = Grid::torus({64, 64}, {1.0, 1.0});
    const Interpolant ip = Interpolant::smoothed_volume(g, {4, 4, 1});
    double mass = 0.0;
    for (const auto& tap : ip.kernel_taps()) mass += tap.w;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-13));
    Observation o;
    o.kind = InterpolantKind::SmoothedVolume;
    o.components = 1;
    o.payload.assign(16, 0.75);
    const PhysicalField rec = to_physical(reconstruct(o, ip, FieldKind::Scalar));
    double worst = 0.0;
    for (double x : rec.values) worst = std::max(worst, std::abs(x - 0.75));
    CHECK(worst < 1e-12);
}

TEST_CASE("mollifier has unit mass in one, two and three dimensions") {
    using boost::math::quadrature::gauss_kronrod;
    const double eps = 0.3;
    const double pi = std::numbers::pi;
    const double m1 = 2.0 * gauss_kronrod<double, 61>::integrate([&](double r) { return mollifier_rho(r, eps, 1); }, 0.0, eps);
    const double m2 = gauss_kronrod<double, 61>::integrate([&](double r) { return 2 * pi * r * mollifier_rho(r, eps, 2); }, 0.0, eps);
    const double m3 =
        gauss_kronrod<double, 61>::integrate([&](double r) { return 4 * pi * r * r * mollifier_rho(r, eps, 3); }, 0.0, eps);
    CHECK(m1 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(m2 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(m3 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(mollifier_rho(eps, eps, 2) == 0.0);
    CHECK(mollifier_gradient_constant(2) > 0.0);
}

TEST_CASE("type-I constants on a small sweep") {
    auto g = desk(64);
    const Type1Constants m = estimate_type1_constants(Interpolant::modal(g, 8), 10, 5);
    CHECK(m.c_bound <= 1.0 + 1e-10);
    CHECK(m.c_approx <= 1.0 + 1e-10);
    const Type1Constants v = estimate_type1_constants(Interpolant::volume(g, {4, 4, 1}), 10, 5);
    CHECK(v.c_bound <= 1.0 + 1e-10);
    CHECK(v.samples_used == 10);
}

TEST_CASE("observation preconditions") {
    auto g = desk(32);
    const Interpolant modal = Interpolant::modal(g, 4);
    const Interpolant vol = Interpolant::volume(g, {2, 2, 1});
    const SpectralField v = SpectralField::velocity(g);
    const Observation o = observe(v, vol);
    CHECK_THROWS_AS(reconstruct(o, modal), KindMismatchError);
    Observation bad = o;
    bad.payload.pop_back();
    CHECK_THROWS_AS(reconstruct(bad, vol), ShapeError);
    CHECK_THROWS_AS(Interpolant::modal(g, 0), DomainError);
    CHECK_THROWS_AS(Interpolant::volume(g, {3, 2, 1}), DomainError);
    CHECK_THROWS_AS(observe(SpectralField::velocity(desk(16)), vol), ShapeError);
    CHECK_THROWS_AS(interpolant_kind_from_string("nearest"), ConfigError);
}
