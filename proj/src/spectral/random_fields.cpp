#include "nudgelab/random_fields.hpp"

#include <cmath>
#include <random>

#include "nudgelab/operators.hpp"

namespace nudge {

namespace {

double shape(double m, const RandomSpectrum& spec) {
    if (spec.center > 0.0) {
        const double z = (m - spec.center) / spec.width;
        return std::exp(-0.5 * z * z);
    }
    return 1.0 / (1.0 + m * m);
}

void fill(SpectralField& f, std::uint64_t seed, const RandomSpectrum& spec) {
    const Grid& g = f.grid();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int c = 0; c < f.components(); ++c) {
        cplx* d = f.data(c);
        const Parity par = f.parity(c);
        for (std::size_t i = 0; i < g.spectral_size(); ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            double m2 = 0.0;
            for (int a = 0; a < g.dim(); ++a) m2 += double(g.kint(a)[i]) * g.kint(a)[i];
            const double m = std::sqrt(m2);
            const int iy = g.geometry() == Geometry::Channel ? g.kint(1)[i] : -1;
            bool zero = (m > spec.kmax) || m2 == 0.0 || g.dealias()[i] == 0.0;
            if (par == Parity::Odd && iy == 0) zero = true;
            if (par == Parity::Even && iy == g.resolution(1)) zero = true;
            d[i] = zero ? cplx(0.0, 0.0) : shape(m, spec) * cplx(re, im);
        }
    }
    enforce_hermitian(f);
}

void normalize(SpectralField& f, double energy) {
    const double e = inner(f, f);
    if (e <= 0.0) return;
    const double s = std::sqrt(energy / e);
    for (auto& z : f.raw()) z *= s;
}

void zero_mean(SpectralField& f) {
    for (int c = 0; c < f.components(); ++c) f.data(c)[0] = 0.0;
}

}  // namespace

SpectralField random_velocity(const GridPtr& grid, std::uint64_t seed, const RandomSpectrum& spec) {
    SpectralField u = SpectralField::velocity(grid);
    fill(u, seed, spec);
    leray_project_inplace(u);
    zero_mean(u);
    normalize(u, spec.energy);
    return u;
}

SpectralField random_vector(const GridPtr& grid, std::uint64_t seed, const RandomSpectrum& spec) {
    SpectralField u = SpectralField::velocity(grid);
    fill(u, seed, spec);
    zero_mean(u);
    normalize(u, spec.energy);
    return u;
}

SpectralField random_scalar(const GridPtr& grid, std::uint64_t seed, const RandomSpectrum& spec, FieldKind kind) {
    SpectralField f(grid, 1, kind);
    fill(f, seed, spec);
    zero_mean(f);
    normalize(f, spec.energy);
    return f;
}

}  // namespace nudge
