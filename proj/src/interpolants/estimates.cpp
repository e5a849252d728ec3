#include "nudgelab/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "nudgelab/operators.hpp"
#include "nudgelab/random_fields.hpp"

namespace nudge {

namespace {

RandomSpectrum sample_spectrum(std::mt19937_64& rng, const Grid& g) {
    const double kmax = g.resolution(0) / 8.0;
    std::uniform_real_distribution<double> u(0.0, std::log(kmax));
    RandomSpectrum s;
    s.kmax = kmax;
    s.center = std::exp(u(rng));
    s.width = std::max(0.5, s.center / 4.0);
    s.energy = 1.0;
    return s;
}

void require_smoothed(const Interpolant& ip) {
    if (ip.kind() != InterpolantKind::SmoothedVolume)
        throw TypeError("gradient bound check needs the smoothed volume interpolant");
}

}  // namespace

Type1Constants estimate_type1_constants(const Interpolant& ip, int n_samples, std::uint64_t seed) {
    if (n_samples < 10) throw DomainError("at least 10 samples are required");
    std::mt19937_64 rng(seed);
    Type1Constants out;
    for (int s = 0; s < n_samples; ++s) {
        const RandomSpectrum spec = sample_spectrum(rng, ip.grid());
        const SpectralField v = random_velocity(ip.grid_ptr(), rng(), spec);
        const double l2 = l2_norm(v), h1 = h1_norm(v);
        if (l2 == 0.0 || h1 == 0.0) continue;
        SpectralField iv = apply(v, ip);
        const double bound = l2_norm(iv) / l2;
        for (std::size_t i = 0; i < iv.raw().size(); ++i) iv.raw()[i] -= v.raw()[i];
        const double approx = l2_norm(iv) / (ip.h() * h1);
        out.c_bound = std::max(out.c_bound, bound);
        out.c_approx = std::max(out.c_approx, approx);
        ++out.samples_used;
    }
    if (out.samples_used == 0) throw SamplingError("every random sample was degenerate");
    return out;
}

GradientBoundReport smoothed_gradient_bound_check(const Interpolant& ip, int n_samples, std::uint64_t seed) {
    require_smoothed(ip);
    GradientBoundReport rep;
    rep.k_rho2 = mollifier_gradient_constant(ip.grid().dim());
    const double h = ip.h();
    const double cell_scale = ip.partition().measure / (h * h);
    std::mt19937_64 rng(seed);
    for (int s = 0; s < n_samples; ++s) {
        const RandomSpectrum spec = sample_spectrum(rng, ip.grid());
        const SpectralField v = random_velocity(ip.grid_ptr(), rng(), spec);
        const Observation obs = observe(v, ip);
        const double e = cell_energy(obs);
        const double hv = h1_norm(v);
        if (e == 0.0 || hv == 0.0) continue;
        const double g2 = std::pow(h1_norm(reconstruct(obs, ip)), 2);
        rep.ratio_h = std::max(rep.ratio_h, g2 / (h * rep.k_rho2 * e));
        rep.ratio_cell = std::max(rep.ratio_cell, g2 / (cell_scale * rep.k_rho2 * e));
        rep.ratio_h1 = std::max(rep.ratio_h1, g2 / (hv * hv));
        ++rep.samples_used;
    }
    return rep;
}

GradientBoundReport smoothed_gradient_single_cell(const Interpolant& ip, std::size_t alpha) {
    require_smoothed(ip);
    GradientBoundReport rep;
    rep.k_rho2 = mollifier_gradient_constant(ip.grid().dim());
    Observation obs;
    obs.kind = ip.kind();
    obs.components = 1;
    obs.payload.assign(ip.rank(), 0.0);
    obs.payload.at(alpha) = 1.0;
    const double g2 = std::pow(h1_norm(reconstruct(obs, ip, FieldKind::Scalar)), 2);
    const double h = ip.h();
    rep.ratio_h = g2 / (h * rep.k_rho2);
    rep.ratio_cell = g2 / (ip.partition().measure / (h * h) * rep.k_rho2);
    rep.samples_used = 1;
    return rep;
}

}  // namespace nudge
