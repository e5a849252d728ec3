#pragma once

#include <cstdint>

#include "nudgelab/spectral_field.hpp"

namespace nudge {

/// Spectrum of seeded random fields, in integer wavevector units.
struct RandomSpectrum {
    double kmax = 8.0;     ///< band limit on |m|
    double energy = 1.0;   ///< target |f|^2
    double center = 0.0;   ///< peak of a Gaussian shell; <= 0 gives a 1/(1+|m|^2) decay
    double width = 1.0;    ///< shell width when center > 0
};

/// Real, zero-mean, divergence-free velocity band-limited to |m| <= kmax with |u|^2 = energy.
SpectralField random_velocity(const GridPtr& grid, std::uint64_t seed, const RandomSpectrum& spec);
/// Real, zero-mean scalar field band-limited to |m| <= kmax with |f|^2 = energy.
SpectralField random_scalar(const GridPtr& grid, std::uint64_t seed, const RandomSpectrum& spec,
                            FieldKind kind = FieldKind::Temperature);
/// Unconstrained real vector field (not projected), zero mean.
SpectralField random_vector(const GridPtr& grid, std::uint64_t seed, const RandomSpectrum& spec);

}  // namespace nudge
