#pragma once

#include <cstdint>

#include "nudgelab/interpolant.hpp"

namespace nudge {

struct Type1Constants {
    double c_bound = 0.0;   ///< max |I_h v| / |v|
    double c_approx = 0.0;  ///< max |I_h v - v| / (h ||v||)
    int samples_used = 0;
};

/// Random band-limited solenoidal fields; each sample peaks at a log-uniform wavenumber shell.
Type1Constants estimate_type1_constants(const Interpolant& ip, int n_samples, std::uint64_t seed);

struct GradientBoundReport {
    /// max ||I~ v||^2 / (h K_rho^2 sum |v_alpha|^2)
    double ratio_h = 0.0;
    /// max ||I~ v||^2 / (|Q| h^-2 K_rho^2 sum |v_alpha|^2), the cell-measure form of the same bound
    double ratio_cell = 0.0;
    /// max ||I~ v||^2 / ||v||^2
    double ratio_h1 = 0.0;
    double k_rho2 = 0.0;
    int samples_used = 0;
};

GradientBoundReport smoothed_gradient_bound_check(const Interpolant& ip, int n_samples, std::uint64_t seed);
/// Same ratios for cell data v_alpha = e_alpha (single unit cell average, one component).
GradientBoundReport smoothed_gradient_single_cell(const Interpolant& ip, std::size_t alpha);

}  // namespace nudge
