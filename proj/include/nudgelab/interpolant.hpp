#pragma once

#include <array>
#include <string>
#include <vector>

#include "nudgelab/spectral_field.hpp"

namespace nudge {

enum class InterpolantKind { Modal = 0, Volume = 1, SmoothedVolume = 2 };

std::string to_string(InterpolantKind k);
InterpolantKind interpolant_kind_from_string(const std::string& s);

/// Axis-aligned congruent cells covering the domain; each cell holds a block of collocation samples.
struct Partition {
    int dim = 0;
    std::array<int, 3> cells{1, 1, 1};
    std::array<int, 3> samples_per_cell{1, 1, 1};
    std::array<double, 3> side{0.0, 0.0, 0.0};
    /// Lower corner of cell 0 along each axis.
    std::array<double, 3> origin{0.0, 0.0, 0.0};
    double diameter = 0.0;
    double measure = 0.0;
    /// Cells touching a wall (channel only).
    std::vector<char> boundary;

    std::size_t count() const { return boundary.size(); }
    std::array<int, 3> cell_index(std::size_t alpha) const;
    std::size_t cell_of_sample(const std::array<int, 3>& sample) const;
};

/// Finite-rank observation operator I_h (Modal, Volume) or the mollified volume operator.
class Interpolant {
public:
    static Interpolant modal(GridPtr grid, int modes);
    static Interpolant volume(GridPtr grid, const std::array<int, 3>& cells);
    static Interpolant smoothed_volume(GridPtr grid, const std::array<int, 3>& cells);
    /// Uniform cubic-ish cells whose diameter equals h; throws DomainError when no partition matches.
    static Interpolant volume_h(GridPtr grid, double h, bool smoothed);

    InterpolantKind kind() const { return kind_; }
    const GridPtr& grid_ptr() const { return grid_; }
    const Grid& grid() const { return *grid_; }
    /// Resolution length: cell diameter, or lambda_N^{-1/2} for Modal.
    double h() const { return h_; }
    /// Number of real values observed per field component.
    std::size_t rank() const;

    // Modal
    int requested_modes() const { return requested_; }
    int realized_modes() const { return realized_; }
    double lambda_N() const { return lambda_n_; }
    /// Representative slots in selection order.
    const std::vector<std::size_t>& modal_slots() const { return slots_; }
    /// 1 on every retained slot (representatives and their conjugate slots).
    const RVec& modal_mask() const { return mask_; }

    // Volume / SmoothedVolume
    const Partition& partition() const { return partition_; }
    double epsilon() const { return epsilon_; }
    /// Discrete mollifier weights at offsets within epsilon (unit discrete mass).
    struct KernelTap {
        int di, dj, dk;
        double w;
    };
    const std::vector<KernelTap>& kernel_taps() const { return taps_; }

    /// Per-sample mask of the (strip-shrunk) cell indicator used before mollification.
    const std::vector<char>& support_mask() const { return support_; }

private:
    Interpolant() = default;
    void build_volume(const std::array<int, 3>& cells, bool smoothed);

    InterpolantKind kind_ = InterpolantKind::Modal;
    GridPtr grid_;
    double h_ = 0.0;
    int requested_ = 0;
    int realized_ = 0;
    double lambda_n_ = 0.0;
    std::vector<std::size_t> slots_;
    RVec mask_;
    Partition partition_;
    double epsilon_ = 0.0;
    std::vector<KernelTap> taps_;
    RVec kernel_hat_;
    std::vector<char> support_;

    friend SpectralField reconstruct(const struct Observation&, const Interpolant&, FieldKind);
};

/// Observed data: retained coefficients (re, im per slot) or cell averages, component-major.
struct Observation {
    InterpolantKind kind = InterpolantKind::Modal;
    double t = 0.0;
    int components = 0;
    std::vector<double> payload;
};

Observation observe(const SpectralField& f, const Interpolant& ip, double t = 0.0);
SpectralField reconstruct(const Observation& obs, const Interpolant& ip, FieldKind kind = FieldKind::Velocity);
SpectralField apply(const SpectralField& f, const Interpolant& ip);

/// Sum over cells and components of |v_alpha|^2 for a volume observation.
double cell_energy(const Observation& obs);

/// rho_eps(r) = eps^{-d} rho(r/eps) with rho radial and unit mass in d dimensions.
double mollifier_rho(double r, double epsilon, int dim);
/// Normalization constant K0 of the unscaled mollifier in d dimensions.
double mollifier_K0(int dim);
/// sum_i ||d rho / d x_i||_inf^2 for the unscaled mollifier.
double mollifier_gradient_constant(int dim);

}  // namespace nudge
