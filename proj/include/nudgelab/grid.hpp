#pragma once

#include <array>
#include <memory>
#include <vector>

#include "nudgelab/core.hpp"

namespace nudge {

enum class Geometry { Torus, Channel };

/// Basis of one field component along the wall-normal axis of the channel.
/// Periodic is used for every component on the torus.
enum class Parity { Periodic, Even, Odd };

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

/// Structured collocation grid with its spectral index set.
///
/// Torus: samples x_j = j L / n, real-to-complex storage with the last axis halved.
/// Channel (2D): periodic x (halved, axis 0) and wall-normal y on the midpoint grid
/// y_j = (j + 1/2)/n, coefficients indexed by n = 0..ny for cosine (Even) and sine (Odd) bases.
/// Coefficients are amplitudes: f(x) = sum_k f_k e^{i k.x} (times cos/sin in y for the channel).
class Grid {
public:
    static GridPtr torus(const std::vector<int>& resolution, const std::vector<double>& lengths);
    static GridPtr channel(int nx, int ny, double lx);
    ~Grid();

    Grid(const Grid&) = delete;
    Grid& operator=(const Grid&) = delete;

    int dim() const { return dim_; }
    Geometry geometry() const { return geometry_; }
    int resolution(int axis) const { return res_[axis]; }
    double length(int axis) const { return len_[axis]; }
    double spacing(int axis) const { return len_[axis] / res_[axis]; }
    int spectral_extent(int axis) const { return ext_[axis]; }
    /// Axis stored as a half spectrum (Hermitian-reduced).
    int half_axis() const { return half_axis_; }

    std::size_t physical_size() const { return nphys_; }
    std::size_t spectral_size() const { return nspec_; }
    double volume() const { return volume_; }
    double cell_volume() const { return volume_ / static_cast<double>(nphys_); }
    double lambda1() const { return lambda1_; }

    /// Coordinate of sample j along an axis.
    double coordinate(int axis, int j) const;

    /// Eigenvalue |k|^2 of each spectral slot.
    const RVec& k2() const { return k2_; }
    /// Wavenumber of each slot along an axis, zeroed on Nyquist slots (derivative use).
    const RVec& kderiv(int axis) const { return kderiv_[axis]; }
    /// Signed integer wavevector component of each slot along an axis.
    const std::vector<int>& kint(int axis) const { return kint_[axis]; }
    /// Parseval weight: sum over slots of weight * |f_k|^2 equals the L2 norm squared.
    const RVec& weight() const { return weight_; }
    /// 1 for slots kept by the two-thirds rule, 0 otherwise.
    const RVec& dealias() const { return dealias_; }

    std::size_t flat_index(const std::array<int, 3>& idx) const;
    std::array<int, 3> multi_index(std::size_t flat) const;
    /// Slot holding the conjugate partner of a slot, or the slot itself.
    std::size_t mirror(std::size_t flat) const;
    /// True for slots whose value must equal the conjugate of their mirror.
    bool self_conjugate_plane(std::size_t flat) const;

    void forward(const double* phys, cplx* spec, Parity parity) const;
    void inverse(const cplx* spec, double* phys, Parity parity) const;

    bool same_as(const Grid& other) const;

private:
    Grid() = default;
    void build_tables();
    void build_plans();

    int dim_ = 0;
    Geometry geometry_ = Geometry::Torus;
    std::array<int, 3> res_{1, 1, 1};
    std::array<double, 3> len_{1.0, 1.0, 1.0};
    std::array<int, 3> ext_{1, 1, 1};
    int half_axis_ = 0;
    std::size_t nphys_ = 0;
    std::size_t nspec_ = 0;
    double volume_ = 0.0;
    double lambda1_ = 0.0;

    RVec k2_;
    std::array<RVec, 3> kderiv_;
    std::array<std::vector<int>, 3> kint_;
    RVec weight_;
    RVec dealias_;

    struct Plans;
    std::unique_ptr<Plans> plans_;
};

}  // namespace nudge
