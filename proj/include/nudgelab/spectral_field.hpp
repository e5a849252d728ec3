#pragma once

#include "nudgelab/grid.hpp"

namespace nudge {

/// What a field represents; fixes the channel basis of each component.
enum class FieldKind { Velocity, Temperature, Scalar };

/// Spectral coefficients of a scalar or vector field, stored component-major.
class SpectralField {
public:
    SpectralField() = default;
    SpectralField(GridPtr grid, int components, FieldKind kind);

    static SpectralField velocity(GridPtr grid) { return {grid, grid->dim(), FieldKind::Velocity}; }
    static SpectralField scalar(GridPtr grid, FieldKind kind = FieldKind::Temperature) { return {grid, 1, kind}; }

    const Grid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    int components() const { return ncomp_; }
    FieldKind kind() const { return kind_; }
    Parity parity(int comp) const;
    bool empty() const { return !grid_; }

    std::size_t size() const { return grid_->spectral_size(); }
    cplx* data(int comp) { return coeffs_.data() + static_cast<std::size_t>(comp) * size(); }
    const cplx* data(int comp) const { return coeffs_.data() + static_cast<std::size_t>(comp) * size(); }
    CVec& raw() { return coeffs_; }
    const CVec& raw() const { return coeffs_; }

    void set_zero();
    bool compatible(const SpectralField& o) const;

private:
    GridPtr grid_;
    int ncomp_ = 0;
    FieldKind kind_ = FieldKind::Scalar;
    CVec coeffs_;
};

/// Collocation samples of a field, component-major, row-major within a component.
struct PhysicalField {
    GridPtr grid;
    int components = 0;
    RVec values;

    PhysicalField() = default;
    PhysicalField(GridPtr g, int ncomp) : grid(std::move(g)), components(ncomp), values(grid->physical_size() * ncomp, 0.0) {}
    double* data(int comp) { return values.data() + static_cast<std::size_t>(comp) * grid->physical_size(); }
    const double* data(int comp) const { return values.data() + static_cast<std::size_t>(comp) * grid->physical_size(); }
};

Parity component_parity(const Grid& grid, FieldKind kind, int comp);

SpectralField to_spectral(const PhysicalField& field, FieldKind kind);
/// Raw-array entry point; throws ShapeError when the sample count does not match the grid.
SpectralField to_spectral(const std::vector<double>& samples, const GridPtr& grid, int components, FieldKind kind);
/// Throws SymmetryError when the coefficients are not those of a real field.
PhysicalField to_physical(const SpectralField& f);

/// Largest violation of real-field Hermitian symmetry, relative to the largest coefficient.
double hermitian_defect(const SpectralField& f);
/// Averages each coefficient with the conjugate of its mirror so the field is real.
void enforce_hermitian(SpectralField& f);

}  // namespace nudge
