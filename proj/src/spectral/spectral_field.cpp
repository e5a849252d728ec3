#include "nudgelab/spectral_field.hpp"

#include <algorithm>
#include <cmath>

namespace nudge {

Parity component_parity(const Grid& grid, FieldKind kind, int comp) {
    if (grid.geometry() == Geometry::Torus) return Parity::Periodic;
    switch (kind) {
        case FieldKind::Velocity: return comp == 1 ? Parity::Odd : Parity::Even;
        case FieldKind::Temperature: return Parity::Odd;
        case FieldKind::Scalar: return Parity::Even;
    }
    return Parity::Even;
}

SpectralField::SpectralField(GridPtr grid, int components, FieldKind kind)
    : grid_(std::move(grid)), ncomp_(components), kind_(kind) {
    if (!grid_) throw ShapeError("field requires a grid");
    if (components < 1) throw ShapeError("field needs at least one component");
    if (kind == FieldKind::Velocity && components != grid_->dim())
        throw ShapeError("velocity field needs one component per axis");
    coeffs_.assign(grid_->spectral_size() * static_cast<std::size_t>(components), cplx(0.0, 0.0));
}

Parity SpectralField::parity(int comp) const { return component_parity(*grid_, kind_, comp); }

void SpectralField::set_zero() { std::fill(coeffs_.begin(), coeffs_.end(), cplx(0.0, 0.0)); }

bool SpectralField::compatible(const SpectralField& o) const {
    return grid_ && o.grid_ && grid_->same_as(*o.grid_) && ncomp_ == o.ncomp_;
}

SpectralField to_spectral(const PhysicalField& field, FieldKind kind) {
    if (!field.grid) throw ShapeError("physical field has no grid");
    if (field.values.size() != field.grid->physical_size() * static_cast<std::size_t>(field.components))
        throw ShapeError("sample count does not match grid resolution");
    SpectralField out(field.grid, field.components, kind);
    for (int c = 0; c < field.components; ++c) field.grid->forward(field.data(c), out.data(c), out.parity(c));
    return out;
}

SpectralField to_spectral(const std::vector<double>& samples, const GridPtr& grid, int components, FieldKind kind) {
    if (samples.size() != grid->physical_size() * static_cast<std::size_t>(components))
        throw ShapeError("sample count " + std::to_string(samples.size()) + " does not match grid resolution");
    PhysicalField p(grid, components);
    std::copy(samples.begin(), samples.end(), p.values.begin());
    return to_spectral(p, kind);
}

double hermitian_defect(const SpectralField& f) {
    const Grid& g = f.grid();
    double scale = 0.0, defect = 0.0;
    for (int c = 0; c < f.components(); ++c) {
        const cplx* d = f.data(c);
        for (std::size_t i = 0; i < g.spectral_size(); ++i) {
            scale = std::max(scale, std::abs(d[i]));
            if (!g.self_conjugate_plane(i)) continue;
            defect = std::max(defect, std::abs(d[i] - std::conj(d[g.mirror(i)])));
        }
    }
    return scale > 0.0 ? defect / scale : 0.0;
}

void enforce_hermitian(SpectralField& f) {
    const Grid& g = f.grid();
    for (int c = 0; c < f.components(); ++c) {
        cplx* d = f.data(c);
        for (std::size_t i = 0; i < g.spectral_size(); ++i) {
            if (!g.self_conjugate_plane(i)) continue;
            const std::size_t j = g.mirror(i);
            if (j < i) continue;
            const cplx avg = 0.5 * (d[i] + std::conj(d[j]));
            d[i] = avg;
            d[j] = std::conj(avg);
        }
    }
}

PhysicalField to_physical(const SpectralField& f) {
    if (f.empty()) throw ShapeError("empty field");
    if (hermitian_defect(f) > 1e-10) throw SymmetryError("coefficients are not Hermitian-symmetric");
    PhysicalField out(f.grid_ptr(), f.components());
    for (int c = 0; c < f.components(); ++c) f.grid().inverse(f.data(c), out.data(c), f.parity(c));
    return out;
}

}  // namespace nudge
