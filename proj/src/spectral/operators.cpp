#include "nudgelab/operators.hpp"

#include <cmath>

#include "nudgelab/kernels.hpp"

namespace nudge {

namespace {

void require_same_grid(const SpectralField& a, const SpectralField& b) {
    if (!a.grid().same_as(b.grid())) throw ShapeError("fields live on different grids");
}

Parity flipped(Parity p) { return p == Parity::Even ? Parity::Odd : Parity::Even; }

}  // namespace

double inner(const SpectralField& f, const SpectralField& g) {
    if (!f.compatible(g)) throw ShapeError("incompatible fields in inner product");
    const auto& K = kernels::active();
    const Grid& grid = f.grid();
    double s = 0.0;
    for (int c = 0; c < f.components(); ++c)
        s += K.inner(f.data(c), g.data(c), grid.weight().data(), nullptr, grid.spectral_size());
    return s;
}

double inner_h1(const SpectralField& f, const SpectralField& g) {
    if (!f.compatible(g)) throw ShapeError("incompatible fields in inner product");
    const auto& K = kernels::active();
    const Grid& grid = f.grid();
    double s = 0.0;
    for (int c = 0; c < f.components(); ++c)
        s += K.inner(f.data(c), g.data(c), grid.weight().data(), grid.k2().data(), grid.spectral_size());
    return s;
}

double l2_norm(const SpectralField& f) {
    const auto& K = kernels::active();
    const Grid& grid = f.grid();
    double s = 0.0;
    for (int c = 0; c < f.components(); ++c) s += K.norm2(f.data(c), grid.weight().data(), nullptr, grid.spectral_size());
    return std::sqrt(s);
}

double h1_norm(const SpectralField& f) {
    const auto& K = kernels::active();
    const Grid& grid = f.grid();
    double s = 0.0;
    for (int c = 0; c < f.components(); ++c)
        s += K.norm2(f.data(c), grid.weight().data(), grid.k2().data(), grid.spectral_size());
    return std::sqrt(s);
}

double lp_norm(const SpectralField& f, double p) {
    if (!(p >= 1.0)) throw DomainError("L^p norm requires p >= 1");
    const auto& K = kernels::active();
    PhysicalField phys = to_physical(f);
    const std::size_t n = f.grid().physical_size();
    RVec mag;
    const double* vals = phys.data(0);
    if (f.components() > 1) {
        mag.assign(n, 0.0);
        for (int c = 0; c < f.components(); ++c) {
            const double* d = phys.data(c);
            for (std::size_t i = 0; i < n; ++i) mag[i] += d[i] * d[i];
        }
        for (auto& m : mag) m = std::sqrt(m);
        vals = mag.data();
    }
    if (std::isinf(p)) return K.max_abs(vals, n);
    return std::pow(K.sum_abs_pow(vals, p, n) * f.grid().cell_volume(), 1.0 / p);
}

Norms norms(const SpectralField& f, double p) { return {l2_norm(f), h1_norm(f), lp_norm(f, p)}; }

void dealias(SpectralField& f) {
    const auto& K = kernels::active();
    for (int c = 0; c < f.components(); ++c)
        K.scale(f.data(c), f.data(c), f.grid().dealias().data(), f.grid().spectral_size());
}

void leray_project_inplace(SpectralField& v) {
    const Grid& g = v.grid();
    if (v.components() != g.dim()) throw TypeError("Leray projection needs a vector field");
    const auto& K = kernels::active();
    const std::size_t n = g.spectral_size();
    if (g.geometry() == Geometry::Torus) {
        cplx* u[3] = {v.data(0), v.data(1), g.dim() == 3 ? v.data(2) : nullptr};
        const double* k[3] = {g.kderiv(0).data(), g.kderiv(1).data(), g.dim() == 3 ? g.kderiv(2).data() : nullptr};
        K.leray_torus(u, k, g.dim(), n);
        return;
    }
    K.leray_channel(v.data(0), v.data(1), g.kderiv(0).data(), g.kderiv(1).data(), n);
    // the top sine mode has no cosine partner, so no solenoidal field contains it
    const int ny = g.resolution(1);
    for (int ix = 0; ix < g.spectral_extent(0); ++ix) {
        const std::size_t f = g.flat_index({ix, ny, 0});
        v.data(0)[f] = 0.0;
        v.data(1)[f] = 0.0;
    }
}

SpectralField leray_project(const SpectralField& v) {
    SpectralField out = v;
    leray_project_inplace(out);
    return out;
}

SpectralField apply_A(const SpectralField& f) {
    SpectralField out(f.grid_ptr(), f.components(), f.kind());
    const auto& K = kernels::active();
    for (int c = 0; c < f.components(); ++c)
        K.scale(out.data(c), f.data(c), f.grid().k2().data(), f.grid().spectral_size());
    return out;
}

void spectral_derivative(const Grid& g, const cplx* in, Parity p, int axis, cplx* out, Parity& out_p) {
    const auto& K = kernels::active();
    const std::size_t n = g.spectral_size();
    if (g.geometry() == Geometry::Channel && axis == 1) {
        // d/dy cos(n pi y) = -n pi sin(n pi y); d/dy sin(n pi y) = n pi cos(n pi y)
        K.scale(out, in, g.kderiv(1).data(), n);
        if (p == Parity::Even) K.axpby(out, out, -1.0, 0.0, n);
        out_p = flipped(p);
        return;
    }
    K.deriv(out, in, g.kderiv(axis).data(), 1.0, n);
    out_p = p;
}

SpectralField divergence(const SpectralField& u) {
    const Grid& g = u.grid();
    if (u.components() != g.dim()) throw TypeError("divergence needs a vector field");
    SpectralField out(u.grid_ptr(), 1, FieldKind::Scalar);
    CVec tmp(g.spectral_size());
    const auto& K = kernels::active();
    for (int a = 0; a < g.dim(); ++a) {
        Parity p;
        spectral_derivative(g, u.data(a), u.parity(a), a, tmp.data(), p);
        K.axpby(out.data(0), tmp.data(), 1.0, 1.0, g.spectral_size());
    }
    return out;
}

SpectralField gradient(const SpectralField& phi) {
    if (phi.components() != 1) throw TypeError("gradient needs a scalar field");
    const Grid& g = phi.grid();
    SpectralField out = SpectralField::velocity(phi.grid_ptr());
    for (int a = 0; a < g.dim(); ++a) {
        Parity p;
        spectral_derivative(g, phi.data(0), phi.parity(0), a, out.data(a), p);
    }
    return out;
}

double divergence_defect(const SpectralField& u) {
    const double ref = h1_norm(u);
    const double d = l2_norm(divergence(u));
    return ref > 0.0 ? d / ref : d;
}

AdvectionWorkspace::AdvectionWorkspace(GridPtr grid)
    : grid_(std::move(grid)),
      u_phys_(grid_, grid_->dim()),
      grad_(grid_, grid_->dim()),
      prod_(grid_->physical_size()),
      tmp_(grid_->spectral_size()),
      dv_(grid_->spectral_size()) {}

double AdvectionWorkspace::load_velocity(const SpectralField& u) {
    const auto& K = kernels::active();
    const Grid& g = *grid_;
    const std::size_t n = g.spectral_size();
    const std::size_t np = g.physical_size();
    for (int c = 0; c < g.dim(); ++c) {
        K.scale(tmp_.data(), u.data(c), g.dealias().data(), n);
        g.inverse(tmp_.data(), u_phys_.data(c), u.parity(c));
    }
    double vmax = 0.0;
    for (int c = 0; c < g.dim(); ++c) vmax = std::max(vmax, K.max_abs(u_phys_.data(c), np));
    return vmax;
}

void AdvectionWorkspace::advect(const SpectralField& v, SpectralField& out) {
    const auto& K = kernels::active();
    const Grid& g = *grid_;
    const std::size_t n = g.spectral_size();
    const std::size_t np = g.physical_size();
    const double* a[3];
    const double* b[3];
    for (int c = 0; c < v.components(); ++c) {
        K.scale(dv_.data(), v.data(c), g.dealias().data(), n);
        for (int ax = 0; ax < g.dim(); ++ax) {
            Parity p;
            spectral_derivative(g, dv_.data(), v.parity(c), ax, tmp_.data(), p);
            g.inverse(tmp_.data(), grad_.data(ax), p);
            a[ax] = u_phys_.data(ax);
            b[ax] = grad_.data(ax);
        }
        K.dot(prod_.data(), a, b, g.dim(), np);
        g.forward(prod_.data(), out.data(c), out.parity(c));
        K.scale(out.data(c), out.data(c), g.dealias().data(), n);
    }
}

SpectralField bilinear_B0(const SpectralField& u, const SpectralField& v) {
    require_same_grid(u, v);
    const Grid& g = u.grid();
    if (u.components() != g.dim() || v.components() != g.dim()) throw TypeError("B0 needs vector fields");
    if (divergence_defect(u) > 1e-10) throw PreconditionError("advecting velocity is not divergence-free");
    AdvectionWorkspace ws(u.grid_ptr());
    ws.load_velocity(u);
    SpectralField out = SpectralField::velocity(u.grid_ptr());
    ws.advect(v, out);
    leray_project_inplace(out);
    return out;
}

SpectralField bilinear_B1(const SpectralField& u, const SpectralField& theta) {
    require_same_grid(u, theta);
    const Grid& g = u.grid();
    if (u.components() != g.dim()) throw TypeError("B1 needs a vector advecting field");
    if (theta.components() != 1) throw TypeError("B1 transports a scalar field");
    if (divergence_defect(u) > 1e-10) throw PreconditionError("advecting velocity is not divergence-free");
    AdvectionWorkspace ws(u.grid_ptr());
    ws.load_velocity(u);
    SpectralField out(u.grid_ptr(), 1, theta.kind());
    ws.advect(theta, out);
    return out;
}

}  // namespace nudge
