#pragma once

#include <limits>

#include "nudgelab/spectral_field.hpp"

namespace nudge {

/// L2 inner product (f, g) summed over components.
double inner(const SpectralField& f, const SpectralField& g);
/// H1 seminorm inner product ((f, g)).
double inner_h1(const SpectralField& f, const SpectralField& g);

struct Norms {
    double l2 = 0.0;
    double h1 = 0.0;
    double lp = 0.0;
};

double l2_norm(const SpectralField& f);
double h1_norm(const SpectralField& f);
/// L^p norm of the pointwise magnitude by collocation quadrature; p = infinity gives the max.
/// Throws DomainError for p < 1.
double lp_norm(const SpectralField& f, double p);
Norms norms(const SpectralField& f, double p = 4.0);

/// Zeroes coefficients outside the two-thirds band.
void dealias(SpectralField& f);

/// Leray-Hopf projection; the mean mode is left untouched. Throws TypeError for scalar input.
SpectralField leray_project(const SpectralField& v);
void leray_project_inplace(SpectralField& v);

/// Modewise multiplication by the eigenvalue |k|^2.
SpectralField apply_A(const SpectralField& f);

/// Spectral derivative of one component along an axis (Nyquist slots zeroed); writes the result parity.
void spectral_derivative(const Grid& grid, const cplx* in, Parity in_parity, int axis, cplx* out, Parity& out_parity);
SpectralField divergence(const SpectralField& u);
/// Gradient of a scalar; the result is a velocity-kind field.
SpectralField gradient(const SpectralField& phi);
/// |div u| relative to ||u||.
double divergence_defect(const SpectralField& u);

/// Dealiased (u.grad) v followed by Leray projection; throws PreconditionError when u is not solenoidal.
SpectralField bilinear_B0(const SpectralField& u, const SpectralField& v);
/// Dealiased u.grad(theta).
SpectralField bilinear_B1(const SpectralField& u, const SpectralField& theta);

/// Reusable buffers for the pseudo-spectral products inside the time integrator.
class AdvectionWorkspace {
public:
    explicit AdvectionWorkspace(GridPtr grid);

    /// Loads the dealiased advecting velocity into physical space; returns max |u|.
    double load_velocity(const SpectralField& u);
    /// out = dealias((u.grad) v) for the velocity loaded last; vector results are not projected.
    void advect(const SpectralField& v, SpectralField& out);

private:
    GridPtr grid_;
    PhysicalField u_phys_;
    PhysicalField grad_;
    RVec prod_;
    CVec tmp_;
    CVec dv_;
};

}  // namespace nudge
