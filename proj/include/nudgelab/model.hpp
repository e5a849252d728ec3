#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <string>

#include "nudgelab/interpolant.hpp"
#include "nudgelab/operators.hpp"

namespace nudge {

enum class Model { Boussinesq, NavierStokes };

std::string to_string(Model m);
Model model_from_string(const std::string& s);

/// Physical and analytic constants of one run.
struct Params {
    Model model = Model::Boussinesq;
    double nu = 1e-2;
    double kappa = 1e-2;
    /// Time-independent solenoidal body force; empty means zero. Used in NavierStokes mode only.
    SpectralField f;
    double c_interp = 1.0;
    double C_sob = 1.0;
    /// Constant C of the volume form of M_h; unset means c_interp^2.
    std::optional<double> C_cell;
    double volume_constant() const { return C_cell ? *C_cell : c_interp * c_interp; }
    /// Test switches for the linear oracles.
    bool advection = true;
    bool coupling = true;

    /// Throws DomainError on non-positive diffusivities or a divergent force.
    void validate() const;
    double force_norm() const;
};

/// Explicit terms of the previous step for Adams-Bashforth.
struct Ab2History {
    SpectralField nl_u;
    SpectralField nl_theta;
    double dt = 0.0;
    bool valid = false;
};

struct FlowState {
    SpectralField u;
    SpectralField theta;
    double t = 0.0;
    Ab2History history;

    static FlowState zero(const GridPtr& grid);
};

struct NudgedState {
    SpectralField w;
    SpectralField eta;
    double t = 0.0;
    Ab2History history;

    static NudgedState zero(const GridPtr& grid);
};

/// Additive observation noise delta(t) = amplitude * exp(-t / decay_time) * d, d a fixed unit direction.
struct Perturbation {
    double amplitude = 0.0;
    double decay_time = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 17;

    bool enabled() const { return amplitude != 0.0; }
    double envelope(double t) const;
};

struct NudgingConfig {
    double mu = 0.0;
    std::shared_ptr<const Interpolant> interpolant;
    double dt = 1e-3;
    Perturbation perturbation;

    /// mu >= 0, dt > 0, mu * dt <= 0.5.
    void validate() const;
};

/// IMEX stepper: Crank-Nicolson on the diffusion (and modal nudging), Adams-Bashforth 2 on the rest.
class Integrator {
public:
    Integrator(GridPtr grid, Params params);

    const Params& params() const { return params_; }
    const Grid& grid() const { return *grid_; }

    /// Largest dt with advective CFL <= 0.5 for the given velocity.
    double cfl_dt(const SpectralField& u);

    void step_reference(FlowState& s, double dt);
    /// Nudged step. For Modal the term is implicit and uses the average of obs_now and obs_next;
    /// otherwise obs_now enters the explicit terms. mu == 0 takes exactly the reference path.
    void step_nudged(NudgedState& s, const Observation& obs_now, const Observation& obs_next, const NudgingConfig& cfg);

private:
    struct Nudge {
        const Interpolant* ip;
        const Observation* now;
        const Observation* next;
        double mu;
    };
    void advance(SpectralField& u, SpectralField& theta, Ab2History& hist, double& t, double dt, const Nudge* nudge);

    GridPtr grid_;
    Params params_;
    AdvectionWorkspace ws_;
    SpectralField nl_u_;
    SpectralField nl_theta_;
    /// Torus mean slot; the mean-free spaces exclude it.
    std::optional<std::size_t> mean_slot_;
    double dx_min_ = 0.0;
};

FlowState step_reference(const FlowState& s, const Params& p, double dt);
NudgedState step_nudged(const NudgedState& s, const Observation& obs, const NudgingConfig& cfg, const Params& p);

}  // namespace nudge
