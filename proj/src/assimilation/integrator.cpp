#include "nudgelab/model.hpp"

#include <algorithm>
#include <cmath>

#include "nudgelab/kernels.hpp"

namespace nudge {

std::string to_string(Model m) { return m == Model::Boussinesq ? "boussinesq" : "nse"; }

Model model_from_string(const std::string& s) {
    if (s == "boussinesq") return Model::Boussinesq;
    if (s == "nse" || s == "navier_stokes") return Model::NavierStokes;
    throw ConfigError("unknown model '" + s + "'");
}

void Params::validate() const {
    if (!(nu > 0.0)) throw DomainError("nu must be positive");
    if (model == Model::Boussinesq && !(kappa > 0.0)) throw DomainError("kappa must be positive");
    if (!(c_interp > 0.0) || !(C_sob > 0.0) || (C_cell && !(*C_cell > 0.0))) throw DomainError("analytic constants must be positive");
    if (!f.empty()) {
        if (f.components() != f.grid().dim()) throw TypeError("force must be a vector field");
        if (l2_norm(f) > 0.0 && divergence_defect(f) > 1e-10) throw DomainError("force must be divergence-free");
    }
}

double Params::force_norm() const { return f.empty() ? 0.0 : l2_norm(f); }

FlowState FlowState::zero(const GridPtr& grid) {
    FlowState s;
    s.u = SpectralField::velocity(grid);
    s.theta = SpectralField::scalar(grid, FieldKind::Temperature);
    return s;
}

NudgedState NudgedState::zero(const GridPtr& grid) {
    NudgedState s;
    s.w = SpectralField::velocity(grid);
    s.eta = SpectralField::scalar(grid, FieldKind::Temperature);
    return s;
}

double Perturbation::envelope(double t) const {
    if (!enabled()) return 0.0;
    if (std::isinf(decay_time)) return amplitude;
    return amplitude * std::exp(-t / decay_time);
}

void NudgingConfig::validate() const {
    if (!interpolant) throw MissingInputError("nudging needs an interpolant");
    if (!(dt > 0.0)) throw DomainError("dt must be positive");
    if (!(mu >= 0.0)) throw DomainError("mu must be nonnegative");
    if (mu * dt > 0.5) throw StabilityError("mu*dt exceeds 0.5", 0.5 / mu);
}

namespace {

bool finite_field(const SpectralField& f) {
    const double e = kernels::active().norm2(f.raw().data(), f.grid().weight().data(), nullptr, f.size());
    double acc = e;
    for (int c = 1; c < f.components(); ++c)
        acc += kernels::active().norm2(f.data(c), f.grid().weight().data(), nullptr, f.size());
    return std::isfinite(acc) && acc < 1e200;
}

}  // namespace

Integrator::Integrator(GridPtr grid, Params params)
    : grid_(std::move(grid)),
      params_(std::move(params)),
      ws_(grid_),
      nl_u_(SpectralField::velocity(grid_)),
      nl_theta_(SpectralField::scalar(grid_, FieldKind::Temperature)) {
    params_.validate();
    dx_min_ = grid_->geometry() == Geometry::Channel ? 1.0 / grid_->resolution(1) : grid_->spacing(0);
    for (int a = 0; a < grid_->dim(); ++a) dx_min_ = std::min(dx_min_, grid_->spacing(a));
    if (grid_->geometry() == Geometry::Torus)
        for (std::size_t i = 0; i < grid_->spectral_size(); ++i)
            if (grid_->k2()[i] == 0.0) mean_slot_ = i;
}

double Integrator::cfl_dt(const SpectralField& u) {
    const double vmax = ws_.load_velocity(u);
    return vmax > 0.0 ? 0.5 * dx_min_ / vmax : std::numeric_limits<double>::infinity();
}

void Integrator::advance(SpectralField& u, SpectralField& theta, Ab2History& hist, double& t, double dt,
                         const Nudge* nudge) {
    if (!(dt > 0.0)) throw DomainError("dt must be positive");
    const auto& K = kernels::active();
    const Grid& g = *grid_;
    const std::size_t n = g.spectral_size();
    const int dim = g.dim();
    const bool bous = params_.model == Model::Boussinesq;

    const double vmax = ws_.load_velocity(u);
    if (vmax * dt > 0.5 * dx_min_) throw StabilityError("advective CFL exceeds 0.5", 0.4 * dx_min_ / vmax);

    if (params_.advection) {
        ws_.advect(u, nl_u_);
        for (auto& z : nl_u_.raw()) z = -z;
    } else {
        nl_u_.set_zero();
    }
    if (bous && params_.coupling) K.axpby(nl_u_.data(dim - 1), theta.data(0), 1.0, 1.0, n);
    if (!bous && !params_.f.empty()) K.axpby(nl_u_.raw().data(), params_.f.raw().data(), 1.0, 1.0, nl_u_.raw().size());

    const bool modal = nudge && nudge->ip->kind() == InterpolantKind::Modal;
    SpectralField obs_sum;
    if (nudge && !modal) {
        Observation diff = observe(u, *nudge->ip, t);
        for (std::size_t i = 0; i < diff.payload.size(); ++i) diff.payload[i] = nudge->now->payload[i] - diff.payload[i];
        const SpectralField r = reconstruct(diff, *nudge->ip, FieldKind::Velocity);
        K.axpby(nl_u_.raw().data(), r.raw().data(), 1.0, nudge->mu, nl_u_.raw().size());
    } else if (modal) {
        obs_sum = reconstruct(*nudge->now, *nudge->ip, FieldKind::Velocity);
        const SpectralField nx = reconstruct(*nudge->next, *nudge->ip, FieldKind::Velocity);
        K.axpby(obs_sum.raw().data(), nx.raw().data(), 1.0, 1.0, obs_sum.raw().size());
        leray_project_inplace(obs_sum);
    }
    leray_project_inplace(nl_u_);

    if (bous) {
        if (params_.advection) {
            ws_.advect(theta, nl_theta_);
            for (auto& z : nl_theta_.raw()) z = -z;
        } else {
            nl_theta_.set_zero();
        }
        if (params_.coupling) K.axpby(nl_theta_.data(0), u.data(dim - 1), 1.0, 1.0, n);
    }
    // Buoyancy would otherwise grow round-off in the means at rate one.
    if (mean_slot_) {
        for (int c = 0; c < dim; ++c) nl_u_.data(c)[*mean_slot_] = 0.0;
        if (bous) nl_theta_.data(0)[*mean_slot_] = 0.0;
    }

    double c_now = 1.0, c_prev = 0.0;
    if (hist.valid) {
        const double r = dt / hist.dt;
        c_now = 1.0 + 0.5 * r;
        c_prev = -0.5 * r;
    }
    const double* mask = modal ? nudge->ip->modal_mask().data() : nullptr;
    const double mu = modal ? nudge->mu : 0.0;
    for (int c = 0; c < dim; ++c) {
        K.imex_update(u.data(c), nl_u_.data(c), hist.valid ? hist.nl_u.data(c) : nullptr, g.k2().data(), mask,
                      modal ? obs_sum.data(c) : nullptr, params_.nu, mu, dt, c_now, c_prev, n);
    }
    if (bous) {
        K.imex_update(theta.data(0), nl_theta_.data(0), hist.valid ? hist.nl_theta.data(0) : nullptr, g.k2().data(),
                      nullptr, nullptr, params_.kappa, 0.0, dt, c_now, c_prev, n);
    }

    if (!finite_field(u) || !finite_field(theta)) throw DivergenceError("state became non-finite", t);

    if (hist.nl_u.empty()) {
        hist.nl_u = SpectralField::velocity(grid_);
        hist.nl_theta = SpectralField::scalar(grid_, FieldKind::Temperature);
    }
    std::swap(hist.nl_u.raw(), nl_u_.raw());
    std::swap(hist.nl_theta.raw(), nl_theta_.raw());
    hist.dt = dt;
    hist.valid = true;
    t += dt;
}

void Integrator::step_reference(FlowState& s, double dt) { advance(s.u, s.theta, s.history, s.t, dt, nullptr); }

void Integrator::step_nudged(NudgedState& s, const Observation& obs_now, const Observation& obs_next,
                             const NudgingConfig& cfg) {
    cfg.validate();
    const Interpolant& ip = *cfg.interpolant;
    if (obs_now.kind != ip.kind() || obs_next.kind != ip.kind())
        throw KindMismatchError("observation kind does not match the interpolant");
    if (std::abs(obs_now.t - s.t) > cfg.dt * (1.0 + 1e-9))
        throw PreconditionError("observation timestamp is not within dt of the state time");
    if (cfg.mu == 0.0) {
        advance(s.w, s.eta, s.history, s.t, cfg.dt, nullptr);
        return;
    }
    const Nudge nudge{&ip, &obs_now, &obs_next, cfg.mu};
    advance(s.w, s.eta, s.history, s.t, cfg.dt, &nudge);
}

FlowState step_reference(const FlowState& s, const Params& p, double dt) {
    Integrator it(s.u.grid_ptr(), p);
    FlowState out = s;
    it.step_reference(out, dt);
    return out;
}

NudgedState step_nudged(const NudgedState& s, const Observation& obs, const NudgingConfig& cfg, const Params& p) {
    Integrator it(s.w.grid_ptr(), p);
    NudgedState out = s;
    it.step_nudged(out, obs, obs, cfg);
    return out;
}

}  // namespace nudge
