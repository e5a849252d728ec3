#include <algorithm>
#include <cmath>

#include "nudgelab/analysis.hpp"
#include "nudgelab/kernels.hpp"

namespace nudge {

namespace {

SpectralField minus(const SpectralField& a, const SpectralField& b) {
    SpectralField out = a;
    kernels::active().axpby(out.raw().data(), b.raw().data(), 1.0, -1.0, out.raw().size());
    return out;
}

double margin(double bound, double measured) {
    return measured > 0.0 ? bound / measured : std::numeric_limits<double>::infinity();
}

Observation at_time(const ObservationStream& v, double query, double stamp) {
    Observation o = v.at(query);
    o.t = stamp;
    return o;
}

}  // namespace

LipschitzReport lipschitz_test(const ObservationStream& v1, const ObservationStream& v2, const NudgingConfig& cfg,
                               const Params& p, double T, int record_every, double tolerance) {
    cfg.validate();
    if (!(v1.spec() == v2.spec())) throw KindMismatchError("streams use different interpolants");
    if (record_every < 1) throw DomainError("record_every must be at least 1");
    const Interpolant& ip = *cfg.interpolant;
    const GridPtr grid = ip.grid_ptr();
    Integrator i1(grid, p), i2(grid, p);
    NudgedState s1 = NudgedState::zero(grid), s2 = NudgedState::zero(grid);
    const double t0 = v1.start();
    s1.t = s2.t = t0;

    LipschitzReport rep;
    rep.tolerance = tolerance;
    std::vector<double> ts, wh1;
    auto vbar = [&](const Observation& a, const Observation& b) {
        Observation d = a;
        for (std::size_t i = 0; i < d.payload.size(); ++i) d.payload[i] -= b.payload[i];
        const double n = l2_norm(reconstruct(d, ip, FieldKind::Velocity));
        rep.sup_vbar_l2sq = std::max(rep.sup_vbar_l2sq, n * n);
    };
    auto record = [&]() {
        const SpectralField wb = minus(s1.w, s2.w), eb = minus(s1.eta, s2.eta);
        const double l2 = l2_norm(wb), h1 = h1_norm(wb), el2 = l2_norm(eb);
        rep.sup_wbar_l2sq = std::max(rep.sup_wbar_l2sq, l2 * l2);
        rep.sup_etabar_l2sq = std::max(rep.sup_etabar_l2sq, el2 * el2);
        ts.push_back(s1.t);
        wh1.push_back(h1 * h1);
        rep.terminal_P_gap = std::sqrt(l2 * l2 + el2 * el2);
    };

    Observation a_now = at_time(v1, t0, t0), b_now = at_time(v2, t0, t0);
    vbar(a_now, b_now);
    record();
    const long nsteps = static_cast<long>(std::llround(T / cfg.dt));
    for (long k = 1; k <= nsteps; ++k) {
        const double tn = t0 + k * cfg.dt;
        Observation a_next = at_time(v1, tn, tn), b_next = at_time(v2, tn, tn);
        i1.step_nudged(s1, a_now, a_next, cfg);
        i2.step_nudged(s2, b_now, b_next, cfg);
        s1.t = s2.t = tn;
        a_now = std::move(a_next);
        b_now = std::move(b_next);
        vbar(a_now, b_now);
        if (k % record_every == 0 || k == nsteps) record();
    }
    rep.sup_window_wbar_h1sq = sliding_window_sup(ts, wh1, 1.0);
    rep.bound_n1 = 8.0 * rep.sup_vbar_l2sq;
    rep.bound_n2 = 4.0 * cfg.mu / p.nu * rep.sup_vbar_l2sq;
    rep.bound_eta = p.model == Model::Boussinesq ? 4.0 * cfg.mu / (p.kappa * grid->lambda1()) * rep.sup_vbar_l2sq : 0.0;
    rep.verdict_n1 = rep.sup_wbar_l2sq <= (1.0 + tolerance) * rep.bound_n1;
    rep.verdict_n2 = rep.sup_window_wbar_h1sq <= (1.0 + tolerance) * rep.bound_n2;
    rep.verdict_eta = rep.sup_etabar_l2sq <= (1.0 + tolerance) * rep.bound_eta;
    rep.margin_n1 = margin(rep.bound_n1, rep.sup_wbar_l2sq);
    rep.margin_n2 = margin(rep.bound_n2, rep.sup_window_wbar_h1sq);
    return rep;
}

ShiftReport shift_equivariance_test(const ObservationStream& v, double sigma, const NudgingConfig& cfg,
                                    const Params& p, double T, double alpha, int record_every, double tolerance) {
    cfg.validate();
    if (sigma < 0.0) throw DomainError("shift must be nonnegative");
    const double ks = sigma / cfg.dt;
    if (std::abs(ks - std::round(ks)) > 1e-9 * std::max(1.0, ks)) throw DomainError("shift must be a multiple of dt");
    if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
    const long nshift = std::lround(ks);
    const Interpolant& ip = *cfg.interpolant;
    const GridPtr grid = ip.grid_ptr();
    Integrator ia(grid, p), ib(grid, p);
    NudgedState a = NudgedState::zero(grid), b = NudgedState::zero(grid);
    const double t0 = v.start();
    a.t = b.t = t0;

    ShiftReport rep;
    rep.sigma = sigma;
    rep.transient = 5.0 / alpha;

    Observation a_now = at_time(v, t0, t0);
    for (long k = 1; k <= nshift; ++k) {
        const double tn = t0 + k * cfg.dt;
        Observation a_next = at_time(v, tn, tn);
        ia.step_nudged(a, a_now, a_next, cfg);
        a.t = tn;
        a_now = std::move(a_next);
    }
    Observation b_now = at_time(v, t0 + nshift * cfg.dt, t0);
    const long nsteps = static_cast<long>(std::llround(T / cfg.dt)) - nshift;
    for (long k = 1; k <= nsteps; ++k) {
        const double tb = t0 + k * cfg.dt;
        const double ta = t0 + (k + nshift) * cfg.dt;
        Observation a_next = at_time(v, ta, ta);
        Observation b_next = at_time(v, ta, tb);
        ia.step_nudged(a, a_now, a_next, cfg);
        ib.step_nudged(b, b_now, b_next, cfg);
        a.t = ta;
        b.t = tb;
        a_now = std::move(a_next);
        b_now = std::move(b_next);
        if ((k % record_every == 0 || k == nsteps) && tb - t0 >= rep.transient) {
            const double ref = p_norm(a.w, a.eta);
            const double diff = p_norm(minus(a.w, b.w), minus(a.eta, b.eta));
            const double rel = ref > 0.0 ? diff / ref : diff;
            rep.max_rel_error = std::max(rep.max_rel_error, rel);
            ++rep.compared;
        }
    }
    rep.verdict = rep.compared > 0 && rep.max_rel_error <= tolerance;
    return rep;
}

}  // namespace nudge
