#include "nudgelab/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "nudgelab/condition.hpp"
#include "nudgelab/kernels.hpp"
#include "nudgelab/random_fields.hpp"

namespace nudge {

namespace {

SpectralField minus(const SpectralField& a, const SpectralField& b) {
    SpectralField out = a;
    kernels::active().axpby(out.raw().data(), b.raw().data(), 1.0, -1.0, out.raw().size());
    return out;
}

double sq(double x) { return x * x; }

/// 2 (theta, u_last), or 2 (f, u) for the forced model.
double source_power(const SpectralField& u, const SpectralField& theta, const Params& p) {
    const Grid& g = u.grid();
    if (p.model == Model::Boussinesq) {
        if (!p.coupling) return 0.0;
        return 2.0 * kernels::active().inner(theta.data(0), u.data(g.dim() - 1), g.weight().data(), nullptr, u.size());
    }
    return p.f.empty() ? 0.0 : 2.0 * inner(p.f, u);
}

long step_count(double T, double dt) {
    if (!(T >= 0.0)) throw DomainError("T must be nonnegative");
    return static_cast<long>(std::llround(T / dt));
}

void add_noise(Observation& o, const Observation& dir, const Perturbation& pert) {
    if (!pert.enabled()) return;
    const double a = pert.envelope(o.t);
    for (std::size_t i = 0; i < o.payload.size(); ++i) o.payload[i] += a * dir.payload[i];
}

/// Trapezoid accumulators over recorded samples.
struct Accumulator {
    std::vector<double> prev;
    std::vector<double> acc;
    double t_prev = 0.0;
    bool first = true;

    const std::vector<double>& push(double t, const std::vector<double>& v) {
        if (first) {
            acc.assign(v.size(), 0.0);
            first = false;
        } else {
            for (std::size_t i = 0; i < v.size(); ++i) acc[i] += 0.5 * (t - t_prev) * (v[i] + prev[i]);
        }
        prev = v;
        t_prev = t;
        return acc;
    }
};

}  // namespace

double p_norm(const SpectralField& u, const SpectralField& theta) {
    return std::sqrt(sq(l2_norm(u)) + sq(l2_norm(theta)));
}

const std::vector<std::string>& sync_channels() {
    static const std::vector<std::string> names = {
        "err_u_l2sq", "err_u_h1sq", "err_theta_l2sq", "err_total", "err_u_l2", "err_u_h1", "err_theta_l2",
        "w_h1", "eta_l4", "u_l2sq", "theta_l2sq", "u_h1sq", "theta_h1sq", "w_l2sq", "eta_l2sq", "w_h1sq",
        "eta_h1sq", "src_u", "src_w", "nudge_w", "mh_obs", "acc_u_h1sq", "acc_theta_h1sq", "acc_src_u",
        "acc_w_h1sq", "acc_eta_h1sq", "acc_src_w", "acc_nudge_w", "acc_err_u_h1sq"};
    return names;
}

Observation perturbation_direction(const Interpolant& ip, std::uint64_t seed) {
    RandomSpectrum spec;
    spec.kmax = ip.grid().resolution(0) / 8.0;
    spec.energy = 1.0;
    const SpectralField v = random_velocity(ip.grid_ptr(), seed, spec);
    Observation d = observe(v, ip, 0.0);
    const double n = l2_norm(reconstruct(d, ip, FieldKind::Velocity));
    if (n == 0.0) throw SamplingError("perturbation direction vanished under the interpolant");
    for (auto& x : d.payload) x /= n;
    return d;
}

SyncResult run_sync_experiment(const FlowState& ref0, const NudgingConfig& cfg, const Params& p, double T,
                               int record_every) {
    cfg.validate();
    if (record_every < 1) throw DomainError("record_every must be at least 1");
    const Interpolant& ip = *cfg.interpolant;
    const GridPtr grid = ref0.u.grid_ptr();
    if (!ip.grid().same_as(*grid)) throw ShapeError("interpolant and state live on different grids");
    Integrator ref_int(grid, p), nud_int(grid, p);

    SyncResult res;
    res.series = Series(sync_channels());
    res.stream = ObservationStream(InterpolantSpec::of(ip));
    res.reference = ref0;
    res.nudged = NudgedState::zero(grid);
    res.nudged.t = ref0.t;
    FlowState& ref = res.reference;
    NudgedState& nud = res.nudged;

    Observation dir;
    if (cfg.perturbation.enabled()) dir = perturbation_direction(ip, cfg.perturbation.seed);
    auto observe_ref = [&]() {
        Observation o = observe(ref.u, ip, ref.t);
        add_noise(o, dir, cfg.perturbation);
        return o;
    };

    double sup_mh = 0.0;
    Accumulator accum;
    Observation obs_now = observe_ref();
    const double t_start = ref.t;

    auto record = [&](const Observation& obs) {
        const SpectralField eu = minus(nud.w, ref.u);
        const SpectralField et = minus(nud.eta, ref.theta);
        const double eu_l2 = l2_norm(eu), eu_h1 = h1_norm(eu), et_l2 = l2_norm(et);
        const double w_h1 = h1_norm(nud.w);
        const SpectralField r = minus(reconstruct(obs, ip, FieldKind::Velocity), apply(nud.w, ip));
        const double nudge_w = 2.0 * cfg.mu * inner(r, nud.w);
        const double u_h1sq = sq(h1_norm(ref.u)), th_h1sq = sq(h1_norm(ref.theta));
        const double w_h1sq = sq(w_h1), eta_h1sq = sq(h1_norm(nud.eta));
        const double src_u = source_power(ref.u, ref.theta, p), src_w = source_power(nud.w, nud.eta, p);
        const double err_h1sq = sq(eu_h1);
        const auto& acc = accum.push(ref.t, {u_h1sq, th_h1sq, src_u, w_h1sq, eta_h1sq, src_w, nudge_w, err_h1sq});
        res.series.append(ref.t, {sq(eu_l2), err_h1sq, sq(et_l2), sq(eu_l2) + sq(et_l2), eu_l2, eu_h1, et_l2, w_h1,
                                  lp_norm(nud.eta, 4.0), sq(l2_norm(ref.u)), sq(l2_norm(ref.theta)), u_h1sq, th_h1sq,
                                  sq(l2_norm(nud.w)), sq(l2_norm(nud.eta)), w_h1sq, eta_h1sq, src_u, src_w, nudge_w,
                                  32.0 * mh_functional(obs, ip, p.volume_constant()), acc[0], acc[1], acc[2], acc[3], acc[4],
                                  acc[5], acc[6], acc[7]});
        res.stream.append(obs);
    };

    auto track = [&](const Observation& obs) {
        sup_mh = std::max(sup_mh, mh_functional(obs, ip, p.volume_constant()));
        res.sup_w_h1 = std::max(res.sup_w_h1, h1_norm(nud.w));
        res.M0 = std::max(res.M0, l2_norm(ref.u));
    };

    track(obs_now);
    record(obs_now);
    const long nsteps = step_count(T, cfg.dt);
    for (long s = 1; s <= nsteps; ++s) {
        ref_int.step_reference(ref, cfg.dt);
        ref.t = t_start + s * cfg.dt;
        Observation obs_next = observe_ref();
        nud_int.step_nudged(nud, obs_now, obs_next, cfg);
        nud.t = ref.t;
        obs_now = std::move(obs_next);
        track(obs_now);
        if (s % record_every == 0 || s == nsteps) record(obs_now);
    }
    res.steps = nsteps;
    res.stream.M0 = res.M0;
    res.Mh = std::sqrt(32.0 * sup_mh);
    res.velreg_ok = res.sup_w_h1 <= 1.05 * res.Mh;
    return res;
}

ReferenceResult run_reference(const FlowState& ref0, const Params& p, double dt, double T, int record_every,
                              const Interpolant* ip, int stream_every) {
    if (record_every < 1 || stream_every < 1) throw DomainError("cadences must be at least 1");
    const GridPtr grid = ref0.u.grid_ptr();
    Integrator integ(grid, p);
    ReferenceResult res;
    res.series = Series({"u_l2sq", "theta_l2sq", "u_h1sq", "theta_h1sq", "src_u", "u_h1", "theta_l4", "acc_u_h1sq",
                         "acc_theta_h1sq", "acc_src_u"});
    if (ip) res.stream = ObservationStream(InterpolantSpec::of(*ip));
    res.final_state = ref0;
    FlowState& s = res.final_state;
    Accumulator accum;
    const double t_start = s.t;

    auto record = [&]() {
        const double u_h1 = h1_norm(s.u);
        const double u_h1sq = sq(u_h1), th_h1sq = sq(h1_norm(s.theta));
        const double src = source_power(s.u, s.theta, p);
        const auto& acc = accum.push(s.t, {u_h1sq, th_h1sq, src});
        res.series.append(s.t, {sq(l2_norm(s.u)), sq(l2_norm(s.theta)), u_h1sq, th_h1sq, src, u_h1,
                                lp_norm(s.theta, 4.0), acc[0], acc[1], acc[2]});
    };
    res.M0 = l2_norm(s.u);
    record();
    if (ip) res.stream.append(observe(s.u, *ip, s.t));
    const long nsteps = step_count(T, dt);
    for (long k = 1; k <= nsteps; ++k) {
        integ.step_reference(s, dt);
        s.t = t_start + k * dt;
        res.M0 = std::max(res.M0, l2_norm(s.u));
        if (k % record_every == 0 || k == nsteps) record();
        if (ip && (k % stream_every == 0 || k == nsteps)) res.stream.append(observe(s.u, *ip, s.t));
    }
    if (ip) res.stream.M0 = res.M0;
    return res;
}

DeterminingReport run_determining_experiment(const FlowState& ref_a, const FlowState& ref_b, const NudgingConfig& cfg,
                                             const Params& p, double T, int record_every) {
    cfg.validate();
    if (record_every < 1) throw DomainError("record_every must be at least 1");
    const Interpolant& ip = *cfg.interpolant;
    const GridPtr grid = ref_a.u.grid_ptr();
    Integrator ia(grid, p), ib(grid, p), in(grid, p);
    FlowState a = ref_a, b = ref_b;
    b.t = a.t;
    NudgedState w = NudgedState::zero(grid);
    w.t = a.t;
    const double t_start = a.t;

    Observation dir;
    if (cfg.perturbation.enabled()) dir = perturbation_direction(ip, cfg.perturbation.seed);
    auto feed = [&]() {
        Observation o = observe(a.u, ip, a.t);
        Perturbation shifted = cfg.perturbation;
        o.t = a.t;
        if (shifted.enabled()) {
            const double env = shifted.envelope(a.t - t_start);
            for (std::size_t i = 0; i < o.payload.size(); ++i) o.payload[i] += env * dir.payload[i];
        }
        return o;
    };

    DeterminingReport rep;
    rep.series = Series({"gap_P", "err_u_l2sq", "err_theta_l2sq", "obs_gap_ab", "ref_gap_P", "delta_l2"});
    auto record = [&]() {
        const SpectralField eu = minus(w.w, a.u), et = minus(w.eta, a.theta);
        const double gap = std::sqrt(sq(l2_norm(eu)) + sq(l2_norm(et)));
        const Observation oa = observe(a.u, ip, a.t), ob = observe(b.u, ip, a.t);
        Observation d = oa;
        for (std::size_t i = 0; i < d.payload.size(); ++i) d.payload[i] -= ob.payload[i];
        const double obs_gap = l2_norm(reconstruct(d, ip, FieldKind::Velocity));
        const double ref_gap = p_norm(minus(a.u, b.u), minus(a.theta, b.theta));
        rep.series.append(a.t, {gap, sq(l2_norm(eu)), sq(l2_norm(et)), obs_gap, ref_gap,
                                cfg.perturbation.envelope(a.t - t_start)});
        rep.terminal_gap = gap;
        rep.terminal_obs_gap = obs_gap;
        rep.terminal_reference_gap = ref_gap;
    };
    record();
    rep.initial_gap = rep.terminal_gap;

    Observation obs_now = feed();
    const long nsteps = step_count(T, cfg.dt);
    for (long s = 1; s <= nsteps; ++s) {
        ia.step_reference(a, cfg.dt);
        ib.step_reference(b, cfg.dt);
        a.t = b.t = t_start + s * cfg.dt;
        Observation obs_next = feed();
        in.step_nudged(w, obs_now, obs_next, cfg);
        w.t = a.t;
        obs_now = std::move(obs_next);
        if (s % record_every == 0 || s == nsteps) record();
    }
    rep.ratio = rep.initial_gap > 0.0 ? rep.terminal_gap / rep.initial_gap : 0.0;
    return rep;
}

StreamRunResult run_stream_assimilation(const ObservationStream& v, const NudgingConfig& cfg, const Params& p,
                                        double T, int record_every) {
    cfg.validate();
    if (record_every < 1) throw DomainError("record_every must be at least 1");
    const Interpolant& ip = *cfg.interpolant;
    if (v.spec().kind != ip.kind()) throw KindMismatchError("stream kind does not match the interpolant");
    const GridPtr grid = ip.grid_ptr();
    Integrator integ(grid, p);
    StreamRunResult res;
    res.series = Series({"w_l2sq", "w_h1sq", "eta_l2sq", "eta_h1sq", "w_h1", "eta_l4"});
    NudgedState& s = res.final_state;
    s = NudgedState::zero(grid);
    const double t_start = v.start();
    s.t = t_start;
    auto record = [&]() {
        const double h1 = h1_norm(s.w);
        res.series.append(s.t, {sq(l2_norm(s.w)), sq(h1), sq(l2_norm(s.eta)), sq(h1_norm(s.eta)), h1,
                                lp_norm(s.eta, 4.0)});
    };
    record();
    Observation now = v.at(t_start);
    const long nsteps = step_count(T, cfg.dt);
    for (long k = 1; k <= nsteps; ++k) {
        const double t_next = t_start + k * cfg.dt;
        Observation next = v.at(t_next);
        integ.step_nudged(s, now, next, cfg);
        s.t = t_next;
        now = std::move(next);
        if (k % record_every == 0 || k == nsteps) record();
    }
    return res;
}

}  // namespace nudge
