#include "nudgelab/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <ostream>

#include "nudgelab/analysis.hpp"
#include "nudgelab/checkpoint.hpp"
#include "nudgelab/config.hpp"
#include "nudgelab/formats.hpp"
#include "nudgelab/kernels.hpp"

namespace nudge {

namespace {

namespace fs = std::filesystem;

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

struct Context {
    ExperimentConfig cfg;
    GridPtr grid;
    Params params;
    std::shared_ptr<const Interpolant> ip;
    fs::path out;
};

Context make_context(ExperimentConfig cfg, const std::optional<std::string>& out_dir) {
    Context c;
    if (out_dir) cfg.out = *out_dir;
    c.cfg = std::move(cfg);
    c.grid = c.cfg.make_grid();
    c.params = c.cfg.params(c.grid);
    c.ip = c.cfg.make_interpolant(c.grid);
    c.out = c.cfg.out;
    fs::create_directories(c.out);
    return c;
}

ExperimentConfig config_of(const CommandOptions& opt) {
    if (opt.config_path.empty()) throw ConfigError("--config is required");
    return load_config(opt.config_path);
}

double sup_sqrt(const Series& s, const std::string& channel) {
    double m = 0.0;
    for (double v : s.column(channel)) m = std::max(m, std::sqrt(v));
    return m;
}

void print_condition(std::ostream& out, const ConditionReport& r) {
    out << "condition (" << to_string(r.variant) << "): ";
    if (r.satisfied)
        out << "SATISFIED, mu in [" << num(r.mu_interval.lo) << ", " << num(r.mu_interval.hi) << "]\n";
    else
        out << "NOT SATISFIED: " << r.violated << "\n";
    out << "  h = " << num(r.h) << ", h0 = " << num(r.h0) << ", M_h = " << num(r.Mh) << ", alpha = " << num(r.alpha)
        << "\n";
}

/// mu from the override, the config, or the admissible interval; warns when an explicit value falls outside it.
/// The automatic choice is lowered to 0.45 / dt when that value is still admissible.
double choose_mu(const ConditionReport& rep, std::optional<double> explicit_mu, double dt, std::ostream& err) {
    if (!explicit_mu) {
        if (!rep.satisfied)
            err << "warning: condition not satisfied (" << rep.violated << "); using mu = " << num(rep.mu_selected)
                << "\n";
        const double cap = 0.45 / dt;
        if (rep.satisfied && rep.mu_selected > cap && cap >= rep.mu_interval.lo) {
            err << "note: mu lowered from " << num(rep.mu_selected) << " to " << num(cap) << " for dt = " << num(dt)
                << "\n";
            return cap;
        }
        return rep.mu_selected;
    }
    const double mu = *explicit_mu;
    if (!rep.satisfied)
        err << "warning: mu = " << num(mu) << " overrides an empty admissible interval (" << rep.violated << ")\n";
    else if (mu < rep.mu_interval.lo || mu > rep.mu_interval.hi)
        err << "warning: mu = " << num(mu) << " lies outside the admissible interval [" << num(rep.mu_interval.lo)
            << ", " << num(rep.mu_interval.hi) << "]\n";
    return mu;
}

std::optional<double> explicit_mu(const Context& c, const CommandOptions& opt) {
    return opt.override_mu ? opt.override_mu : c.cfg.mu;
}

struct TwinOutcome {
    double mu = 0.0;
    DecayFit fit;
    double ratio = 0.0;
    bool verdict = false;
    bool condition_satisfied = false;
    double alpha = 0.0;
};

TwinOutcome run_twin(const Context& c, std::optional<double> mu_explicit, std::ostream& out, std::ostream& err) {
    const FlowState init = c.cfg.initial_state(c.grid);
    ObservationStream first(InterpolantSpec::of(*c.ip));
    first.append(observe(init.u, *c.ip, init.t));
    first.M0 = l2_norm(init.u);
    ConditionExtras ex = c.cfg.extras();
    if (mu_explicit) ex.mu_override = *mu_explicit;
    const ConditionReport pre = check_condition(first, *c.ip, c.params, c.cfg.variant, ex);
    print_condition(out, pre);

    NudgingConfig nc;
    nc.interpolant = c.ip;
    nc.dt = c.cfg.dt;
    nc.mu = choose_mu(pre, mu_explicit, nc.dt, err);
    SyncResult r = run_sync_experiment(init, nc, c.params, c.cfg.T, c.cfg.record_every);
    write_csv(r.series, (c.out / "errors.csv").string());

    r.stream.M0 = sup_sqrt(r.series, "u_l2sq");
    ex.mu_override = nc.mu;
    const ConditionReport post = check_condition(r.stream, *c.ip, c.params, c.cfg.variant, ex);
    write_json(to_json(post), (c.out / "condition.json").string());

    TwinOutcome o;
    o.mu = nc.mu;
    o.alpha = post.alpha;
    o.condition_satisfied = post.satisfied;
    const auto& e = r.series.column("err_total");
    o.ratio = e.front() > 0.0 ? e.back() / e.front() : 0.0;
    json decay = {{"mu", nc.mu}, {"alpha", post.alpha}, {"terminal_ratio", o.ratio}, {"target", c.cfg.decay_target}};
    bool fitted = false;
    try {
        o.fit = fit_decay(r.series, "err_total");
        decay["fit"] = to_json(o.fit);
        fitted = true;
    } catch (const DomainError& ex_fit) {
        decay["fit"] = nullptr;
        decay["fit_error"] = ex_fit.what();
    }
    o.verdict = e.front() == 0.0 || (fitted && o.fit.rate > 0.0 && o.ratio <= c.cfg.decay_target);
    decay["verdict"] = o.verdict ? "PASS" : "FAIL";
    decay["velocity_bound"] = {{"M_h", r.Mh}, {"sup_w_h1", r.sup_w_h1}, {"holds", r.velreg_ok}};
    decay["energy"] = to_json(energy_residuals(r.series, c.params));
    write_json(decay, (c.out / "decay.json").string());

    out << "mu = " << num(nc.mu) << ", steps = " << r.steps << ", terminal error ratio = " << num(o.ratio);
    if (fitted) out << ", fitted rate = " << num(o.fit.rate);
    out << "\ndecay verdict: " << (o.verdict ? "PASS" : "FAIL") << "\n";
    return o;
}

int cmd_simulate(const CommandOptions& opt, std::ostream& out, std::ostream&) {
    const Context c = make_context(config_of(opt), opt.out_dir);
    const FlowState init = c.cfg.initial_state(c.grid);
    ReferenceResult r =
        run_reference(init, c.params, c.cfg.dt, c.cfg.T, c.cfg.record_every, c.ip.get(), c.cfg.record_every);
    r.stream.M0 = sup_sqrt(r.series, "u_l2sq");
    write_csv(r.series, (c.out / "series.csv").string());
    save_checkpoint({c.cfg.model, r.final_state}, (c.out / "checkpoint.ndgl").string());
    save_stream(r.stream, (c.out / "observations.ndgo").string());
    json summary = {{"model", to_string(c.cfg.model)},
                    {"t_start", init.t},
                    {"t_end", r.final_state.t},
                    {"records", r.series.size()},
                    {"observations", r.stream.size()},
                    {"M0", *r.stream.M0}};
    write_json(summary, (c.out / "summary.json").string());
    out << "simulate: t = " << num(init.t) << " .. " << num(r.final_state.t) << ", " << r.series.size()
        << " records written to " << c.out.string() << "\n";
    return kExitOk;
}

ObservationStream stream_for(const Context& c, const CommandOptions& opt) {
    std::string path;
    if (!opt.inputs.empty()) path = opt.inputs.front();
    else if (c.cfg.stream) path = *c.cfg.stream;
    else throw ConfigError("no observation stream given (positional path or 'stream' key)");
    ObservationStream s = load_stream(path);
    if (!(s.spec() == InterpolantSpec::of(*c.ip)))
        throw KindMismatchError("stream interpolant (" + to_string(s.spec().kind) + ") does not match the config (" +
                                to_string(c.ip->kind()) + ")");
    return s;
}

int cmd_assimilate(const CommandOptions& opt, std::ostream& out, std::ostream& err) {
    const Context c = make_context(config_of(opt), opt.out_dir);
    const auto mu_explicit = explicit_mu(c, opt);
    if (!c.cfg.stream && opt.inputs.empty()) {
        run_twin(c, mu_explicit, out, err);
        return kExitOk;
    }
    const ObservationStream v = stream_for(c, opt);
    ConditionExtras ex = c.cfg.extras();
    if (mu_explicit) ex.mu_override = *mu_explicit;
    const ConditionReport rep = check_condition(v, *c.ip, c.params, c.cfg.variant, ex);
    print_condition(out, rep);
    write_json(to_json(rep), (c.out / "condition.json").string());
    if (v.empty()) throw MissingInputError("cannot assimilate an empty stream");
    NudgingConfig nc;
    nc.interpolant = c.ip;
    nc.dt = c.cfg.dt;
    nc.mu = choose_mu(rep, mu_explicit, nc.dt, err);
    const double T = std::min(c.cfg.T, v.end() - v.start());
    const StreamRunResult r = run_stream_assimilation(v, nc, c.params, T, c.cfg.record_every);
    write_csv(r.series, (c.out / "series.csv").string());
    out << "assimilate: mu = " << num(nc.mu) << ", " << r.series.size() << " records written to " << c.out.string()
        << "\n";
    return kExitOk;
}

int cmd_check_condition(const CommandOptions& opt, std::ostream& out, std::ostream&) {
    const Context c = make_context(config_of(opt), opt.out_dir);
    const ObservationStream v = stream_for(c, opt);
    ConditionExtras ex = c.cfg.extras();
    if (auto mu = explicit_mu(c, opt)) ex.mu_override = *mu;
    const ConditionReport rep = check_condition(v, *c.ip, c.params, c.cfg.variant, ex);
    print_condition(out, rep);
    const json j = to_json(rep);
    write_json(j, (c.out / "condition.json").string());
    out << j.dump(2) << "\n";
    return kExitOk;
}

json analyze_series(const Series& s, const Params& p) {
    json j = {{"samples", s.size()}, {"channels", s.channels()}};
    if (s.empty()) return j;
    std::string channel;
    for (const char* name : {"err_total", "w_l2sq", "u_l2sq"})
        if (s.has(name)) {
            channel = name;
            break;
        }
    if (channel.empty() && !s.channels().empty()) channel = s.channels().front();
    if (!channel.empty()) {
        j["fit_channel"] = channel;
        try {
            j["fit"] = to_json(fit_decay(s, channel));
        } catch (const Error& e) {
            j["fit"] = nullptr;
            j["fit_error"] = e.what();
        }
    }
    try {
        j["energy"] = to_json(energy_residuals(s, p));
    } catch (const MissingInputError&) {
    }
    try {
        j["accumulator_deviation"] = accumulator_deviation(s);
    } catch (const MissingInputError&) {
    }
    for (const char* u : {"u", "w"})
        if (s.has(std::string(u) + "_l2sq") && s.has(std::string(u) + "_h1sq"))
            j["space_norms_" + std::string(u)] = to_json(space_norms(s, u, u[0] == 'u' ? "theta" : "eta"));
    return j;
}

int cmd_analyze(const CommandOptions& opt, std::ostream& out, std::ostream&) {
    if (opt.inputs.empty()) throw ConfigError("analyze needs at least one CSV path");
    Params p;
    if (!opt.config_path.empty()) {
        const ExperimentConfig cfg = load_config(opt.config_path);
        p = cfg.params(cfg.make_grid());
    }
    json report = json::object();
    for (const auto& path : opt.inputs) report[path] = analyze_series(read_csv(path), p);
    if (opt.out_dir) {
        fs::create_directories(*opt.out_dir);
        write_json(report, (fs::path(*opt.out_dir) / "analysis.json").string());
    }
    out << report.dump(2) << "\n";
    return kExitOk;
}

int cmd_sweep(const CommandOptions& opt, std::ostream& out, std::ostream& err) {
    const ExperimentConfig base = config_of(opt);
    if (base.sweep_key.empty()) throw ConfigError("sweep needs 'sweep_key' and 'sweep_values'");
    const fs::path root = opt.out_dir ? fs::path(*opt.out_dir) : fs::path(base.out);
    json rows = json::array();
    for (const auto& value : base.sweep_values) {
        ExperimentConfig cfg = base;
        set_config_value(cfg, base.sweep_key, value);
        cfg.sweep_key.clear();
        cfg.sweep_values.clear();
        const Context c = make_context(cfg, (root / (base.sweep_key + "_" + value)).string());
        out << "== " << base.sweep_key << " = " << value << "\n";
        const TwinOutcome o = run_twin(c, opt.override_mu ? opt.override_mu : cfg.mu, out, err);
        rows.push_back({{base.sweep_key, value},
                        {"mu", o.mu},
                        {"alpha", o.alpha},
                        {"condition_satisfied", o.condition_satisfied},
                        {"rate", o.fit.rate},
                        {"terminal_ratio", o.ratio},
                        {"verdict", o.verdict ? "PASS" : "FAIL"}});
    }
    write_json(rows, (root / "sweep.json").string());
    return kExitOk;
}

}  // namespace

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
    if (dynamic_cast<const DivergenceError*>(&e) || dynamic_cast<const StabilityError*>(&e)) return kExitDivergence;
    if (dynamic_cast<const KindMismatchError*>(&e)) return kExitMismatch;
    if (dynamic_cast<const FormatError*>(&e)) return kExitFormat;
    return kExitOther;
}

int run_command(const std::string& name, const CommandOptions& opt, std::ostream& out, std::ostream& err) {
    kernels::configure_threads();
    try {
        if (name == "simulate") return cmd_simulate(opt, out, err);
        if (name == "assimilate") return cmd_assimilate(opt, out, err);
        if (name == "check-condition") return cmd_check_condition(opt, out, err);
        if (name == "analyze") return cmd_analyze(opt, out, err);
        if (name == "sweep") return cmd_sweep(opt, out, err);
        err << "error: unknown command '" << name << "'\n";
        return kExitConfig;
    } catch (const StabilityError& e) {
        err << "error: " << e.what() << " (suggested dt " << num(e.suggested_dt) << ")\n";
        return kExitDivergence;
    } catch (const DivergenceError& e) {
        err << "error: " << e.what() << " (last valid t = " << num(e.last_valid_time) << ")\n";
        return kExitDivergence;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

}  // namespace nudge
