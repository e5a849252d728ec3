#include "nudgelab/condition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nudgelab/series.hpp"

namespace nudge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

double need(const std::optional<double>& v, const char* what) {
    if (!v) throw MissingInputError(std::string("condition variant needs ") + what);
    return *v;
}

bool is_weakened(ConditionVariant v) { return v == ConditionVariant::Weakened || v == ConditionVariant::Criterion1; }

}  // namespace

std::string to_string(ConditionVariant v) {
    switch (v) {
        case ConditionVariant::Weak: return "weak";
        case ConditionVariant::Strong: return "strong";
        case ConditionVariant::Sync: return "sync";
        case ConditionVariant::Attractor: return "attractor";
        case ConditionVariant::Criterion: return "criterion";
        case ConditionVariant::Weakened: return "weakened";
        case ConditionVariant::Criterion1: return "criterion1";
    }
    return "?";
}

ConditionVariant condition_variant_from_string(const std::string& s) {
    for (auto v : {ConditionVariant::Weak, ConditionVariant::Strong, ConditionVariant::Sync, ConditionVariant::Attractor,
                   ConditionVariant::Criterion, ConditionVariant::Weakened, ConditionVariant::Criterion1})
        if (to_string(v) == s) return v;
    throw ConfigError("unknown condition variant '" + s + "'");
}

double MuInterval::geometric_mean() const {
    if (lo > 0.0 && hi > 0.0) return std::sqrt(lo * hi);
    return std::max(lo, hi);
}

double temperature_bound_S(double p, double C, double M0, double lambda1) {
    return C * p * M0 / std::pow((2.0 * p - 1.0) * lambda1, 1.0 / (2.0 * p));
}


double mh_functional(const Observation& obs, const Interpolant& ip, double C) {
    if (obs.kind != ip.kind()) throw KindMismatchError("observation kind does not match the interpolant");
    if (ip.kind() == InterpolantKind::Modal) {
        const double n = h1_norm(reconstruct(obs, ip, FieldKind::Velocity));
        return n * n;
    }
    return C * ip.h() * cell_energy(obs);
}

double compute_Mh(const ObservationStream& stream, const Interpolant& ip, double C) {
    if (stream.empty()) throw MissingInputError("M_h needs a nonempty stream");
    double sup = 0.0;
    for (const auto& o : stream.records()) sup = std::max(sup, mh_functional(o, ip, C));
    return std::sqrt(32.0 * sup);
}

double compute_Kh(const ObservationStream& stream, const Interpolant& ip, double tau0, double p) {
    if (stream.empty()) throw MissingInputError("K_h needs a nonempty stream");
    if (p < 3.0) throw DomainError("K_h needs p >= 3");
    if (!(tau0 > 0.0)) throw DomainError("tau0 must be positive");
    const auto& rec = stream.records();
    const double t0 = rec.front().t, t1 = rec.back().t;
    if (t1 - t0 < tau0 * (1.0 - 1e-12)) throw DomainError("stream span is shorter than tau0");

    std::vector<double> t(rec.size()), g(rec.size());
    for (std::size_t i = 0; i < rec.size(); ++i) {
        t[i] = rec[i].t;
        g[i] = std::pow(h1_norm(reconstruct(rec[i], ip, FieldKind::Velocity)), 2.0 * p);
    }
    const TrapezoidIntegral primitive(t, g);
    double best = 0.0;
    std::vector<double> starts;
    for (double s : t)
        if (s + tau0 <= t1) starts.push_back(s);
    starts.push_back(std::max(t0, t1 - tau0));
    for (double s : starts) best = std::max(best, primitive(std::min(s + tau0, t1)) - primitive(s));
    return std::pow(best, 1.0 / (2.0 * p));
}

double h0_variant(const Params& prm, double lambda1, ConditionVariant v, const ConditionExtras& ex) {
    const double nu = prm.nu, ka = prm.kappa, c = prm.c_interp, C = prm.C_sob, l1 = lambda1;
    switch (v) {
        case ConditionVariant::Weak: return std::sqrt(nu * ka * l1 / (16.0 * c));
        case ConditionVariant::Strong: {
            const double m = std::max(8.0 / (ka * l1), (2.0 / ka) * (1.0 + 2.0 / (l1 * l1)));
            return 1.0 / std::sqrt(4.0 * c / nu * m);
        }
        case ConditionVariant::Sync: {
            const double S2 = need(ex.S2, "S2");
            const double m = std::max({32.0 * c / (nu * ka * l1), 8.0 * c / (nu * ka) * (1.0 + 2.0 / (l1 * l1)),
                                       64.0 * C * std::pow(S2, 8) / std::pow(nu * ka, 4)});
            return 1.0 / std::sqrt(m);
        }
        case ConditionVariant::Attractor: return std::sqrt(1.0 / (4.0 * c * l1));
        case ConditionVariant::Criterion: {
            const double f = need(ex.f_norm, "|f|");
            const double m = std::max(1.0 / (4.0 * c * l1), 32.0 * c * std::pow(f, 4) / (std::pow(nu, 8) * l1 * l1));
            return 1.0 / std::sqrt(m);
        }
        case ConditionVariant::Weakened:
        case ConditionVariant::Criterion1: {
            const double f = need(ex.f_norm, "|f|");
            const double e = v == ConditionVariant::Weakened ? 8.0 : 5.0;
            const double m = std::max(4.0 * c * l1, 1024.0 * c * std::pow(f, 4) / (std::pow(nu, e) * l1 * l1));
            return 1.0 / std::sqrt(m);
        }
    }
    throw DomainError("unknown variant");
}

MuInterval mu_range(double Mh, double h, double h0, const Params& p, ConditionVariant v) {
    if (!(h > 0.0)) throw DomainError("h must be positive");
    if (is_weakened(v)) throw DomainError("weakened variants use mu_range_weakened");
    const double nu = p.nu, c = p.c_interp;
    const double M4 = std::pow(Mh, 4);
    MuInterval r;
    std::string lower_name;
    double data_term = 0.0;
    switch (v) {
        case ConditionVariant::Weak:
            r.lo = nu / (2.0 * c * h0 * h0);
            r.hi = nu / (2.0 * c * h * h);
            break;
        case ConditionVariant::Strong:
        case ConditionVariant::Sync:
            data_term = 16.0 * c * M4 / (nu * nu * nu);
            lower_name = "16 c M_h^4 / nu^3";
            r.lo = std::max(nu / (4.0 * c * h0 * h0), data_term);
            r.hi = nu / (4.0 * c * h * h);
            break;
        case ConditionVariant::Attractor:
            data_term = 2.0 * c * M4 / (nu * nu * nu);
            lower_name = "2 c M_h^4 / nu^3";
            r.lo = std::max(data_term, nu / (4.0 * c * h0 * h0));
            r.hi = nu / (4.0 * c * h * h);
            break;
        case ConditionVariant::Criterion:
            data_term = 2.0 * c * M4 / (nu * nu * nu);
            lower_name = "2 c M_h^4 / nu^3";
            r.lo = data_term;
            r.hi = nu / (16.0 * c * h * h);
            break;
        default: break;
    }
    if (h > h0) {
        r.empty = true;
        r.violated = "h <= h0 fails: h = " + fmt(h) + " > h0 = " + fmt(h0);
    } else if (r.lo > r.hi) {
        r.empty = true;
        r.violated = (!lower_name.empty() && data_term > r.hi ? lower_name + " = " + fmt(data_term)
                                                              : "lower bound " + fmt(r.lo)) +
                     " exceeds upper bound " + fmt(r.hi);
    }
    return r;
}

WeakenedRange mu_range_weakened(double Kh, double h, double h0, double p_exp, double tau0, const Params& params,
                                double lambda1, double f_norm) {
    if (p_exp <= 2.0) throw DomainError("weakened condition needs p > 2");
    if (!(h > 0.0)) throw DomainError("h must be positive");
    const double nu = params.nu, c = params.c_interp, C = params.C_sob;
    WeakenedRange out;
    out.q = p_exp / (p_exp - 1.0);
    const double q = out.q;
    const double data_term = std::pow(32.0 * C * std::pow(Kh, 4) / std::pow(q, 2.0 / q), p_exp / (p_exp - 2.0));
    MuInterval& r = out.interval;
    r.lo = std::max(nu / (4.0 * c * h0 * h0), data_term);
    r.hi = nu / (4.0 * c * h * h);
    if (h > h0) {
        r.empty = true;
        r.violated = "h <= h0 fails: h = " + fmt(h) + " > h0 = " + fmt(h0);
    } else if (r.lo > r.hi) {
        r.empty = true;
        r.violated = "(32 C K_h^4 / q^(2/q))^(p/(p-2)) = " + fmt(data_term) + " exceeds upper bound " + fmt(r.hi);
    }
    const double mu = r.geometric_mean();
    const double decay = 1.0 - std::exp(-nu * lambda1 * p_exp * tau0 / 4.0);
    out.Mh = std::sqrt(8.0 * f_norm * f_norm / (lambda1 * nu * nu) +
                       2.0 * C * Kh * Kh * std::pow(mu, 1.0 / p_exp) / std::pow(q, 1.0 / q) *
                           std::pow(2.0 / decay, 1.0 / p_exp));
    return out;
}

namespace {

/// Stream summaries that do not depend on (c, C).
struct StreamSummary {
    double sup_modal_h1sq = 0.0;
    double sup_cell_energy = 0.0;
    double rho = 0.0;
    double sup_l2 = 0.0;
    double Kh = 0.0;
};

void evaluate(ConditionReport& rep, const StreamSummary& s, const Interpolant& ip, const Params& base,
              ConditionVariant v, const ConditionExtras& ex, double c, double C) {
    Params prm = base;
    prm.c_interp = c;
    prm.C_sob = C;
    const double l1 = ip.grid().lambda1();
    const double h = ip.h();
    rep = ConditionReport{};
    rep.variant = v;
    rep.h = h;
    rep.lambda1 = l1;
    rep.c_used = c;
    rep.C_used = C;
    rep.tau0 = ex.tau0;
    rep.p = ex.p;
    rep.q = ex.p / (ex.p - 1.0);
    rep.rho = ex.rho ? *ex.rho : s.rho;
    rep.M0_measured = ex.M0.has_value();
    rep.M0 = ex.M0 ? *ex.M0 : s.sup_l2;
    rep.S2 = temperature_bound_S(2.0, C, rep.M0, l1);
    rep.Kh = s.Kh;

    ConditionExtras full = ex;
    full.S2 = ex.S2 ? *ex.S2 : rep.S2;
    if (!full.f_norm) full.f_norm = base.force_norm();

    for (auto w : {ConditionVariant::Weak, ConditionVariant::Strong, ConditionVariant::Sync, ConditionVariant::Attractor,
                   ConditionVariant::Criterion, ConditionVariant::Weakened, ConditionVariant::Criterion1})
        rep.h0_variants[to_string(w)] = h0_variant(prm, l1, w, full);
    rep.h0 = rep.h0_variants[to_string(v)];

    const double obs_Mh = ip.kind() == InterpolantKind::Modal
                              ? std::sqrt(32.0 * s.sup_modal_h1sq)
                              : std::sqrt(32.0 * prm.volume_constant() * h * s.sup_cell_energy);
    if (is_weakened(v)) {
        WeakenedRange wr = mu_range_weakened(s.Kh, h, rep.h0, ex.p, ex.tau0, prm, l1, *full.f_norm);
        rep.mu_interval = wr.interval;
        rep.Mh = wr.Mh;
        rep.q = wr.q;
    } else {
        rep.Mh = obs_Mh;
        if (v == ConditionVariant::Attractor) {
            const double f = *full.f_norm;
            rep.Mh = std::sqrt(8.0 * (f * f / (prm.nu * prm.nu * l1) + rep.rho * rep.rho));
        }
        rep.mu_interval = mu_range(rep.Mh, h, rep.h0, prm, v);
    }
    rep.satisfied = !rep.mu_interval.empty;
    rep.violated = rep.mu_interval.violated;
    if (v == ConditionVariant::Criterion || v == ConditionVariant::Criterion1) rep.regularity_verdict = rep.satisfied;

    rep.mu_overridden = ex.mu_override.has_value();
    rep.mu_selected = rep.mu_overridden ? *ex.mu_override : rep.mu_interval.geometric_mean();
    rep.mu_in_interval = rep.satisfied && rep.mu_selected >= rep.mu_interval.lo * (1 - 1e-12) &&
                         rep.mu_selected <= rep.mu_interval.hi * (1 + 1e-12);
    rep.alpha = base.model == Model::Boussinesq ? std::min(rep.mu_selected / 4.0, prm.kappa * l1 / 2.0)
                                                : rep.mu_selected / 4.0;
}

/// Largest value of a constant for which pass(x) holds, assuming pass is monotone decreasing.
template <class F>
double largest_passing(F pass) {
    const double lo_e = -15.0, hi_e = 15.0;
    if (pass(std::pow(10.0, hi_e))) return kInf;
    if (!pass(std::pow(10.0, lo_e))) return 0.0;
    double a = lo_e, b = hi_e;
    for (int i = 0; i < 80; ++i) {
        const double m = 0.5 * (a + b);
        (pass(std::pow(10.0, m)) ? a : b) = m;
    }
    return std::pow(10.0, a);
}

}  // namespace

ConditionReport check_condition(const ObservationStream& stream, const Interpolant& ip, const Params& params,
                                ConditionVariant variant, const ConditionExtras& extras) {
    if (InterpolantSpec::of(ip).kind != stream.spec().kind)
        throw KindMismatchError("stream and interpolant kinds differ");
    StreamSummary s;
    for (const auto& o : stream.records()) {
        if (o.kind != ip.kind() || o.payload.size() != ip.rank() * static_cast<std::size_t>(o.components))
            throw KindMismatchError("observation does not match the interpolant");
        const SpectralField r = reconstruct(o, ip, FieldKind::Velocity);
        const double h1 = h1_norm(r);
        s.rho = std::max(s.rho, h1);
        s.sup_l2 = std::max(s.sup_l2, l2_norm(r));
        if (ip.kind() == InterpolantKind::Modal)
            s.sup_modal_h1sq = std::max(s.sup_modal_h1sq, h1 * h1);
        else
            s.sup_cell_energy = std::max(s.sup_cell_energy, cell_energy(o));
    }
    ConditionExtras ex = extras;
    if (stream.M0 && !ex.M0) ex.M0 = stream.M0;
    if (is_weakened(variant) && !stream.empty()) s.Kh = compute_Kh(stream, ip, ex.tau0, ex.p);

    ConditionReport rep;
    evaluate(rep, s, ip, params, variant, ex, params.c_interp, params.C_sob);
    ConditionReport probe;
    rep.c_max = largest_passing([&](double c) {
        evaluate(probe, s, ip, params, variant, ex, c, params.C_sob);
        return probe.satisfied;
    });
    rep.C_max = largest_passing([&](double C) {
        evaluate(probe, s, ip, params, variant, ex, params.c_interp, C);
        return probe.satisfied;
    });
    return rep;
}

}  // namespace nudge
