#include <algorithm>
#include <cmath>

#include "nudgelab/analysis.hpp"

namespace nudge {

namespace {

struct Balance {
    std::vector<double> res;
    double max_rel = 0.0;
};

/// |x(t)|^2 + 2 d int ||x||^2 - |x(0)|^2 - sum of int sources, relative to the largest left-hand side.
Balance balance(const std::vector<double>& t, const std::vector<double>& l2sq, const std::vector<double>& h1sq,
                double diff, const std::vector<const std::vector<double>*>& sources) {
    const auto dissip = cumulative_trapezoid(t, h1sq);
    std::vector<std::vector<double>> src;
    for (const auto* s : sources) src.push_back(cumulative_trapezoid(t, *s));
    Balance b;
    b.res.resize(t.size());
    double scale = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double lhs = l2sq[i] + 2.0 * diff * dissip[i];
        double rhs = l2sq[0];
        double src_mag = 0.0;
        for (const auto& s : src) {
            rhs += s[i];
            src_mag += std::abs(s[i]);
        }
        b.res[i] = lhs - rhs;
        scale = std::max({scale, lhs, l2sq[0], src_mag});
    }
    if (scale > 0.0)
        for (double r : b.res) b.max_rel = std::max(b.max_rel, std::abs(r) / scale);
    for (auto& r : b.res) r = scale > 0.0 ? r / scale : 0.0;
    return b;
}

}  // namespace

double EnergyResiduals::max_rel() const { return std::max({max_rel_u, max_rel_theta, max_rel_w, max_rel_eta}); }

EnergyResiduals energy_residuals(const Series& s, const Params& p) {
    const auto& t = s.times();
    EnergyResiduals out;
    std::vector<std::pair<std::string, std::vector<double>>> cols;
    const bool bous = p.model == Model::Boussinesq;
    if (s.has("u_l2sq") && s.has("u_h1sq") && s.has("src_u")) {
        Balance b = balance(t, s.column("u_l2sq"), s.column("u_h1sq"), p.nu, {&s.column("src_u")});
        out.max_rel_u = b.max_rel;
        cols.emplace_back("res_u", std::move(b.res));
        if (bous && s.has("theta_l2sq") && s.has("theta_h1sq")) {
            Balance c = balance(t, s.column("theta_l2sq"), s.column("theta_h1sq"), p.kappa, {&s.column("src_u")});
            out.max_rel_theta = c.max_rel;
            cols.emplace_back("res_theta", std::move(c.res));
        }
    }
    if (s.has("w_l2sq") && s.has("w_h1sq") && s.has("src_w") && s.has("nudge_w")) {
        Balance b = balance(t, s.column("w_l2sq"), s.column("w_h1sq"), p.nu, {&s.column("src_w"), &s.column("nudge_w")});
        out.max_rel_w = b.max_rel;
        cols.emplace_back("res_w", std::move(b.res));
        if (bous && s.has("eta_l2sq") && s.has("eta_h1sq")) {
            Balance c = balance(t, s.column("eta_l2sq"), s.column("eta_h1sq"), p.kappa, {&s.column("src_w")});
            out.max_rel_eta = c.max_rel;
            cols.emplace_back("res_eta", std::move(c.res));
        }
    }
    if (cols.empty()) throw MissingInputError("series carries no energy channels");
    std::vector<std::string> names;
    for (const auto& c : cols) names.push_back(c.first);
    out.residuals = Series(names);
    for (std::size_t i = 0; i < t.size(); ++i) {
        std::vector<double> row;
        for (const auto& c : cols) row.push_back(c.second[i]);
        out.residuals.append(t[i], row);
    }
    return out;
}

double accumulator_deviation(const Series& s) {
    double worst = 0.0;
    bool any = false;
    for (const auto& name : s.channels()) {
        if (name.rfind("acc_", 0) != 0) continue;
        const std::string base = name.substr(4);
        if (!s.has(base)) continue;
        any = true;
        const auto re = cumulative_trapezoid(s.times(), s.column(base));
        const auto& acc = s.column(name);
        double scale = 0.0, dev = 0.0;
        for (std::size_t i = 0; i < re.size(); ++i) {
            scale = std::max(scale, std::abs(re[i]));
            dev = std::max(dev, std::abs(re[i] - acc[i]));
        }
        worst = std::max(worst, scale > 0.0 ? dev / scale : dev);
    }
    if (!any) throw MissingInputError("series carries no accumulator channels");
    return worst;
}

double sliding_window_sup(const std::vector<double>& t, const std::vector<double>& g, double width) {
    if (t.empty()) throw MissingInputError("empty series");
    if (!(width > 0.0)) throw DomainError("window width must be positive");
    const TrapezoidIntegral I(t, g);
    double best = 0.0;
    for (double s : t) best = std::max(best, I.between(s, std::min(s + width, t.back())));
    return best;
}

SpaceNorms space_norms(const Series& s, const std::string& u, const std::string& theta) {
    if (s.empty()) throw MissingInputError("empty series");
    const auto& l2 = s.column(u + "_l2sq");
    const auto& h1 = s.column(u + "_h1sq");
    const std::vector<double>* th = s.has(theta + "_l2sq") ? &s.column(theta + "_l2sq") : nullptr;
    SpaceNorms n;
    for (std::size_t i = 0; i < s.size(); ++i) {
        n.x_norm = std::max(n.x_norm, std::sqrt(h1[i]));
        n.z_sup_l2sq = std::max(n.z_sup_l2sq, l2[i]);
        const double pn = std::sqrt(l2[i] + (th ? (*th)[i] : 0.0));
        n.p_sup = std::max(n.p_sup, pn);
        n.p_terminal = pn;
    }
    n.z_window_sup = sliding_window_sup(s.times(), h1, 1.0);
    n.z_norm = std::sqrt(n.z_sup_l2sq + n.z_window_sup);
    return n;
}

double x_norm(const ObservationStream& stream, const Interpolant& ip) {
    if (stream.empty()) throw MissingInputError("empty stream");
    double best = 0.0;
    for (const auto& o : stream.records()) best = std::max(best, h1_norm(reconstruct(o, ip, FieldKind::Velocity)));
    return best;
}

}  // namespace nudge
