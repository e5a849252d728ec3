#include <algorithm>
#include <cmath>
#include <limits>

#include "nudgelab/analysis.hpp"

namespace nudge {

GronwallReport gronwall_check(const std::vector<double>& t_in, const std::vector<double>& y, double mu,
                              double quad_tol) {
    if (t_in.size() != y.size() || t_in.size() < 2) throw ShapeError("gronwall check needs matching samples");
    if (!(mu > 0.0)) throw DomainError("mu must be positive");
    std::vector<double> t(t_in.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = t_in[i] - t_in.front();
    double dmax = 0.0, ymax = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (y[i] < 0.0) throw DomainError("gronwall check needs a nonnegative series");
        ymax = std::max(ymax, y[i]);
        if (i > 0) {
            if (!(t[i] > t[i - 1])) throw DomainError("sample times must increase");
            dmax = std::max(dmax, t[i] - t[i - 1]);
        }
    }
    if (mu * dmax > 0.05 * (1.0 + 1e-9)) throw DomainError("need at least 20 samples per 1/mu");

    GronwallReport rep;
    rep.tolerance = quad_tol >= 0.0 ? quad_tol : std::max(1e-12, 0.25 * (mu * dmax) * (mu * dmax));
    const TrapezoidIntegral P(t, y);
    const auto& F = P.cumulative();
    // Differences of the running integral lose about n ulps of ymax.
    const double abs_floor = std::numeric_limits<double>::epsilon() * static_cast<double>(t.size()) * ymax;

    rep.hypothesis_ok = true;
    for (std::size_t i = 0; i < t.size() && rep.hypothesis_ok; ++i) {
        for (std::size_t j = i + 1; j < t.size(); ++j) {
            const double excess = y[j] + mu * (F[j] - F[i]) - y[i];
            if (excess > rep.tolerance * y[i] + abs_floor) {
                rep.hypothesis_ok = false;
                rep.violation = std::make_pair(t_in[i], t_in[j]);
                break;
            }
        }
    }
    if (!rep.hypothesis_ok) return rep;

    rep.conclusion_checked = true;
    rep.conclusion_ok = true;
    rep.corollary_ok = true;
    const double scale = ymax > 0.0 ? ymax : 1.0;
    const double I0 = P(1.0 / mu);
    for (std::size_t j = 0; j < t.size(); ++j) {
        if (t[j] >= 1.0 / mu) {
            const double bound = mu * std::exp(-mu * (t[j] - 1.0 / mu)) * I0;
            const double m = (bound - y[j]) / scale;
            rep.worst_margin = std::min(rep.worst_margin, m);
            if (m < -rep.tolerance) rep.conclusion_ok = false;
        }
        if (t[j] >= 2.0 / mu) {
            const double half = 0.5 * t[j];
            const double bound = mu * std::exp(-mu * half) * P.between(half - 1.0 / mu, half);
            const double m = (bound - y[j]) / scale;
            rep.worst_corollary_margin = std::min(rep.worst_corollary_margin, m);
            if (m < -rep.tolerance) rep.corollary_ok = false;
        }
    }
    return rep;
}

}  // namespace nudge
