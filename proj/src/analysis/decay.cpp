#include <algorithm>
#include <cmath>

#include "nudgelab/analysis.hpp"

namespace nudge {

namespace {

struct Line {
    double slope = 0.0;
    double rms = 0.0;
};

Line fit_log_line(const std::vector<double>& t, const std::vector<double>& y, std::size_t a, std::size_t b) {
    const double m = static_cast<double>(b - a + 1);
    double tm = 0.0, lm = 0.0;
    for (std::size_t i = a; i <= b; ++i) {
        tm += t[i];
        lm += std::log(y[i]);
    }
    tm /= m;
    lm /= m;
    double stt = 0.0, stl = 0.0;
    for (std::size_t i = a; i <= b; ++i) {
        stt += (t[i] - tm) * (t[i] - tm);
        stl += (t[i] - tm) * (std::log(y[i]) - lm);
    }
    Line out;
    out.slope = stt > 0.0 ? stl / stt : 0.0;
    double r2 = 0.0;
    for (std::size_t i = a; i <= b; ++i) {
        const double r = std::log(y[i]) - (lm + out.slope * (t[i] - tm));
        r2 += r * r;
    }
    out.rms = std::sqrt(r2 / m);
    return out;
}

}  // namespace

DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& y, double floor_factor) {
    if (t.size() != y.size()) throw ShapeError("times and values differ in length");
    const std::size_t n = y.size();
    if (n < 5) throw DomainError("decay fit needs at least 5 samples");
    const std::size_t imax = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
    const std::size_t i0 = std::min(imax + 1, n - 1);
    DecayFit fit;
    fit.floor = floor_factor * y.back();
    std::size_t i1 = n - 1;
    if (fit.floor < y[i0]) {
        while (i1 > i0 && !(y[i1] > fit.floor)) --i1;
    } else {
        fit.floor = 0.0;
    }
    if (i1 < i0 || i1 - i0 + 1 < 5) throw DomainError("decay window shorter than 5 samples");
    for (std::size_t i = i0; i <= i1; ++i)
        if (!(y[i] > 0.0)) throw DomainError("decay fit needs positive values on the window");
    const Line l = fit_log_line(t, y, i0, i1);
    fit.rate = -l.slope;
    fit.residual = l.rms;
    fit.t0 = t[i0];
    fit.t1 = t[i1];
    fit.samples = i1 - i0 + 1;
    return fit;
}

DecayFit fit_decay(const Series& series, const std::string& channel, double floor_factor) {
    return fit_decay(series.times(), series.column(channel), floor_factor);
}

WindowedDecay windowed_decay(const Series& series, const std::string& channel, double required_rate,
                             double floor_value, std::size_t window) {
    const auto& t = series.times();
    const auto& y = series.column(channel);
    WindowedDecay out;
    out.min_rate = std::numeric_limits<double>::infinity();
    if (window < 2 || y.size() < window) return out;
    const std::size_t i0 = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
    for (std::size_t a = i0; a + window <= y.size(); ++a) {
        bool usable = true;
        for (std::size_t i = a; i < a + window; ++i)
            if (!(y[i] > floor_value)) usable = false;
        if (!usable) break;
        const double r = -fit_log_line(t, y, a, a + window - 1).slope;
        ++out.windows;
        if (r < out.min_rate) {
            out.min_rate = r;
            out.t_at_min = t[a];
        }
    }
    out.monotone = out.windows > 0 && out.min_rate >= required_rate;
    return out;
}

}  // namespace nudge
