#include "nudgelab/stream.hpp"

#include <algorithm>

namespace nudge {

InterpolantSpec InterpolantSpec::of(const Interpolant& ip) {
    InterpolantSpec s;
    s.kind = ip.kind();
    if (ip.kind() == InterpolantKind::Modal) {
        s.modes = ip.requested_modes();
    } else {
        s.cells = ip.partition().cells;
    }
    return s;
}

Interpolant InterpolantSpec::build(const GridPtr& grid) const {
    switch (kind) {
        case InterpolantKind::Modal: return Interpolant::modal(grid, modes);
        case InterpolantKind::Volume: return Interpolant::volume(grid, cells);
        case InterpolantKind::SmoothedVolume: return Interpolant::smoothed_volume(grid, cells);
    }
    throw TypeError("unknown interpolant kind");
}

double ObservationStream::start() const {
    if (records_.empty()) throw MissingInputError("empty observation stream");
    return records_.front().t;
}

double ObservationStream::end() const {
    if (records_.empty()) throw MissingInputError("empty observation stream");
    return records_.back().t;
}

void ObservationStream::append(Observation obs) {
    if (obs.kind != spec_.kind) throw KindMismatchError("observation kind differs from the stream");
    if (!records_.empty()) {
        if (!(obs.t > records_.back().t)) throw DomainError("stream timestamps must increase strictly");
        if (obs.payload.size() != records_.back().payload.size()) throw ShapeError("observation payload size changed");
    }
    records_.push_back(std::move(obs));
}

Observation ObservationStream::at(double t) const {
    if (records_.empty()) throw MissingInputError("empty observation stream");
    const double tol = 1e-9 * std::max(1.0, std::abs(t));
    if (t < records_.front().t - tol || t > records_.back().t + tol)
        throw MissingInputError("time outside the observation span");
    auto it = std::lower_bound(records_.begin(), records_.end(), t,
                               [](const Observation& o, double x) { return o.t < x; });
    if (it == records_.end()) return records_.back();
    if (std::abs(it->t - t) <= tol || it == records_.begin()) {
        Observation o = *it;
        o.t = t;
        return o;
    }
    const Observation& a = *(it - 1);
    const Observation& b = *it;
    const double s = (t - a.t) / (b.t - a.t);
    Observation o = a;
    o.t = t;
    for (std::size_t i = 0; i < o.payload.size(); ++i) o.payload[i] = (1.0 - s) * a.payload[i] + s * b.payload[i];
    return o;
}

}  // namespace nudge
