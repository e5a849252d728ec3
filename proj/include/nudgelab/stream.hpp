#pragma once

#include <array>
#include <optional>
#include <vector>

#include "nudgelab/interpolant.hpp"

namespace nudge {

/// Minimal description from which an interpolant is rebuilt on a grid.
struct InterpolantSpec {
    InterpolantKind kind = InterpolantKind::Modal;
    int modes = 0;
    std::array<int, 3> cells{1, 1, 1};

    static InterpolantSpec of(const Interpolant& ip);
    Interpolant build(const GridPtr& grid) const;
    bool operator==(const InterpolantSpec&) const = default;
};

/// Time-ordered observations of one interpolant kind.
class ObservationStream {
public:
    ObservationStream() = default;
    explicit ObservationStream(InterpolantSpec spec) : spec_(spec) {}

    const InterpolantSpec& spec() const { return spec_; }
    const std::vector<Observation>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }
    double start() const;
    double end() const;

    /// Throws KindMismatchError on a foreign kind and DomainError on a non-increasing timestamp.
    void append(Observation obs);
    /// Linear interpolation between the bracketing records; throws MissingInputError outside the span.
    Observation at(double t) const;

    /// sup_t |u(t)| of the observed flow when known (written by the producer).
    std::optional<double> M0;

private:
    InterpolantSpec spec_;
    std::vector<Observation> records_;
};

}  // namespace nudge
