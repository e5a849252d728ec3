#pragma once

#include <string>
#include <vector>

namespace nudge {

/// Named scalar channels sharing one timestamp column.
class Series {
public:
    Series() = default;
    explicit Series(std::vector<std::string> channels);

    const std::vector<std::string>& channels() const { return names_; }
    const std::vector<double>& times() const { return t_; }
    std::size_t size() const { return t_.size(); }
    bool empty() const { return t_.empty(); }

    bool has(const std::string& name) const;
    /// Throws MissingInputError for unknown channels.
    const std::vector<double>& column(const std::string& name) const;
    std::vector<double>& column(const std::string& name);
    /// Adds a channel; throws if the name exists or the length differs from the timestamps.
    void add_channel(const std::string& name, std::vector<double> values);

    /// Appends one row; values follow the channel order.
    void append(double t, const std::vector<double>& values);

private:
    std::size_t index_of(const std::string& name) const;

    std::vector<std::string> names_;
    std::vector<double> t_;
    std::vector<std::vector<double>> cols_;
};

/// Cumulative trapezoid integral of y over t, starting at 0.
std::vector<double> cumulative_trapezoid(const std::vector<double>& t, const std::vector<double>& y);

/// Exact primitive of the piecewise-linear interpolant of (t, y); constant outside the samples.
class TrapezoidIntegral {
public:
    TrapezoidIntegral(std::vector<double> t, std::vector<double> y);
    /// int_{t.front()}^{x}
    double operator()(double x) const;
    double between(double a, double b) const { return (*this)(b) - (*this)(a); }
    const std::vector<double>& cumulative() const { return F_; }

private:
    std::vector<double> t_, y_, F_;
};

}  // namespace nudge
