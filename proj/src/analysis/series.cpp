#include "nudgelab/series.hpp"

#include <algorithm>

#include "nudgelab/core.hpp"

namespace nudge {

Series::Series(std::vector<std::string> channels) : names_(std::move(channels)), cols_(names_.size()) {}

std::size_t Series::index_of(const std::string& name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw MissingInputError("series has no channel '" + name + "'");
    return static_cast<std::size_t>(it - names_.begin());
}

bool Series::has(const std::string& name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

const std::vector<double>& Series::column(const std::string& name) const { return cols_[index_of(name)]; }
std::vector<double>& Series::column(const std::string& name) { return cols_[index_of(name)]; }

void Series::add_channel(const std::string& name, std::vector<double> values) {
    if (has(name)) throw ShapeError("channel '" + name + "' already exists");
    if (values.size() != t_.size()) throw ShapeError("channel length does not match timestamps");
    names_.push_back(name);
    cols_.push_back(std::move(values));
}

void Series::append(double t, const std::vector<double>& values) {
    if (values.size() != names_.size()) throw ShapeError("row length does not match channel count");
    t_.push_back(t);
    for (std::size_t i = 0; i < values.size(); ++i) cols_[i].push_back(values[i]);
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& t, const std::vector<double>& y) {
    if (t.size() != y.size()) throw ShapeError("trapezoid needs equal-length inputs");
    std::vector<double> out(t.size(), 0.0);
    for (std::size_t i = 1; i < t.size(); ++i) out[i] = out[i - 1] + 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
    return out;
}

TrapezoidIntegral::TrapezoidIntegral(std::vector<double> t, std::vector<double> y)
    : t_(std::move(t)), y_(std::move(y)), F_(cumulative_trapezoid(t_, y_)) {
    if (t_.empty()) throw MissingInputError("integral needs at least one sample");
}

double TrapezoidIntegral::operator()(double x) const {
    if (x <= t_.front()) return 0.0;
    if (x >= t_.back()) return F_.back();
    const std::size_t j = static_cast<std::size_t>(std::upper_bound(t_.begin(), t_.end(), x) - t_.begin()) - 1;
    const double s = (x - t_[j]) / (t_[j + 1] - t_[j]);
    const double yx = (1.0 - s) * y_[j] + s * y_[j + 1];
    return F_[j] + 0.5 * (x - t_[j]) * (y_[j] + yx);
}

}  // namespace nudge
