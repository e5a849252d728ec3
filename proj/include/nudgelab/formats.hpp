#pragma once

#include <string>

#include <json.hpp>

#include "nudgelab/analysis.hpp"
#include "nudgelab/condition.hpp"
#include "nudgelab/series.hpp"
#include "nudgelab/stream.hpp"

namespace nudge {

using json = nlohmann::json;

/// Header row `t,<channels...>`, one row per timestamp, 17 significant digits.
void write_csv(const Series& s, const std::string& path);
std::string to_csv(const Series& s);
/// Throws FormatError on empty input, ragged rows or non-numeric cells.
Series read_csv(const std::string& path);
Series parse_csv(const std::string& text);

void write_json(const json& j, const std::string& path);
json read_json(const std::string& path);

json to_json(const ConditionReport& r);
json to_json(const DecayFit& f);
json to_json(const EnergyResiduals& r);
json to_json(const SpaceNorms& n);
json to_json(const InterpolantSpec& s);
InterpolantSpec spec_from_json(const json& j);

/// Binary "NDGO" records plus a `<path>.json` sidecar carrying the interpolant spec and M0.
inline constexpr std::uint32_t kStreamVersion = 1;
void save_stream(const ObservationStream& s, const std::string& path);
ObservationStream load_stream(const std::string& path);

}  // namespace nudge
