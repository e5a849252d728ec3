#pragma once

#include <string>

#include "nudgelab/model.hpp"

namespace nudge {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
    Model model = Model::Boussinesq;
    FlowState state;
};

/// "NDGL", version, grid descriptor, model tag, time, then little-endian f64 coefficients (component-major)
/// for u, theta and the Adams-Bashforth history.
void save_checkpoint(const Checkpoint& c, const std::string& path);
/// Throws FormatError on a bad magic, a future version or a truncated payload.
Checkpoint load_checkpoint(const std::string& path);

}  // namespace nudge
