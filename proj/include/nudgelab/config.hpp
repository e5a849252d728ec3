#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nudgelab/condition.hpp"
#include "nudgelab/model.hpp"

namespace nudge {

/// One experiment, read from a flat `key = value` file. Unknown keys are rejected.
struct ExperimentConfig {
    Model model = Model::Boussinesq;
    Geometry geometry = Geometry::Torus;
    std::vector<int> resolution{128, 128};
    /// Empty selects sqrt(2)/4 on every axis.
    std::vector<double> lengths;
    double nu = 1e-2;
    double kappa = 1e-2;
    /// Body force |f|^2 and band limit; zero energy means no force.
    double force_energy = 0.0;
    double force_kmax = 4.0;
    double c = 1e-3;
    double C = 1.0;
    /// Volume M_h constant; unset means c^2.
    std::optional<double> C_cell;

    InterpolantKind interpolant = InterpolantKind::Modal;
    int modes = 8;
    std::array<int, 3> cells{8, 8, 1};

    /// Empty means auto: geometric mean of the admissible interval.
    std::optional<double> mu;
    ConditionVariant variant = ConditionVariant::Sync;
    double p = 3.0;
    double tau0 = 1.0;

    double dt = 8e-4;
    double T = 1.0;
    int record_every = 10;
    std::uint64_t seed = 1;
    /// Initial |u|^2 and |theta|^2; band limit defaults to resolution / 8.
    double energy = 1e-5;
    std::optional<double> init_kmax;
    /// Terminal-to-initial error ratio required by the decay verdict.
    double decay_target = 1e-6;

    std::string out = "out";
    std::optional<std::string> stream;
    std::optional<std::string> restart;
    std::string sweep_key;
    std::vector<std::string> sweep_values;

    GridPtr make_grid() const;
    Params params(const GridPtr& grid) const;
    std::shared_ptr<const Interpolant> make_interpolant(const GridPtr& grid) const;
    /// Seeded band-limited initial state (or the restart checkpoint when set).
    FlowState initial_state(const GridPtr& grid) const;
    ConditionExtras extras() const;
};

/// Sets one key from its text value; throws ConfigError on unknown keys or bad values.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);
/// Canonical text form; parse_config(to_text(c)) reproduces c.
std::string to_text(const ExperimentConfig& cfg);

}  // namespace nudge
