#pragma once

#include "nudgelab/model.hpp"
#include "nudgelab/series.hpp"
#include "nudgelab/stream.hpp"

namespace nudge {

/// Channels recorded by a twin run, in column order.
const std::vector<std::string>& sync_channels();

struct SyncResult {
    Series series;
    /// Observations of the reference at the recorded times.
    ObservationStream stream;
    FlowState reference;
    NudgedState nudged;
    long steps = 0;
    double M0 = 0.0;
    /// M_h from every observation fed to the nudged system.
    double Mh = 0.0;
    double sup_w_h1 = 0.0;
    /// sup ||w|| <= 1.05 M_h.
    bool velreg_ok = false;
};

/// Advances reference and nudged systems in lockstep from (ref0, 0), observing the reference every step.
SyncResult run_sync_experiment(const FlowState& ref0, const NudgingConfig& cfg, const Params& p, double T,
                               int record_every);

/// Reference run only; records energies and (optionally) the observation stream every stream_every steps.
struct ReferenceResult {
    Series series;
    ObservationStream stream;
    FlowState final_state;
    double M0 = 0.0;
};
ReferenceResult run_reference(const FlowState& ref0, const Params& p, double dt, double T, int record_every,
                              const Interpolant* ip = nullptr, int stream_every = 1);

/// Unit direction in observation space: |reconstruct(d)| = 1.
Observation perturbation_direction(const Interpolant& ip, std::uint64_t seed);

struct DeterminingReport {
    Series series;
    double initial_gap = 0.0;
    double terminal_gap = 0.0;
    double ratio = 0.0;
    double terminal_obs_gap = 0.0;
    double terminal_reference_gap = 0.0;
};

/// Nudges from rest towards v = I_h(u_a) + delta(t) and tracks the P+ gap to (u_a, theta_a).
/// A second reference u_b runs alongside for the observation and state gaps between the two solutions.
DeterminingReport run_determining_experiment(const FlowState& ref_a, const FlowState& ref_b, const NudgingConfig& cfg,
                                             const Params& p, double T, int record_every);

/// Stream-driven assimilation from rest; records w and eta energies.
struct StreamRunResult {
    Series series;
    NudgedState final_state;
};
StreamRunResult run_stream_assimilation(const ObservationStream& v, const NudgingConfig& cfg, const Params& p,
                                        double T, int record_every);

/// P+ norm (|u|^2 + |theta|^2)^{1/2}.
double p_norm(const SpectralField& u, const SpectralField& theta);

}  // namespace nudge
