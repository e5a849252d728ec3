#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nudgelab/experiments.hpp"

namespace nudge {

struct DecayFit {
    double rate = 0.0;
    double t0 = 0.0;
    double t1 = 0.0;
    /// RMS of the log-space residual.
    double residual = 0.0;
    /// Values at or below this level were treated as floor.
    double floor = 0.0;
    std::size_t samples = 0;
};

/// Least-squares line through log(channel) from the global maximum to the floor (floor_factor * terminal value).
/// Throws DomainError for nonpositive values or windows with fewer than 5 samples.
DecayFit fit_decay(const Series& series, const std::string& channel, double floor_factor = 100.0);
DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& y, double floor_factor = 100.0);

struct WindowedDecay {
    /// Smallest decay rate over sliding windows of `window` samples before the floor.
    double min_rate = 0.0;
    double t_at_min = 0.0;
    std::size_t windows = 0;
    bool monotone = false;
};
/// Sliding least-squares rates on log(channel); windows whose samples reach floor_value are skipped.
WindowedDecay windowed_decay(const Series& series, const std::string& channel, double required_rate,
                             double floor_value = 0.0, std::size_t window = 5);

struct GronwallReport {
    bool hypothesis_ok = false;
    /// First (s, t) pair violating the hypothesis.
    std::optional<std::pair<double, double>> violation;
    bool conclusion_checked = false;
    bool conclusion_ok = false;
    bool corollary_ok = false;
    /// min over checked t of (bound - y(t)) / max y; infinity when nothing was checked.
    double worst_margin = std::numeric_limits<double>::infinity();
    double worst_corollary_margin = std::numeric_limits<double>::infinity();
    double tolerance = 0.0;
};

/// Checks y(t) + mu int_s^t y <= y(s) on all sample pairs, then the decay conclusion for t >= 1/mu
/// and the halved-window corollary for t >= 2/mu. Times are taken relative to t.front().
/// quad_tol < 0 selects a tolerance from the sample spacing.
GronwallReport gronwall_check(const std::vector<double>& t, const std::vector<double>& y, double mu,
                              double quad_tol = -1.0);

/// Residuals of the energy balances recorded by a twin or reference run.
struct EnergyResiduals {
    Series residuals;
    double max_rel_u = 0.0;
    double max_rel_theta = 0.0;
    double max_rel_w = 0.0;
    double max_rel_eta = 0.0;
    double max_rel() const;
};
/// Integrals recomputed by trapezoid from the instantaneous channels. Needs nu and kappa from params.
EnergyResiduals energy_residuals(const Series& series, const Params& params);

/// Largest relative deviation between each recorded acc_X channel and the trapezoid integral of X.
double accumulator_deviation(const Series& series);

/// sup over window starts s of int_s^{min(s+width, end)} g, windows starting at every sample.
double sliding_window_sup(const std::vector<double>& t, const std::vector<double>& g, double width = 1.0);

struct SpaceNorms {
    double x_norm = 0.0;        ///< sup ||v||
    double z_sup_l2sq = 0.0;    ///< sup |u|^2
    double z_window_sup = 0.0;  ///< sup int_s^{s+1} ||u||^2
    double z_norm = 0.0;
    double p_sup = 0.0;         ///< sup (|u|^2 + |theta|^2)^{1/2}
    double p_terminal = 0.0;
};
/// Uses channels <u>_l2sq, <u>_h1sq and optionally <theta>_l2sq of a series.
SpaceNorms space_norms(const Series& series, const std::string& u = "u", const std::string& theta = "theta");
/// X norm of a stream: sup ||reconstruct(v)||.
double x_norm(const ObservationStream& stream, const Interpolant& ip);

struct LipschitzReport {
    double sup_wbar_l2sq = 0.0;
    double sup_vbar_l2sq = 0.0;
    double bound_n1 = 0.0;           ///< 8 sup |v1 - v2|^2
    double sup_window_wbar_h1sq = 0.0;
    double bound_n2 = 0.0;           ///< 4 mu / nu sup |v1 - v2|^2
    double sup_etabar_l2sq = 0.0;
    double bound_eta = 0.0;          ///< 4 mu / (kappa lambda1) sup |v1 - v2|^2
    double terminal_P_gap = 0.0;
    bool verdict_n1 = false;
    bool verdict_n2 = false;
    bool verdict_eta = false;
    double margin_n1 = 0.0;          ///< bound / measured
    double margin_n2 = 0.0;
    double tolerance = 0.05;
    bool verdict() const { return verdict_n1 && verdict_n2; }
};

/// Runs the nudged system from rest on both streams in lockstep over [start, start + T].
LipschitzReport lipschitz_test(const ObservationStream& v1, const ObservationStream& v2, const NudgingConfig& cfg,
                               const Params& p, double T, int record_every = 1, double tolerance = 0.05);

struct ShiftReport {
    double sigma = 0.0;
    double transient = 0.0;
    double max_rel_error = 0.0;
    std::size_t compared = 0;
    bool verdict = false;
};

/// Compares W(tau_sigma v)(t) with W(v)(t + sigma) for t >= transient (default 5 / alpha).
ShiftReport shift_equivariance_test(const ObservationStream& v, double sigma, const NudgingConfig& cfg,
                                    const Params& p, double T, double alpha, int record_every = 10,
                                    double tolerance = 0.05);

}  // namespace nudge
