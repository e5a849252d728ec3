#pragma once

#include <map>
#include <optional>
#include <string>

#include "nudgelab/model.hpp"
#include "nudgelab/stream.hpp"

namespace nudge {

/// Which resolution length and mu-range apply.
enum class ConditionVariant { Weak, Strong, Sync, Attractor, Criterion, Weakened, Criterion1 };

std::string to_string(ConditionVariant v);
ConditionVariant condition_variant_from_string(const std::string& s);

/// Inputs needed by some variants beyond (nu, kappa, c, C, lambda1).
struct ConditionExtras {
    std::optional<double> S2;      ///< temperature L4 bound
    std::optional<double> f_norm;  ///< |f|
    std::optional<double> M0;      ///< sup |u|
    std::optional<double> rho;     ///< bound on the observation norm sup ||v||
    std::optional<double> mu_override;
    double tau0 = 1.0;
    double p = 3.0;
};

/// Closed interval [lo, hi]; empty when lo > hi or the resolution is too coarse.
struct MuInterval {
    double lo = 0.0;
    double hi = 0.0;
    bool empty = false;
    /// Human-readable failing inequality when empty.
    std::string violated;

    double geometric_mean() const;
};

/// Bound on the temperature in L^{2p}: C p M0 / ((2p - 1) lambda1)^{1/(2p)}.
double temperature_bound_S(double p, double C, double M0, double lambda1);

/// Quantity inside the sup of M_h for one observation (before the factor 32).
/// Modal: ||P_N u||^2. Volume kinds: C h sum |u_alpha|^2.
double mh_functional(const Observation& obs, const Interpolant& ip, double C);
double compute_Mh(const ObservationStream& stream, const Interpolant& ip, double C);
/// sup over windows of (int_t^{t+tau0} ||I_h u||^{2p})^{1/(2p)}.
double compute_Kh(const ObservationStream& stream, const Interpolant& ip, double tau0, double p);

double h0_variant(const Params& p, double lambda1, ConditionVariant v, const ConditionExtras& extras);

/// mu-range for the M_h based variants (Weak ignores M_h).
MuInterval mu_range(double Mh, double h, double h0, const Params& p, ConditionVariant v = ConditionVariant::Sync);

struct WeakenedRange {
    MuInterval interval;
    /// Weakened M_h evaluated at the selected mu.
    double Mh = 0.0;
    double q = 0.0;
};
/// Interval built on K_h; throws DomainError for p <= 2.
WeakenedRange mu_range_weakened(double Kh, double h, double h0, double p_exp, double tau0, const Params& params,
                                double lambda1, double f_norm = 0.0);

struct ConditionReport {
    ConditionVariant variant = ConditionVariant::Sync;
    double h = 0.0;
    double h0 = 0.0;
    std::map<std::string, double> h0_variants;
    double Mh = 0.0;
    double Kh = 0.0;
    double tau0 = 1.0;
    double p = 3.0;
    double q = 1.5;
    MuInterval mu_interval;
    double mu_selected = 0.0;
    bool mu_overridden = false;
    bool mu_in_interval = false;
    double alpha = 0.0;
    bool satisfied = false;
    /// Criterion variants: the observed window is asserted regular.
    std::optional<bool> regularity_verdict;
    std::string violated;
    double c_used = 1.0;
    double C_used = 1.0;
    double S2 = 0.0;
    double M0 = 0.0;
    bool M0_measured = false;
    double rho = 0.0;
    double lambda1 = 0.0;
    /// Largest constants for which the condition still holds (infinity when unbounded, 0 when never).
    double c_max = 0.0;
    double C_max = 0.0;
};

ConditionReport check_condition(const ObservationStream& stream, const Interpolant& ip, const Params& params,
                                ConditionVariant variant, const ConditionExtras& extras = {});

}  // namespace nudge
