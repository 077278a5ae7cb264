#pragma once

#include <optional>

namespace bellplan {

/// Constants of the fitted logical-error model for remote lattice surgery,
/// together with the Bell-pair and local error thresholds it was calibrated
/// against. Defaults are the published fit.
struct FittedModelParams {
    double kappa = 5.44e-2;
    double eta = 5.34e-1;
    double alpha_c = 3.15e2;
    double p_th_bell = 0.153;
    double p_th_local = 0.0102;

    void validate() const;  // throws std::invalid_argument
};

/// One operating point of the noise model. p_bell = 1 - F_bell.
struct NoisePoint {
    double p_bell = 0.0;
    double p_local = 0.0;

    void validate(const FittedModelParams& params) const;
};

enum class InfeasibleReason {
    None,
    AboveEffectiveThreshold,  // p_bell at/above p_th_bell / M^2: p_L never decays with distance
    ExceedsDistanceCap,       // no odd distance <= d_max meets the target
};

struct DistanceResult {
    std::optional<int> distance;  // smallest odd d >= 3 meeting the target, when feasible
    double achieved_p_l = 1.0;    // p_L at `distance`, or at the distance cap when infeasible
    InfeasibleReason reason = InfeasibleReason::None;
    bool extrapolated = false;    // distance beyond the fit's calibrated range (> 401)

    bool feasible() const { return distance.has_value(); }
};

inline constexpr int kDefaultDistanceCap = 1001;
inline constexpr int kCalibratedDistanceLimit = 401;

/// Logical error rate per syndrome extraction round of a distance-d_s patch
/// whose seam consumes Bell pairs at error rate noise.p_bell.
///
/// Evaluates
///   kappa (d+1)^eta [ A^{(d+1)/2} + B^{(d+1)/2}
///                     + sum_{g=1}^{d} (A M^2)^{g/2} B^{(d+1-g)/2} ]
/// with A = p_bell/p_th_bell, B = p_local/p_th_local and
/// M = 1 + alpha_c p_local p_th_bell / (1 - sqrt(B)), clamped to [0, 1].
/// The sum is taken term by term; each term is formed in log space so large
/// distances do not underflow intermediate powers.
///
/// Throws std::invalid_argument for even or sub-3 distances and
/// std::domain_error when p_local >= p_th_local (B >= 1 leaves M undefined).
double logical_error_rate(int d_s, const NoisePoint& noise,
                          const FittedModelParams& params = {});

/// Largest p_bell for which the dominant cross term of the model still decays
/// with distance: p_th_bell / M^2. Requires p_local < p_th_local.
double effective_bell_threshold(double p_local,
                                const FittedModelParams& params = {});

/// Smallest odd distance in [3, d_max] with p_L <= p_l_target.
///
/// p_bell at or above the effective threshold reports
/// AboveEffectiveThreshold immediately (p_L is non-decreasing in d there, so
/// no search is run). Otherwise an exponential-doubling bracket is grown from
/// d = 3 and bisected over odd distances.
DistanceResult min_distance(const NoisePoint& noise, double p_l_target,
                            const FittedModelParams& params = {},
                            int d_max = kDefaultDistanceCap);

/// d_dist / d_raw in (0, 1]. Throws if d_dist > d_raw: distillation never
/// increases the required distance, so such inputs are inconsistent.
double distance_ratio(int d_dist, int d_raw);

}  // namespace bellplan
