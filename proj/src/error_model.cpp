#include "bellplan/error_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bellplan {

namespace {

void require_odd_distance(int d_s) {
    if (d_s < 3 || d_s % 2 == 0) {
        throw std::invalid_argument("distance must be an odd integer >= 3, got " +
                                    std::to_string(d_s));
    }
}

}  // namespace

void FittedModelParams::validate() const {
    if (!(kappa > 0.0) || !(eta > 0.0) || !(alpha_c > 0.0)) {
        throw std::invalid_argument("fitted model constants must be strictly positive");
    }
    if (!(p_th_bell > 0.0 && p_th_bell < 1.0) || !(p_th_local > 0.0 && p_th_local < 1.0)) {
        throw std::invalid_argument("thresholds must lie in (0, 1)");
    }
}

void NoisePoint::validate(const FittedModelParams& params) const {
    if (!(p_bell >= 0.0 && p_bell < 1.0) || !(p_local >= 0.0 && p_local < 1.0)) {
        throw std::invalid_argument("error rates must lie in [0, 1)");
    }
    if (p_local >= params.p_th_local) {
        throw std::domain_error("p_local >= p_th_local is outside the model domain");
    }
}

double logical_error_rate(int d_s, const NoisePoint& noise,
                          const FittedModelParams& params) {
    require_odd_distance(d_s);
    params.validate();
    noise.validate(params);

    const double a_ratio = noise.p_bell / params.p_th_bell;
    const double b_ratio = noise.p_local / params.p_th_local;
    const double m = 1.0 + params.alpha_c * noise.p_local * params.p_th_bell /
                               (1.0 - std::sqrt(b_ratio));
    const double am2 = a_ratio * m * m;

    const double log_prefactor =
        std::log(params.kappa) + params.eta * std::log(static_cast<double>(d_s) + 1.0);
    const double half = 0.5 * (static_cast<double>(d_s) + 1.0);

    const double log_a = a_ratio > 0.0 ? std::log(a_ratio) : 0.0;
    const double log_b = b_ratio > 0.0 ? std::log(b_ratio) : 0.0;
    const double log_am2 = am2 > 0.0 ? std::log(am2) : 0.0;

    double sum = 0.0;
    if (a_ratio > 0.0) sum += std::exp(log_prefactor + half * log_a);
    if (b_ratio > 0.0) sum += std::exp(log_prefactor + half * log_b);
    if (a_ratio > 0.0 && b_ratio > 0.0) {
        for (int g = 1; g <= d_s; ++g) {
            const double exponent =
                0.5 * g * log_am2 + 0.5 * (d_s + 1 - g) * log_b;
            sum += std::exp(log_prefactor + exponent);
        }
    }
    // The fit can exceed 1 outside its calibration range; clamp so downstream
    // comparisons stay well-defined.
    return std::clamp(sum, 0.0, 1.0);
}

double effective_bell_threshold(double p_local, const FittedModelParams& params) {
    params.validate();
    if (!(p_local >= 0.0) || p_local >= params.p_th_local) {
        throw std::domain_error("effective threshold requires 0 <= p_local < p_th_local");
    }
    const double b_ratio = p_local / params.p_th_local;
    const double m = 1.0 + params.alpha_c * p_local * params.p_th_bell /
                               (1.0 - std::sqrt(b_ratio));
    return params.p_th_bell / (m * m);
}

DistanceResult min_distance(const NoisePoint& noise, double p_l_target,
                            const FittedModelParams& params, int d_max) {
    params.validate();
    noise.validate(params);
    if (!(p_l_target > 0.0 && p_l_target < 1.0)) {
        throw std::invalid_argument("p_l_target must lie in (0, 1)");
    }
    require_odd_distance(d_max);

    DistanceResult result;
    if (noise.p_bell >= effective_bell_threshold(noise.p_local, params)) {
        // p_L no longer decreases with distance; report rather than search.
        result.reason = InfeasibleReason::AboveEffectiveThreshold;
        result.achieved_p_l = logical_error_rate(d_max, noise, params);
        return result;
    }

    auto accept = [&](int d) { return logical_error_rate(d, noise, params) <= p_l_target; };

    if (accept(3)) {
        result.distance = 3;
        result.achieved_p_l = logical_error_rate(3, noise, params);
        return result;
    }

    // Grow an odd upper bracket by doubling, then bisect over odd distances.
    int lo = 3;  // invariant: p_L(lo) > target
    int hi = std::min(5, d_max);
    while (!accept(hi)) {
        if (hi == d_max) {
            result.reason = InfeasibleReason::ExceedsDistanceCap;
            result.achieved_p_l = logical_error_rate(d_max, noise, params);
            return result;
        }
        lo = hi;
        hi = std::min(2 * hi - 1, d_max);
    }
    while (hi - lo > 2) {
        int mid = lo + (hi - lo) / 2;
        if (mid % 2 == 0) ++mid;
        if (accept(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    result.distance = hi;
    result.achieved_p_l = logical_error_rate(hi, noise, params);
    result.extrapolated = hi > kCalibratedDistanceLimit;
    return result;
}

double distance_ratio(int d_dist, int d_raw) {
    require_odd_distance(d_dist);
    require_odd_distance(d_raw);
    if (d_dist > d_raw) {
        throw std::invalid_argument(
            "d_dist > d_raw: distillation never increases the required distance");
    }
    return static_cast<double>(d_dist) / static_cast<double>(d_raw);
}

}  // namespace bellplan
