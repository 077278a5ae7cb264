#include "bellplan/temporal.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace bellplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_trace(const std::vector<int>& trace) {
    std::ostringstream os;
    for (size_t i = 0; i < trace.size(); ++i) {
        if (i) os << " -> ";
        os << trace[i];
    }
    return os.str();
}

}  // namespace

void LinkParams::validate() const {
    if (!(lambda_hz > 0.0)) throw std::invalid_argument("lambda_hz must be positive");
    if (!(tau_coh_s > 0.0)) throw std::invalid_argument("tau_coh_s must be positive");
    if (!(tau_se_s > 0.0)) throw std::invalid_argument("tau_se_s must be positive");
    if (!(mu >= 1.0)) throw std::invalid_argument("mu must be >= 1");
    if (tau_reset_s < 0.0) throw std::invalid_argument("tau_reset_s must be >= 0");
    if (interfaces > 0 && attempt_rate_hz > 0.0 && p_herald > 0.0) {
        const double implied = interfaces * attempt_rate_hz * p_herald;
        if (std::abs(implied - lambda_hz) > 1e-9 * std::max(implied, lambda_hz)) {
            throw std::invalid_argument(
                "lambda_hz does not equal interfaces * attempt_rate * p_herald");
        }
    }
}

CollectionStats collection_time_stats(int n, double lambda_hz) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (!(lambda_hz > 0.0)) throw std::invalid_argument("lambda_hz must be positive");
    CollectionStats s{};
    s.mean = n / lambda_hz;
    s.variance = n / (lambda_hz * lambda_hz);
    s.t99 = s.mean * (1.0 + kPhiInv99 / std::sqrt(static_cast<double>(n)));
    return s;
}

double decayed_fidelity(double f0, double t_s, double tau_coh_s,
                        bool exact_depolarizing) {
    if (t_s < 0.0) throw std::invalid_argument("t must be >= 0");
    if (!(tau_coh_s > 0.0)) throw std::invalid_argument("tau_coh must be positive");
    const double decay = std::exp(-t_s / tau_coh_s);
    if (exact_depolarizing) return 0.25 + (f0 - 0.25) * decay;
    return f0 * decay;
}

double discard_time(double f0, double f_discard, double tau_coh_s) {
    if (!(f_discard > 0.0)) throw std::invalid_argument("f_discard must be positive");
    if (!(tau_coh_s > 0.0)) throw std::invalid_argument("tau_coh must be positive");
    if (f0 <= f_discard) return 0.0;  // already at or past the cutoff
    return tau_coh_s * std::log(f0 / f_discard);
}

bool otf_condition(double lambda_hz, double t_round_s, double c_round) {
    if (!(lambda_hz > 0.0) || !(t_round_s > 0.0) || !(c_round > 0.0)) {
        throw std::invalid_argument("otf_condition needs positive arguments");
    }
    const double n_gen = lambda_hz * t_round_s;
    return n_gen - kPhiInv99 * std::sqrt(n_gen) >= c_round;
}

OtfFidelityBound otf_stored_fidelity_bound(double f0, double t_round_s,
                                           double tau_coh_s) {
    OtfFidelityBound b{};
    b.nu = t_round_s / tau_coh_s;
    b.bound = decayed_fidelity(f0, t_round_s, tau_coh_s);
    b.first_order = f0 * (1.0 - b.nu);
    return b;
}

double strategy1_stored_fidelity(double f0, double c_round, double eta_link) {
    if (!(eta_link > 0.0)) throw std::invalid_argument("eta_link must be positive");
    return f0 * std::exp(-c_round / eta_link);
}

double strategy2_stored_fidelity(double f0, int d_s, double c_round,
                                 double eta_link) {
    if (!(eta_link > 0.0)) throw std::invalid_argument("eta_link must be positive");
    return f0 * std::exp(-static_cast<double>(d_s) * c_round / eta_link);
}

double idle_error(double c_round, double mu, double eta_link) {
    if (!(mu >= 1.0)) throw std::invalid_argument("mu must be >= 1");
    if (!(eta_link > 0.0)) throw std::invalid_argument("eta_link must be positive");
    return -std::expm1(-c_round / (mu * eta_link));
}

std::string to_string(RegimeKind kind) {
    switch (kind) {
        case RegimeKind::OnTheFly: return "on_the_fly";
        case RegimeKind::NoExpire: return "no_expire";
        case RegimeKind::Infeasible: return "infeasible";
    }
    return "?";
}

std::string to_string(Strategy strategy) {
    return strategy == Strategy::RoundByRound ? "round_by_round" : "pre_buffered";
}

SolveResult self_consistent_distance(Strategy strategy, const ProtocolSpec* spec,
                                     const LinkParams& link, double f0,
                                     double p_phys, double p_l_target,
                                     const SolveConfig& config) {
    link.validate();
    if (!(f0 > 0.0 && f0 <= 1.0)) throw std::invalid_argument("f0 must lie in (0, 1]");
    if (p_phys >= config.params.p_th_local) {
        throw std::domain_error("p_phys >= p_th_local is outside the model domain");
    }
    const double eta = link.eta_link();
    const double tau_d =
        spec != nullptr ? protocol_depth_rounds(*spec) * link.tau_se_s : 0.0;
    const double t_round = link.tau_se_s + tau_d;

    SolveResult result;

    // Static seed: no decay anywhere.
    double p_succ = 1.0;
    double p_eff_static = 1.0 - f0;
    if (spec != nullptr) {
        const ProtocolOutcome o = evaluate_protocol(*spec, 1.0 - f0, p_phys);
        p_eff_static = o.p_eff;
        p_succ = o.p_succ;
    }
    const DistanceResult seed =
        min_distance({p_eff_static, p_phys}, p_l_target, config.params, config.d_max);
    if (!seed.feasible()) return result;
    result.static_distance = *seed.distance;
    result.trace.push_back(*seed.distance);

    int d = *seed.distance;
    for (int iter = 1; iter <= config.max_iterations; ++iter) {
        const int n_round = pairs_per_round(d, config.scheme);
        const double overhead = spec != nullptr ? spec->n_pairs / p_succ : 1.0;
        const double c_round = overhead * n_round;

        const double f_stored =
            strategy == Strategy::RoundByRound
                ? strategy1_stored_fidelity(f0, c_round, eta)
                : strategy2_stored_fidelity(f0, d, c_round, eta);
        if (!(f_stored > 0.25)) return result;  // Werner embedding exhausted

        double p_bell = 1.0 - f_stored;
        double p_succ_next = 1.0;
        if (spec != nullptr) {
            const ProtocolOutcome o = evaluate_protocol(*spec, 1.0 - f_stored, p_phys);
            p_bell = o.p_eff;
            p_succ_next = o.p_succ;
        }
        const double p_idle = strategy == Strategy::RoundByRound
                                  ? idle_error(c_round, link.mu, eta)
                                  : 0.0;
        const double p_local_eff = p_phys + p_idle;
        if (p_local_eff >= config.params.p_th_local) return result;

        const DistanceResult step =
            min_distance({p_bell, p_local_eff}, p_l_target, config.params, config.d_max);
        if (!step.feasible()) return result;
        const int d_next = *step.distance;
        if (d_next < d) {
            throw std::runtime_error(
                "self-consistent iteration decreased the distance (trace: " +
                format_trace(result.trace) + " -> " + std::to_string(d_next) + ")");
        }
        result.trace.push_back(d_next);

        const bool settled =
            d_next == d && std::abs(p_succ_next - p_succ) <= config.p_succ_tol;
        if (settled) {
            ConvergedPlan plan;
            plan.distance = d;
            plan.stored_fidelity = f_stored;
            plan.idle_error = p_idle;
            plan.effective_local = p_local_eff;
            plan.p_bell = p_bell;
            plan.p_succ = p_succ_next;
            plan.pairs_per_round = c_round;
            plan.pairs_per_cycle = c_round * d;
            plan.t_round_s = t_round;
            plan.iterations = iter;
            plan.strategy = strategy;
            plan.regime.eta_link = eta;
            plan.regime.n_gen = link.lambda_hz * t_round;
            plan.regime.c_round = c_round;
            plan.regime.kind = otf_condition(link.lambda_hz, t_round, c_round)
                                   ? RegimeKind::OnTheFly
                                   : RegimeKind::NoExpire;
            result.plan = plan;
            return result;
        }
        d = d_next;
        p_succ = p_succ_next;
    }
    throw std::runtime_error("self-consistent iteration did not settle after " +
                             std::to_string(config.max_iterations) +
                             " iterations (trace: " + format_trace(result.trace) + ")");
}

Regime classify_regime(Strategy strategy, const ProtocolSpec* spec,
                       const LinkParams& link, double f0, double p_phys,
                       double p_l_target, const SolveConfig& config) {
    const SolveResult res =
        self_consistent_distance(strategy, spec, link, f0, p_phys, p_l_target, config);
    if (res.plan) return res.plan->regime;
    Regime r;
    r.kind = RegimeKind::Infeasible;
    r.eta_link = link.eta_link();
    const double tau_d =
        spec != nullptr ? protocol_depth_rounds(*spec) * link.tau_se_s : 0.0;
    r.n_gen = link.lambda_hz * (link.tau_se_s + tau_d);
    if (res.static_distance > 0) {
        r.c_round = pairs_per_round(res.static_distance, config.scheme);
    }
    return r;
}

double min_link_efficiency(Strategy strategy, const ProtocolSpec* spec,
                           const LinkParams& link, double f0, double p_phys,
                           double p_l_target, const SolveConfig& config,
                           double rel_tol) {
    LinkParams probe = link;
    auto feasible_at = [&](double eta) {
        probe.lambda_hz = eta / probe.tau_coh_s;
        return self_consistent_distance(strategy, spec, probe, f0, p_phys,
                                        p_l_target, config)
            .feasible();
    };

    // The decay feedback is governed by eta alone, so bisection over eta is
    // well-posed once a feasible upper end exists.
    double hi = std::max(link.eta_link(), 1.0);
    int guard = 0;
    while (!feasible_at(hi)) {
        hi *= 10.0;
        if (++guard > 60) {
            throw std::domain_error(
                "scenario infeasible even without decay; no minimum link efficiency");
        }
    }
    double lo = hi;
    guard = 0;
    while (feasible_at(lo)) {
        lo /= 10.0;
        if (++guard > 60) return 0.0;  // feasible at arbitrarily small eta
    }
    while (hi - lo > rel_tol * hi) {
        const double mid = 0.5 * (lo + hi);
        if (feasible_at(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

double production_bound_eta(double c_round, double f0, double f_discard) {
    if (!(c_round > 0.0)) throw std::invalid_argument("c_round must be positive");
    if (!(f_discard > 0.0)) throw std::invalid_argument("f_discard must be positive");
    if (f0 <= f_discard) return kInf;  // empty feasible window
    return c_round / std::log(f0 / f_discard) *
           (1.0 + kPhiInv99 / std::sqrt(c_round));
}

double feasibility_bound_eta(Strategy strategy, int d_s, double f0, double f_th,
                             SeamScheme scheme) {
    if (f0 <= f_th) return kInf;
    const double n_round = pairs_per_round(d_s, scheme);
    const double base = n_round / std::log(f0 / f_th);
    return strategy == Strategy::PreBuffered ? d_s * base : base;
}

}  // namespace bellplan
