#include "bellplan/budget.hpp"

#include <cmath>
#include <stdexcept>

namespace bellplan {

long long comm_qubits(int interfaces, double tau_reset_s, double attempt_rate_hz) {
    if (interfaces < 1) throw std::invalid_argument("interfaces must be >= 1");
    if (tau_reset_s < 0.0 || attempt_rate_hz < 0.0) {
        throw std::invalid_argument("tau_reset and attempt_rate must be >= 0");
    }
    const double slots = std::ceil(tau_reset_s * attempt_rate_hz);
    const long long per_interface = std::max(1LL, static_cast<long long>(slots));
    return static_cast<long long>(interfaces) * per_interface;
}

long long mem_qubits(int d, const ProtocolSpec* spec, const ProtocolOutcome* outcome,
                     SeamScheme scheme) {
    const long long n_round = pairs_per_round(d, scheme);
    if (spec == nullptr) return n_round;
    if (outcome == nullptr) {
        throw std::invalid_argument("distilled memory sizing needs the protocol outcome");
    }
    const long long k = multiplexing_factor(outcome->p_succ);
    return n_round * k * spec->n_pairs;
}

long long logical_capacity(long long n_phy, long long n_comm, long long n_mem, int d) {
    if (d < 3 || d % 2 == 0) {
        throw std::invalid_argument("distance must be an odd integer >= 3");
    }
    const long long dd = d;
    const long long numer = n_phy - n_comm - n_mem + 2 * dd;
    if (numer <= 0) return 0;
    const long long denom = 4 * dd * dd + 3 * dd - 2;
    return 2 * (numer / denom);
}

long long total_budget(long long n_l, int d, long long n_comm, long long n_mem) {
    if (n_l < 0 || n_l % 2 != 0) {
        throw std::invalid_argument("n_l must be a non-negative even count");
    }
    if (d < 3 || d % 2 == 0) {
        throw std::invalid_argument("distance must be an odd integer >= 3");
    }
    const long long dd = d;
    long long grid = 0;
    if (n_l > 0) {
        grid = n_l * (2 * dd * dd - 1) + (3 * n_l / 2 - 2) * dd;
    }
    return grid + n_comm + n_mem;
}

BudgetReport best_strategy_for_capacity(long long n_phy, double f0, double p_phys,
                                        double p_l_target,
                                        const ProtocolCatalog& catalog,
                                        const LinkParams& link,
                                        const FittedModelParams& params,
                                        SeamScheme scheme, int d_max) {
    const long long comm = comm_qubits(std::max(1, link.interfaces),
                                       link.tau_reset_s, link.attempt_rate_hz);

    auto report_for = [&](const ProtocolSpec* spec) {
        BudgetReport r;
        r.strategy = spec != nullptr ? spec->name : "raw";
        r.n_comm = comm;
        double p_eff = 1.0 - f0;
        ProtocolOutcome outcome;
        if (spec != nullptr) {
            outcome = evaluate_protocol(*spec, 1.0 - f0, p_phys);
            p_eff = outcome.p_eff;
        }
        const DistanceResult dr = min_distance({p_eff, p_phys}, p_l_target, params, d_max);
        if (!dr.feasible()) return r;
        r.distance = *dr.distance;
        r.n_mem = mem_qubits(r.distance, spec, spec != nullptr ? &outcome : nullptr,
                             scheme);
        r.n_logical = logical_capacity(n_phy, r.n_comm, r.n_mem, r.distance);
        r.total = total_budget(r.n_logical, r.distance, r.n_comm, r.n_mem);
        r.grid_qubits = r.total - r.n_comm - r.n_mem;
        return r;
    };

    BudgetReport best = report_for(nullptr);
    for (const auto& proto : catalog.protocols()) {
        const BudgetReport candidate = report_for(&proto);
        if (!candidate.feasible()) continue;
        if (!best.feasible() || candidate.n_logical > best.n_logical) {
            best = candidate;  // strict improvement only: ties stay with raw
        }
    }
    return best;
}

}  // namespace bellplan
