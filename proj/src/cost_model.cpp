#include "bellplan/cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace bellplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_scheme(int d_s, SeamScheme scheme) {
    if (scheme.a < 1 || scheme.c < 0 || scheme.a * d_s - scheme.c <= 0) {
        throw std::invalid_argument("seam scheme must yield a positive pair count");
    }
}

}  // namespace

double protocol_depth_rounds(const ProtocolSpec& spec) {
    return spec.op_count / kGateTimestepsPerRound;
}

int pairs_per_round(int d_s, SeamScheme scheme) {
    if (d_s < 3 || d_s % 2 == 0) {
        throw std::invalid_argument("distance must be an odd integer >= 3");
    }
    require_scheme(d_s, scheme);
    return scheme.a * d_s - scheme.c;
}

double raw_cycle_cost(int d_raw, SeamScheme scheme) {
    return static_cast<double>(d_raw) * pairs_per_round(d_raw, scheme);
}

double distilled_cycle_cost(const ProtocolSpec& spec, const ProtocolOutcome& outcome,
                            int d_dist, SeamScheme scheme) {
    if (!(outcome.p_succ > 0.0)) {
        throw std::runtime_error("degenerate protocol: p_succ must be positive");
    }
    return spec.n_pairs / outcome.p_succ * d_dist * pairs_per_round(d_dist, scheme);
}

CostRatio cost_ratio(const ProtocolSpec& spec, const ProtocolOutcome& outcome,
                     int d_raw, int d_dist, SeamScheme scheme) {
    if (d_raw <= 0) {
        throw std::domain_error(
            "raw distance infeasible: distillation trivially wins, no finite ratio");
    }
    CostRatio r{};
    r.exact = distilled_cycle_cost(spec, outcome, d_dist, scheme) /
              raw_cycle_cost(d_raw, scheme);
    const double rho = distance_ratio(d_dist, d_raw);
    r.rho_sq_approx = spec.n_pairs / outcome.p_succ * rho * rho;
    r.rel_gap = std::abs(r.exact - r.rho_sq_approx) / r.exact;
    return r;
}

double cycle_time(int d, double tau_se, double tau_d) {
    if (!(tau_se > 0.0)) throw std::invalid_argument("tau_se must be positive");
    if (tau_d < 0.0) throw std::invalid_argument("tau_d must be non-negative");
    if (d < 3 || d % 2 == 0) {
        throw std::invalid_argument("distance must be an odd integer >= 3");
    }
    return (tau_d + tau_se) * d;
}

double time_threshold_ratio(double tau_d, double tau_se) {
    if (!(tau_se > 0.0)) throw std::invalid_argument("tau_se must be positive");
    if (tau_d < 0.0) throw std::invalid_argument("tau_d must be non-negative");
    return 1.0 / (1.0 + tau_d / tau_se);
}

CostBreakdown static_cost(double f0, double p_l_target, const ProtocolSpec* spec,
                          double p_local, const FittedModelParams& params,
                          SeamScheme scheme, int d_max) {
    CostBreakdown out;
    double p_eff = 1.0 - f0;
    if (spec != nullptr) {
        const ProtocolOutcome outcome = evaluate_protocol(*spec, 1.0 - f0, p_local);
        p_eff = outcome.p_eff;
        out.overhead_factor = spec->n_pairs / outcome.p_succ;
    }
    const DistanceResult dr = min_distance({p_eff, p_local}, p_l_target, params, d_max);
    if (!dr.feasible()) return out;
    out.distance = *dr.distance;
    out.pairs_per_round = pairs_per_round(out.distance, scheme);
    out.pairs_per_cycle = out.overhead_factor * out.distance * out.pairs_per_round;
    const double tau_d = spec != nullptr ? protocol_depth_rounds(*spec) : 0.0;
    out.cycle_time = cycle_time(out.distance, 1.0, tau_d);
    return out;
}

namespace {

enum class Metric { BellPairs, Time };

double strategy_metric(double f0, double p_l_target, const ProtocolSpec* spec,
                       const CrossoverConfig& cfg, Metric metric) {
    const CostBreakdown cost = static_cost(f0, p_l_target, spec, cfg.p_local,
                                           cfg.params, cfg.scheme, cfg.d_max);
    if (!cost.feasible()) return kInf;
    return metric == Metric::BellPairs ? cost.pairs_per_cycle : cost.cycle_time;
}

CrossoverResult crossover_search(double p_l_target, const ProtocolCatalog& catalog,
                                 const CrossoverConfig& cfg, Metric metric) {
    if (catalog.protocols().empty()) {
        throw std::invalid_argument("crossover search needs at least one protocol");
    }
    const auto& grid = cfg.grid;
    if (!(grid.lo < grid.hi) || !(grid.step > 0.0) || grid.step > 1e-4 + 1e-12) {
        throw std::invalid_argument("fidelity grid must ascend with step <= 1e-4");
    }

    const int n_points =
        static_cast<int>(std::floor((grid.hi - grid.lo) / grid.step + 0.5)) + 1;
    std::vector<double> fidelities(n_points);
    std::vector<double> raw_metric(n_points);
    for (int i = 0; i < n_points; ++i) {
        fidelities[i] = std::min(grid.lo + i * grid.step, grid.hi);
        raw_metric[i] =
            strategy_metric(fidelities[i], p_l_target, nullptr, cfg, metric);
    }

    // For each protocol, the last grid point where it strictly beats raw.
    CrossoverResult result;
    int best_idx = -1;
    for (const auto& proto : catalog.protocols()) {
        int last_win = -1;
        for (int i = n_points - 1; i >= 0; --i) {
            const double m = strategy_metric(fidelities[i], p_l_target, &proto, cfg, metric);
            if (m < raw_metric[i]) {
                last_win = i;
                break;
            }
        }
        if (last_win > best_idx) {
            best_idx = last_win;
            result.last_protocol = proto.name;
        }
    }

    if (best_idx < 0) {
        result.raw_dominates_everywhere = true;  // includes exact ties throughout
        return result;
    }
    if (best_idx == n_points - 1) {
        result.distillation_wins_at_top = true;
        result.last_protocol.clear();
        return result;
    }

    // Refine the boundary between the last distillation win and the first
    // point of uniform raw dominance.
    auto any_protocol_beats_raw = [&](double f) {
        const double raw = strategy_metric(f, p_l_target, nullptr, cfg, metric);
        for (const auto& proto : catalog.protocols()) {
            if (strategy_metric(f, p_l_target, &proto, cfg, metric) < raw) return true;
        }
        return false;
    };
    double lo = fidelities[best_idx];
    double hi = fidelities[best_idx + 1];
    while (hi - lo > cfg.refine_to) {
        const double mid = 0.5 * (lo + hi);
        if (any_protocol_beats_raw(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    result.found = true;
    result.fidelity = hi;
    return result;
}

}  // namespace

CrossoverResult crossover_fidelity(double p_l_target, const ProtocolCatalog& catalog,
                                   const CrossoverConfig& config) {
    return crossover_search(p_l_target, catalog, config, Metric::BellPairs);
}

CrossoverResult time_crossover_fidelity(double p_l_target,
                                        const ProtocolCatalog& catalog,
                                        const CrossoverConfig& config) {
    return crossover_search(p_l_target, catalog, config, Metric::Time);
}

}  // namespace bellplan
