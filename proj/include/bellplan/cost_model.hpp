#pragma once

#include <string>

#include "bellplan/distillation.hpp"
#include "bellplan/error_model.hpp"

namespace bellplan {

/// Seam consumption scheme constants: pairs per round = a*d - c. The
/// gate-teleportation scheme (2, 1) is the default; alternates are selectable.
struct SeamScheme {
    int a = 2;
    int c = 1;
};

/// One timestep of a distillation circuit versus the depth of a syndrome
/// extraction round: a round spans 4.8 two-qubit-gate timesteps, so an 18-op
/// circuit adds 3.75 rounds of latency.
inline constexpr double kGateTimestepsPerRound = 4.8;

/// Distillation circuit depth in units of tau_SE.
double protocol_depth_rounds(const ProtocolSpec& spec);

/// Bell pairs consumed per syndrome round: a*d_s - c.
int pairs_per_round(int d_s, SeamScheme scheme = {});

/// Raw pairs per complete lattice-surgery operation: d * (a*d - c).
double raw_cycle_cost(int d_raw, SeamScheme scheme = {});

/// Distilled-strategy raw pairs per operation: (n_pairs/p_succ) * d * (a*d - c).
double distilled_cycle_cost(const ProtocolSpec& spec, const ProtocolOutcome& outcome,
                            int d_dist, SeamScheme scheme = {});

struct CostRatio {
    double exact;           // distilled_cycle_cost / raw_cycle_cost
    double rho_sq_approx;   // (n_pairs/p_succ) * rho^2
    double rel_gap;         // |exact - approx| / exact
};

/// Both the exact cycle-cost ratio and its quadratic distance-ratio
/// approximation. Throws std::domain_error when the raw distance is
/// infeasible (distillation trivially wins; there is no finite ratio).
CostRatio cost_ratio(const ProtocolSpec& spec, const ProtocolOutcome& outcome,
                     int d_raw, int d_dist, SeamScheme scheme = {});

/// Wall-clock span of one lattice-surgery operation in the units of tau_se:
/// (tau_d + tau_se) * d. Pass tau_d = 0 for direct raw consumption.
double cycle_time(int d, double tau_se, double tau_d = 0.0);

/// Distillation shortens the operation iff d_dist/d_raw < 1/(1 + tau_d/tau_se).
double time_threshold_ratio(double tau_d, double tau_se);

/// Per-point cost summary used by the sweep drivers. pairs_per_round is the
/// purified count a*d - c consumed by the code; the raw volume is
/// pairs_per_cycle = overhead_factor * distance * pairs_per_round.
struct CostBreakdown {
    int distance = -1;             // -1: infeasible
    int pairs_per_round = 0;
    double pairs_per_cycle = 0.0;
    double overhead_factor = 1.0;  // n_pairs / p_succ (1 for raw)
    double cycle_time = 0.0;       // units of tau_SE
    bool feasible() const { return distance > 0; }
};

/// Static cost of one strategy at one fidelity. `spec` may be null for raw.
CostBreakdown static_cost(double f0, double p_l_target, const ProtocolSpec* spec,
                          double p_local = 1e-3, const FittedModelParams& params = {},
                          SeamScheme scheme = {}, int d_max = kDefaultDistanceCap);

struct FidelityGrid {
    double lo = 0.90;
    double hi = 0.99;
    double step = 1e-4;
};

struct CrossoverConfig {
    FidelityGrid grid{};
    double p_local = 1e-3;
    FittedModelParams params{};
    SeamScheme scheme{};
    int d_max = kDefaultDistanceCap;
    double refine_to = 1e-5;
};

struct CrossoverResult {
    bool found = false;
    double fidelity = 0.0;          // smallest fidelity above which raw dominates
    std::string last_protocol;      // last protocol overtaken by raw
    bool raw_dominates_everywhere = false;   // boundary reports when !found
    bool distillation_wins_at_top = false;
};

/// Smallest grid fidelity above which direct raw consumption costs no more
/// Bell pairs than every catalog protocol at every finer grid point above it
/// (ties resolve to raw). The boundary is refined by bisection to `refine_to`.
CrossoverResult crossover_fidelity(double p_l_target, const ProtocolCatalog& catalog,
                                   const CrossoverConfig& config = {});

/// Same search on operation time instead of Bell-pair cost; each protocol is
/// charged its circuit depth per round. Exact time ties also resolve to raw,
/// so identical-distance zero-depth protocols yield a boundary (tie) report.
CrossoverResult time_crossover_fidelity(double p_l_target,
                                        const ProtocolCatalog& catalog,
                                        const CrossoverConfig& config = {});

}  // namespace bellplan
