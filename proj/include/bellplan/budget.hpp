#pragma once

#include <string>

#include "bellplan/cost_model.hpp"
#include "bellplan/distillation.hpp"
#include "bellplan/temporal.hpp"

namespace bellplan {

/// Physical-qubit accounting of one module under a fixed budget.
struct BudgetReport {
    std::string strategy;  // "raw" or a protocol name
    int distance = -1;     // -1: no feasible distance for this strategy
    long long n_comm = 0;
    long long n_mem = 0;
    long long n_logical = 0;
    long long grid_qubits = 0;
    long long total = 0;

    bool feasible() const { return distance > 0; }
    /// Lattice surgery needs at least two hosted patches.
    bool feasible_for_computation() const { return feasible() && n_logical >= 2; }
};

/// Communication qubits: I interfaces, time-division multiplexed when the
/// attempt rate outruns the reset time: I * max(1, ceil(tau_reset * r)).
long long comm_qubits(int interfaces, double tau_reset_s, double attempt_rate_hz);

/// Buffer qubits for one round's pairs. Raw: one per seam pair (a*d - c).
/// Distilled: every purified pair is produced by k parallel circuits each
/// holding n_pairs raw inputs. Pass spec = nullptr for raw.
long long mem_qubits(int d, const ProtocolSpec* spec, const ProtocolOutcome* outcome,
                     SeamScheme scheme = {});

/// Logical patches hosted on a two-column grid after overheads:
/// 2 * floor((N_phy - N_comm - N_mem + 2d) / (4d^2 + 3d - 2)), floored at 0.
long long logical_capacity(long long n_phy, long long n_comm, long long n_mem, int d);

/// Physical qubits consumed by n_l patches plus overheads:
/// n_l (2d^2 - 1) + (3 n_l / 2 - 2) d + N_comm + N_mem (grid term zero when
/// n_l = 0). n_l must be even.
long long total_budget(long long n_l, int d, long long n_comm, long long n_mem);

/// Evaluates raw plus every catalog protocol at static distances and returns
/// the strategy maximizing hosted logical qubits; ties resolve to raw. When no
/// strategy has a feasible distance the report carries distance = -1.
BudgetReport best_strategy_for_capacity(long long n_phy, double f0, double p_phys,
                                        double p_l_target,
                                        const ProtocolCatalog& catalog,
                                        const LinkParams& link,
                                        const FittedModelParams& params = {},
                                        SeamScheme scheme = {},
                                        int d_max = kDefaultDistanceCap);

}  // namespace bellplan
