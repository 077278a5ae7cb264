#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bellplan/distillation.hpp"
#include "bellplan/temporal.hpp"

namespace bellplan {

struct SimConfig {
    LinkParams link{};
    Strategy strategy = Strategy::RoundByRound;
    std::optional<std::string> protocol;  // empty: consume raw pairs directly
    double f0 = 0.95;
    double p_phys = 1e-3;
    double p_l_target = 1e-3;
    int rounds = 0;   // syndrome rounds per run; 0 = one full operation (d rounds)
    int runs = 1000;
    std::uint64_t seed = 0;
    double f_discard = kDefaultDiscardFidelity;
    FittedModelParams params{};
    SeamScheme scheme{};
    int d_max = kDefaultDistanceCap;
    bool collect_samples = true;  // keep per-round sample vectors in the result
};

struct SimResult {
    int distance = 0;        // distance the runs were planned at
    double t_round_s = 0.0;
    int rounds_per_run = 0;
    int runs = 0;
    std::uint64_t seed = 0;
    bool analytically_feasible = true;

    // Raw pairs consumed per lattice-surgery cycle (d rounds), across runs.
    double pairs_per_cycle_mean = 0.0;
    double pairs_per_cycle_std = 0.0;  // unbiased across-run estimator

    // Per-round samples (window-open to quota-met times and the conservative
    // earliest-pair fidelity charged over that window).
    std::vector<double> collection_time_samples;
    std::vector<double> earliest_fidelity_samples;

    long long discards = 0;
    long long attempts = 0;   // distillation attempts (0 for raw)
    long long successes = 0;
    double realized_success_rate = 1.0;
    long long raw_consumed_total = 0;
    double min_consumed_fidelity = 1.0;  // true decayed fidelity of the oldest consumed pair
    int unbounded_runs = 0;  // runs aborted because collection stopped progressing
};

/// Total times to collect n pairs at rate lambda: one Erlang(n) sample per
/// run, each the sum of n exponential inter-arrival draws.
std::vector<double> simulate_collection(int n, double lambda_hz, std::uint64_t seed,
                                        int runs);

/// Event-driven simulation of heralded generation, buffering with decay
/// cutoff, distillation attempts and round-by-round (or pre-buffered)
/// consumption. Arrival streams are Poisson; a pair is discarded once its
/// storage time exceeds discard_time(f0, f_discard, tau_coh). Distillation
/// consumes the n_pairs oldest buffered raws per attempt and succeeds with
/// the probability the protocol map assigns at the oldest input's decayed
/// fidelity. A round fires once its quota of pairs is ready and the previous
/// round's execution has finished. Identical configs give identical results.
///
/// Scenarios whose analytical regime is infeasible still simulate (at the
/// static distance); runs that stop making progress are cut off and counted
/// in unbounded_runs.
SimResult simulate_operation(const SimConfig& config,
                             const ProtocolCatalog& catalog = ProtocolCatalog::standard());

struct BandRow {
    double fidelity = 0.0;
    std::string protocol;  // "raw" or protocol name
    int distance = -1;
    double analytical_pairs_per_cycle = 0.0;
    double mean = 0.0;
    double std = 0.0;
    int runs = 0;
    std::uint64_t seed = 0;
};

/// Per-fidelity mean +/- std of simulated pairs per cycle over a grid.
/// Per-point seeds are derived from the master seed by counter splitting, so
/// the table is deterministic and independent of evaluation order.
std::vector<BandRow> cost_bands(const std::vector<double>& fidelities,
                                const SimConfig& base,
                                const ProtocolCatalog& catalog =
                                    ProtocolCatalog::standard());

}  // namespace bellplan
