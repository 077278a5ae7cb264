"""Bell-pair resource planning for distributed lattice surgery.

Decides whether remote Bell pairs should be consumed raw or distilled:
required code distances, Bell-pair costs per operation, operating regimes
under finite generation rate and memory decay, and per-module physical-qubit
budgets.
"""

from bellplan._core import (  # noqa: F401
    BellDiagonalState,
    BudgetReport,
    CollectionStats,
    ConvergedPlan,
    CrossoverResult,
    DistanceResult,
    FittedModelParams,
    LinkParams,
    ProtocolOutcome,
    Regime,
    SimConfig,
    SimResult,
    SolveResult,
    Strategy,
    best_strategy_for_capacity,
    classify_regime,
    collection_time_stats,
    comm_qubits,
    crossover_fidelity,
    cycle_time,
    decayed_fidelity,
    discard_time,
    distance_ratio,
    distilled_cycle_cost,
    effective_bell_threshold,
    evaluate_protocol,
    idle_error,
    logical_capacity,
    logical_error_rate,
    mem_qubits,
    min_distance,
    min_link_efficiency,
    multiplexing_factor,
    otf_condition,
    pairs_per_round,
    preset_names,
    protocol_info,
    protocol_names,
    raw_cycle_cost,
    self_consistent_distance,
    serial_raw_cost,
    simulate_collection,
    simulate_operation,
    strategy1_stored_fidelity,
    strategy2_stored_fidelity,
    time_crossover_fidelity,
    time_threshold_ratio,
    total_budget,
    werner_state,
)

__version__ = "0.1.0"
