"""Smoke tests for the python bindings: the main planning operations behave
like their C++ counterparts on a handful of pinned values."""

import math

import pytest

import bellplan as bp


def test_distance_solver_anchor():
    assert abs(bp.effective_bell_threshold(0.001) - 0.1336) < 2e-4
    r = bp.min_distance(p_bell=0.0136, p_local=0.001, p_l_target=1e-3)
    assert r.feasible
    assert r.distance == 5
    assert bp.logical_error_rate(5, 0.0, 0.0) == 0.0

    far = bp.min_distance(p_bell=0.20, p_local=0.001, p_l_target=1e-3)
    assert not far.feasible
    assert far.reason == "above_effective_threshold"


def test_distillation_map():
    out = bp.evaluate_protocol("dejmps", p_raw=0.1, p_local=0.0)
    assert out.p_succ == pytest.approx(0.8756, abs=1e-4)
    assert 1.0 - out.p_eff == pytest.approx(0.9264, abs=1e-4)

    names = bp.protocol_names()
    assert {"double_select", "expedient", "stringent"} <= set(names)
    info = bp.protocol_info("stringent")
    assert (info["n_pairs"], info["op_count"]) == (13, 18)

    assert bp.multiplexing_factor(0.9) == 2
    assert bp.raw_cycle_cost(5) == 45.0
    cost = bp.distilled_cycle_cost("double_select", 0.0136, 0.001, 5)
    assert cost == pytest.approx(140.0, rel=0.04)


def test_crossover():
    r = bp.crossover_fidelity(1e-3)
    assert r.found
    assert r.fidelity == pytest.approx(0.9707, abs=0.01)
    assert r.last_protocol == "double_select"


def test_temporal_and_regimes():
    stats = bp.collection_time_stats(9, 1000.0)
    assert stats.mean == pytest.approx(0.009)
    assert stats.t99 == pytest.approx(0.009 * (1 + 2.33 / 3.0))

    ion = bp.LinkParams()
    ion.lambda_hz = 250.0
    ion.tau_coh_s = 65.0
    assert ion.eta_link == pytest.approx(16250.0)
    kind = bp.classify_regime(bp.Strategy.ROUND_BY_ROUND, None, ion, 0.94, 1e-3, 1e-3)
    assert kind == "no_expire"

    atom = bp.LinkParams()
    atom.lambda_hz = 1e5
    res = bp.self_consistent_distance(
        bp.Strategy.ROUND_BY_ROUND, None, atom, 0.999, 1e-3, 1e-3
    )
    assert res.feasible
    assert res.plan.regime.kind == "on_the_fly"
    assert res.plan.distance == res.static_distance

    assert bp.discard_time(0.95, 0.867, 10.0) == pytest.approx(
        10.0 * math.log(0.95 / 0.867)
    )


def test_budget():
    assert bp.logical_capacity(3000, 2, 9, 5) == 52
    assert bp.total_budget(52, 5, 2, 9) == 2939
    assert bp.mem_qubits(5) == 9

    link = bp.LinkParams()
    link.lambda_hz = 1e3
    link.interfaces = 2
    report = bp.best_strategy_for_capacity(3000, 0.99, 1e-3, 1e-3, link)
    assert report.strategy == "raw"
    assert report.feasible_for_computation


def test_simulation_reproducible():
    cfg = bp.SimConfig()
    cfg.link.lambda_hz = 1e6
    cfg.f0 = 0.9864
    cfg.runs = 20
    cfg.seed = 9
    a = bp.simulate_operation(cfg)
    b = bp.simulate_operation(cfg)
    assert a.pairs_per_cycle_mean == b.pairs_per_cycle_mean
    assert a.distance == 5
    assert a.pairs_per_cycle_mean == 45.0
    assert a.discards == 0

    samples = bp.simulate_collection(9, 1000.0, seed=1, runs=500)
    assert len(samples) == 500
    assert sum(samples) / len(samples) == pytest.approx(0.009, rel=0.1)


def test_validation_errors_surface_as_python_exceptions():
    with pytest.raises(ValueError):
        bp.logical_error_rate(4, 0.01, 0.001)
    with pytest.raises(ValueError):
        bp.effective_bell_threshold(0.5)
    with pytest.raises(Exception):
        bp.evaluate_protocol("nonesuch", 0.1, 0.001)
