#include <stdexcept>

#include "bellplan/budget.hpp"
#include "doctest.h"

using namespace bellplan;

namespace {

LinkParams module_link() {
    LinkParams l;
    l.lambda_hz = 1e3;
    l.interfaces = 2;
    l.tau_coh_s = 10.0;
    l.tau_se_s = 1e-3;
    return l;
}

}  // namespace

TEST_CASE("communication qubits") {
    CHECK(comm_qubits(2, 0.0, 0.0) == 2);
    CHECK(comm_qubits(2, 1e-6, 1e5) == 2);  // reset faster than attempts
    CHECK(comm_qubits(1, 3.2, 1.0) == 4);
    CHECK(comm_qubits(4, 0.0, 1e6) == 4);
    CHECK_THROWS_AS(comm_qubits(0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("memory qubits") {
    CHECK(mem_qubits(5, nullptr, nullptr) == 9);
    CHECK(mem_qubits(3, nullptr, nullptr) == 5);

    const ProtocolSpec ds = make_double_select();
    ProtocolOutcome o;
    o.p_succ = 0.9;  // k = 2
    CHECK(mem_qubits(5, &ds, &o) == 9 * 2 * 3);
    CHECK_THROWS_AS(mem_qubits(5, &ds, nullptr), std::invalid_argument);
}

TEST_CASE("logical capacity and the budget identity") {
    CHECK(logical_capacity(3000, 2, 9, 5) == 52);
    CHECK(total_budget(52, 5, 2, 9) == 2939);
    CHECK(total_budget(0, 5, 2, 9) == 11);
    CHECK(total_budget(2, 3, 0, 0) == 2 * 17 + 3);

    // One patch costs 2d^2-1 = 49 qubits at d = 5, below the two-patch minimum.
    CHECK(2 * 5 * 5 - 1 == 49);
    CHECK(logical_capacity(49, 0, 0, 5) == 0);

    CHECK_THROWS_AS(total_budget(3, 5, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(logical_capacity(100, 0, 0, 4), std::invalid_argument);
}

TEST_CASE("capacity reconstruction never exceeds the budget") {
    for (long long n_phy : {200LL, 1000LL, 3000LL, 20000LL}) {
        for (int d : {3, 5, 9, 15}) {
            for (long long overhead : {0LL, 11LL, 120LL}) {
                const long long n_l = logical_capacity(n_phy, 2, overhead, d);
                CHECK(n_l % 2 == 0);
                if (n_l > 0) {
                    CHECK(total_budget(n_l, d, 2, overhead) <= n_phy);
                    // Maximality: one more row would not fit.
                    CHECK(total_budget(n_l + 2, d, 2, overhead) > n_phy);
                }
            }
        }
    }
}

TEST_CASE("capacity is monotone in budget and distance") {
    long long prev = -1;
    for (long long n_phy = 100; n_phy <= 5000; n_phy += 700) {
        const long long n_l = logical_capacity(n_phy, 2, 9, 5);
        CHECK(n_l >= prev);
        prev = n_l;
    }
    prev = 1LL << 40;
    for (int d = 3; d <= 21; d += 2) {
        const long long n_l = logical_capacity(3000, 2, 9, d);
        CHECK(n_l <= prev);
        prev = n_l;
    }
}

TEST_CASE("memory overhead comparison is the direct inequality") {
    const ProtocolCatalog catalog = ProtocolCatalog::standard();
    for (double f0 : {0.91, 0.94, 0.97}) {
        const DistanceResult raw = min_distance({1.0 - f0, 1e-3}, 1e-6);
        if (!raw.feasible()) continue;
        for (const auto& p : catalog.protocols()) {
            const ProtocolOutcome o = evaluate_protocol(p, 1.0 - f0, 1e-3);
            const DistanceResult dist = min_distance({o.p_eff, 1e-3}, 1e-6);
            if (!dist.feasible()) continue;
            const long long mem_raw = mem_qubits(*raw.distance, nullptr, nullptr);
            const long long mem_dist = mem_qubits(*dist.distance, &p, &o);
            const long long k = multiplexing_factor(o.p_succ);
            const bool expected_heavier =
                pairs_per_round(*dist.distance) * k * p.n_pairs >
                pairs_per_round(*raw.distance);
            CHECK((mem_dist > mem_raw) == expected_heavier);
        }
    }
}

TEST_CASE("best strategy maximizes hosted logical qubits, ties to raw") {
    const ProtocolCatalog catalog = ProtocolCatalog::standard();
    const LinkParams link = module_link();

    // High fidelity: raw needs the same floor distance as every protocol but
    // stores far fewer pairs, so it wins outright.
    const BudgetReport high =
        best_strategy_for_capacity(3000, 0.99, 1e-3, 1e-3, catalog, link);
    CHECK(high.strategy == "raw");
    CHECK(high.feasible_for_computation());
    CHECK(high.total <= 3000);

    // Low fidelity at a strict target: the distance gap dominates and a
    // distillation protocol hosts more patches.
    const BudgetReport low =
        best_strategy_for_capacity(3000, 0.90, 1e-3, 1e-6, catalog, link);
    REQUIRE(low.feasible());
    CHECK(low.strategy != "raw");
    const DistanceResult raw_d = min_distance({0.10, 1e-3}, 1e-6);
    REQUIRE(raw_d.feasible());
    const long long raw_nl =
        logical_capacity(3000, low.n_comm, mem_qubits(*raw_d.distance, nullptr, nullptr),
                         *raw_d.distance);
    CHECK(low.n_logical >= raw_nl);

    // Below one patch of logical capacity everywhere.
    const BudgetReport tiny =
        best_strategy_for_capacity(40, 0.99, 1e-3, 1e-3, catalog, link);
    CHECK(tiny.n_logical == 0);
    CHECK_FALSE(tiny.feasible_for_computation());

    // Infeasible for every strategy: no odd distance up to the cap reaches
    // the target even after purification.
    const BudgetReport inf = best_strategy_for_capacity(3000, 0.85, 1e-3, 1e-9,
                                                        catalog, link, {}, {}, 3);
    CHECK_FALSE(inf.feasible());
}

TEST_CASE("distillation capacity gain tracks the quadratic estimate") {
    // Module-scale budget where distillation roughly halves the distance.
    const double f0 = 0.95, target = 1e-6;
    const long long n_phy = 3000, comm = 2;
    const ProtocolSpec ds = make_double_select();
    const ProtocolOutcome o = evaluate_protocol(ds, 1.0 - f0, 1e-3);

    const DistanceResult raw_d = min_distance({1.0 - f0, 1e-3}, target);
    const DistanceResult dist_d = min_distance({o.p_eff, 1e-3}, target);
    REQUIRE(raw_d.feasible());
    REQUIRE(dist_d.feasible());

    const long long raw_nl = logical_capacity(
        n_phy, comm, mem_qubits(*raw_d.distance, nullptr, nullptr), *raw_d.distance);
    const long long dist_nl = logical_capacity(
        n_phy, comm, mem_qubits(*dist_d.distance, &ds, &o), *dist_d.distance);
    const double rho = distance_ratio(*dist_d.distance, *raw_d.distance);
    const double predicted_gain = raw_nl * (1.0 / (rho * rho) - 1.0);
    const double actual_gain = static_cast<double>(dist_nl - raw_nl);
    CHECK(actual_gain > 0.0);
    // The estimate itself quantizes in steps of 2(rho^-2 - 1) as raw capacity
    // steps by one grid row, so that is the grid quantum to check against.
    const double quantum = 2.0 * std::max(1.0, 1.0 / (rho * rho) - 1.0);
    CHECK(std::abs(actual_gain - predicted_gain) <= quantum);
}
