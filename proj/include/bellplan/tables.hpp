#pragma once

#include <string>
#include <vector>

#include "bellplan/distillation.hpp"
#include "bellplan/montecarlo.hpp"
#include "bellplan/scenario.hpp"

namespace bellplan {

/// Infeasible rows carry distance = -1 and empty numeric cells in CSV.

struct DistanceRow {
    double p_l_target;
    double fidelity;
    std::string protocol;  // "raw" or protocol name
    double p_eff;          // seam error rate entering the code
    int distance;          // -1: infeasible
    int floor_distance;    // distance at perfect Bell fidelity, same target
};

struct CostRow {
    double fidelity;
    std::string protocol;
    int distance;
    double pairs_per_round;
    double pairs_per_cycle;
    double cycle_time;  // units of tau_SE
    bool optimal;
};

struct CrossoverRow {
    double p_l_target;
    std::string metric;  // "bell_pairs" or "time"
    bool found;
    double fidelity;
    std::string last_protocol;
    std::string boundary;  // "", "raw_everywhere", "distillation_at_top"
};

struct RegimeRow {
    double fidelity;
    double lambda_hz;
    std::string strategy;
    std::string protocol;
    std::string regime;
    int distance;  // converged (static when infeasible, -1 if none)
    double pairs_per_cycle_static;
    double pairs_per_cycle_converged;
};

struct BudgetRow {
    double fidelity;
    std::string strategy;
    int distance;
    long long n_comm;
    long long n_mem;
    long long n_logical;
    long long total;
};

struct SimulateRow {
    double fidelity;
    std::string protocol;
    int distance;
    double pairs_per_round;
    double pairs_per_cycle;  // analytical
    double cycle_time;
    bool optimal;
    double mean;  // simulated pairs per cycle
    double std;
    int runs;
    std::uint64_t seed;
};

/// Builds the catalog a scenario asks for: the standard entries restricted to
/// scenario.protocols (order preserved), plus any protocols merged from
/// scenario.protocol_file. Unknown names throw.
ProtocolCatalog catalog_for(const Scenario& scenario);

std::vector<DistanceRow> distance_table(const Scenario& s, const ProtocolCatalog& c);
std::vector<CostRow> cost_table(const Scenario& s, const ProtocolCatalog& c);
std::vector<CrossoverRow> crossover_table(const Scenario& s, const ProtocolCatalog& c);
std::vector<RegimeRow> regime_table(const Scenario& s, const ProtocolCatalog& c);
std::vector<BudgetRow> budget_table(const Scenario& s, const ProtocolCatalog& c);
std::vector<SimulateRow> simulate_table(const Scenario& s, const ProtocolCatalog& c);

std::string to_csv(const std::vector<DistanceRow>& rows);
std::string to_csv(const std::vector<CostRow>& rows);
std::string to_csv(const std::vector<CrossoverRow>& rows);
std::string to_csv(const std::vector<RegimeRow>& rows);
std::string to_csv(const std::vector<BudgetRow>& rows);
std::string to_csv(const std::vector<SimulateRow>& rows);

std::string to_json(const std::vector<DistanceRow>& rows);
std::string to_json(const std::vector<CostRow>& rows);
std::string to_json(const std::vector<CrossoverRow>& rows);
std::string to_json(const std::vector<RegimeRow>& rows);
std::string to_json(const std::vector<BudgetRow>& rows);
std::string to_json(const std::vector<SimulateRow>& rows);

}  // namespace bellplan
