#include "bellplan/tables.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace bellplan {

namespace {

std::string num(double v) {
    if (std::isnan(v)) return "";
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

std::string num(int v) { return v < 0 ? "" : std::to_string(v); }
std::string num(long long v) { return v < 0 ? "" : std::to_string(v); }

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<const ProtocolSpec*> with_raw(const ProtocolCatalog& catalog) {
    std::vector<const ProtocolSpec*> out{nullptr};
    for (const auto& p : catalog.protocols()) out.push_back(&p);
    return out;
}

std::string strategy_name(const ProtocolSpec* spec) {
    return spec != nullptr ? spec->name : "raw";
}

std::vector<double> scenario_fidelities(const Scenario& s) {
    if (s.noise) return {1.0 - s.noise->p_bell};
    return s.sweep.values();
}

CrossoverConfig crossover_config(const Scenario& s) {
    CrossoverConfig cfg;
    cfg.p_local = s.p_local;
    cfg.params = s.params;
    cfg.scheme = s.scheme;
    cfg.d_max = s.d_max;
    return cfg;
}

}  // namespace

ProtocolCatalog catalog_for(const Scenario& scenario) {
    const ProtocolCatalog known = ProtocolCatalog::with_validation();
    ProtocolCatalog selected;
    for (const auto& name : scenario.protocols) {
        if (name == "raw") continue;  // raw is always tabulated
        selected.add(known.get(name));
    }
    if (scenario.protocol_file) {
        std::ifstream in(*scenario.protocol_file);
        if (!in) {
            throw std::invalid_argument("cannot open protocol file: " +
                                        *scenario.protocol_file);
        }
        std::stringstream buf;
        buf << in.rdbuf();
        selected.merge_json(buf.str());
    }
    return selected;
}

std::vector<DistanceRow> distance_table(const Scenario& s, const ProtocolCatalog& c) {
    std::vector<DistanceRow> rows;
    const auto strategies = with_raw(c);
    for (double target : s.p_l_targets) {
        const DistanceResult floor =
            min_distance({0.0, s.p_local}, target, s.params, s.d_max);
        const int floor_d = floor.feasible() ? *floor.distance : -1;
        for (double f0 : scenario_fidelities(s)) {
            for (const ProtocolSpec* spec : strategies) {
                DistanceRow row{};
                row.p_l_target = target;
                row.fidelity = f0;
                row.protocol = strategy_name(spec);
                row.floor_distance = floor_d;
                double p_eff = 1.0 - f0;
                if (spec != nullptr) {
                    p_eff = evaluate_protocol(*spec, 1.0 - f0, s.p_local).p_eff;
                }
                row.p_eff = p_eff;
                const DistanceResult dr =
                    min_distance({p_eff, s.p_local}, target, s.params, s.d_max);
                row.distance = dr.feasible() ? *dr.distance : -1;
                rows.push_back(row);
            }
        }
    }
    return rows;
}

std::vector<CostRow> cost_table(const Scenario& s, const ProtocolCatalog& c) {
    std::vector<CostRow> rows;
    const double target = s.p_l_targets.front();
    const auto strategies = with_raw(c);
    for (double f0 : scenario_fidelities(s)) {
        const std::size_t first = rows.size();
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_idx = first;
        for (const ProtocolSpec* spec : strategies) {
            CostRow row{};
            row.fidelity = f0;
            row.protocol = strategy_name(spec);
            const CostBreakdown cost =
                static_cost(f0, target, spec, s.p_local, s.params, s.scheme, s.d_max);
            row.distance = cost.distance;
            row.pairs_per_round = cost.feasible() ? cost.pairs_per_round : kNaN;
            row.pairs_per_cycle = cost.feasible() ? cost.pairs_per_cycle : kNaN;
            row.cycle_time = cost.feasible() ? cost.cycle_time : kNaN;
            row.optimal = false;
            if (cost.feasible() && cost.pairs_per_cycle < best) {
                best = cost.pairs_per_cycle;
                best_idx = rows.size();
            }
            rows.push_back(row);
        }
        if (best < std::numeric_limits<double>::infinity()) {
            rows[best_idx].optimal = true;
        }
    }
    return rows;
}

std::vector<CrossoverRow> crossover_table(const Scenario& s, const ProtocolCatalog& c) {
    if (c.protocols().empty()) {
        throw std::invalid_argument("crossover needs at least one protocol");
    }
    std::vector<CrossoverRow> rows;
    const CrossoverConfig cfg = crossover_config(s);
    for (double target : s.p_l_targets) {
        for (bool time_metric : {false, true}) {
            const CrossoverResult r = time_metric
                                          ? time_crossover_fidelity(target, c, cfg)
                                          : crossover_fidelity(target, c, cfg);
            CrossoverRow row{};
            row.p_l_target = target;
            row.metric = time_metric ? "time" : "bell_pairs";
            row.found = r.found;
            row.fidelity = r.found ? r.fidelity : kNaN;
            row.last_protocol = r.last_protocol;
            if (!r.found) {
                row.boundary = r.raw_dominates_everywhere ? "raw_everywhere"
                                                          : "distillation_at_top";
            }
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<RegimeRow> regime_table(const Scenario& s, const ProtocolCatalog& c) {
    std::vector<RegimeRow> rows;
    const double target = s.p_l_targets.front();
    const auto strategies = with_raw(c);
    SolveConfig cfg;
    cfg.params = s.params;
    cfg.scheme = s.scheme;
    cfg.d_max = s.d_max;
    for (double f0 : scenario_fidelities(s)) {
        for (const ProtocolSpec* spec : strategies) {
            RegimeRow row{};
            row.fidelity = f0;
            row.lambda_hz = s.link.lambda_hz;
            row.strategy = to_string(s.strategy);
            row.protocol = strategy_name(spec);
            const CostBreakdown stat =
                static_cost(f0, target, spec, s.p_local, s.params, s.scheme, s.d_max);
            row.pairs_per_cycle_static = stat.feasible() ? stat.pairs_per_cycle : kNaN;
            const SolveResult res = self_consistent_distance(
                s.strategy, spec, s.link, f0, s.p_local, target, cfg);
            if (res.plan) {
                row.regime = to_string(res.plan->regime.kind);
                row.distance = res.plan->distance;
                row.pairs_per_cycle_converged = res.plan->pairs_per_cycle;
            } else {
                row.regime = to_string(RegimeKind::Infeasible);
                row.distance = res.static_distance;
                row.pairs_per_cycle_converged = kNaN;
            }
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<BudgetRow> budget_table(const Scenario& s, const ProtocolCatalog& c) {
    std::vector<BudgetRow> rows;
    const double target = s.p_l_targets.front();
    const auto strategies = with_raw(c);
    const long long comm = comm_qubits(std::max(1, s.link.interfaces),
                                       s.link.tau_reset_s, s.link.attempt_rate_hz);
    for (double f0 : scenario_fidelities(s)) {
        for (const ProtocolSpec* spec : strategies) {
            BudgetRow row{};
            row.fidelity = f0;
            row.strategy = strategy_name(spec);
            row.n_comm = comm;
            double p_eff = 1.0 - f0;
            ProtocolOutcome outcome;
            if (spec != nullptr) {
                outcome = evaluate_protocol(*spec, 1.0 - f0, s.p_local);
                p_eff = outcome.p_eff;
            }
            const DistanceResult dr =
                min_distance({p_eff, s.p_local}, target, s.params, s.d_max);
            if (dr.feasible()) {
                row.distance = *dr.distance;
                row.n_mem = mem_qubits(row.distance, spec,
                                       spec != nullptr ? &outcome : nullptr, s.scheme);
                row.n_logical =
                    logical_capacity(s.n_phy, row.n_comm, row.n_mem, row.distance);
                row.total = total_budget(row.n_logical, row.distance, row.n_comm,
                                         row.n_mem);
            } else {
                row.distance = -1;
                row.n_mem = -1;
                row.n_logical = -1;
                row.total = -1;
            }
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<SimulateRow> simulate_table(const Scenario& s, const ProtocolCatalog& c) {
    SimConfig base;
    base.link = s.link;
    base.strategy = s.strategy;
    base.p_phys = s.p_local;
    base.p_l_target = s.p_l_targets.front();
    base.rounds = s.sim_rounds;
    base.runs = s.sim_runs;
    base.seed = s.seed;
    base.f_discard = s.f_discard;
    base.params = s.params;
    base.scheme = s.scheme;
    base.d_max = s.d_max;
    base.collect_samples = false;

    const std::vector<BandRow> bands = cost_bands(scenario_fidelities(s), base, c);

    std::vector<SimulateRow> rows;
    rows.reserve(bands.size());
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0;
    auto flush_group = [&]() {
        if (best < std::numeric_limits<double>::infinity()) rows[best_idx].optimal = true;
        best = std::numeric_limits<double>::infinity();
    };
    for (std::size_t i = 0; i < bands.size(); ++i) {
        const BandRow& b = bands[i];
        if (!rows.empty() && b.fidelity != rows.back().fidelity) flush_group();
        SimulateRow row{};
        row.fidelity = b.fidelity;
        row.protocol = b.protocol;
        row.distance = b.distance;
        const bool ok = b.distance > 0;
        row.pairs_per_round = ok ? pairs_per_round(b.distance, s.scheme) : kNaN;
        row.pairs_per_cycle = ok ? b.analytical_pairs_per_cycle : kNaN;
        row.cycle_time = kNaN;
        if (ok) {
            const CostBreakdown cost = static_cost(
                b.fidelity, base.p_l_target,
                b.protocol == "raw" ? nullptr : &c.get(b.protocol), s.p_local,
                s.params, s.scheme, s.d_max);
            row.cycle_time = cost.cycle_time;
            if (cost.pairs_per_cycle < best) {
                best = cost.pairs_per_cycle;
                best_idx = rows.size();
            }
        }
        row.mean = ok ? b.mean : kNaN;
        row.std = ok ? b.std : kNaN;
        row.runs = b.runs;
        row.seed = b.seed;
        rows.push_back(row);
    }
    flush_group();
    return rows;
}

namespace {

template <typename Row>
std::string csv_emit(const char* header, const std::vector<Row>& rows,
                     std::string (*line)(const Row&)) {
    std::string out = header;
    out += '\n';
    for (const auto& r : rows) {
        out += line(r);
        out += '\n';
    }
    return out;
}

}  // namespace

std::string to_csv(const std::vector<DistanceRow>& rows) {
    return csv_emit(
        "p_l_target,fidelity,protocol,p_eff,distance,floor_distance", rows,
        +[](const DistanceRow& r) {
            return num(r.p_l_target) + "," + num(r.fidelity) + "," + r.protocol + "," +
                   num(r.p_eff) + "," + num(r.distance) + "," + num(r.floor_distance);
        });
}

std::string to_csv(const std::vector<CostRow>& rows) {
    return csv_emit(
        "fidelity,protocol,distance,pairs_per_round,pairs_per_cycle,cycle_time,"
        "optimal_flag",
        rows, +[](const CostRow& r) {
            return num(r.fidelity) + "," + r.protocol + "," + num(r.distance) + "," +
                   num(r.pairs_per_round) + "," + num(r.pairs_per_cycle) + "," +
                   num(r.cycle_time) + "," + std::string(r.optimal ? "1" : "0");
        });
}

std::string to_csv(const std::vector<CrossoverRow>& rows) {
    return csv_emit(
        "p_l_target,metric,found,fidelity,last_protocol,boundary", rows,
        +[](const CrossoverRow& r) {
            return num(r.p_l_target) + "," + r.metric + "," +
                   std::string(r.found ? "1" : "0") + "," + num(r.fidelity) + "," +
                   r.last_protocol + "," + r.boundary;
        });
}

std::string to_csv(const std::vector<RegimeRow>& rows) {
    return csv_emit(
        "fidelity,lambda,strategy,protocol,regime,distance,pairs_per_cycle_static,"
        "pairs_per_cycle_converged",
        rows, +[](const RegimeRow& r) {
            return num(r.fidelity) + "," + num(r.lambda_hz) + "," + r.strategy + "," +
                   r.protocol + "," + r.regime + "," + num(r.distance) + "," +
                   num(r.pairs_per_cycle_static) + "," +
                   num(r.pairs_per_cycle_converged);
        });
}

std::string to_csv(const std::vector<BudgetRow>& rows) {
    return csv_emit(
        "fidelity,strategy,d,n_comm,n_mem,n_logical,total", rows,
        +[](const BudgetRow& r) {
            return num(r.fidelity) + "," + r.strategy + "," + num(r.distance) + "," +
                   num(r.n_comm) + "," + num(r.n_mem) + "," + num(r.n_logical) + "," +
                   num(r.total);
        });
}

std::string to_csv(const std::vector<SimulateRow>& rows) {
    return csv_emit(
        "fidelity,protocol,distance,pairs_per_round,pairs_per_cycle,cycle_time,"
        "optimal_flag,mean,std,runs,seed",
        rows, +[](const SimulateRow& r) {
            return num(r.fidelity) + "," + r.protocol + "," + num(r.distance) + "," +
                   num(r.pairs_per_round) + "," + num(r.pairs_per_cycle) + "," +
                   num(r.cycle_time) + "," + std::string(r.optimal ? "1" : "0") + "," +
                   num(r.mean) + "," + num(r.std) + "," + std::to_string(r.runs) + "," +
                   std::to_string(r.seed);
        });
}

namespace {

using nlohmann::json;

json maybe(double v) { return std::isnan(v) ? json(nullptr) : json(v); }
json maybe_int(long long v) { return v < 0 ? json(nullptr) : json(v); }

}  // namespace

std::string to_json(const std::vector<DistanceRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        arr.push_back({{"p_l_target", r.p_l_target},
                       {"fidelity", r.fidelity},
                       {"protocol", r.protocol},
                       {"p_eff", r.p_eff},
                       {"distance", maybe_int(r.distance)},
                       {"floor_distance", maybe_int(r.floor_distance)}});
    }
    return arr.dump(2);
}

std::string to_json(const std::vector<CostRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        arr.push_back({{"fidelity", r.fidelity},
                       {"protocol", r.protocol},
                       {"distance", maybe_int(r.distance)},
                       {"pairs_per_round", maybe(r.pairs_per_round)},
                       {"pairs_per_cycle", maybe(r.pairs_per_cycle)},
                       {"cycle_time", maybe(r.cycle_time)},
                       {"optimal_flag", r.optimal}});
    }
    return arr.dump(2);
}

std::string to_json(const std::vector<CrossoverRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        arr.push_back({{"p_l_target", r.p_l_target},
                       {"metric", r.metric},
                       {"found", r.found},
                       {"fidelity", maybe(r.fidelity)},
                       {"last_protocol", r.last_protocol},
                       {"boundary", r.boundary}});
    }
    return arr.dump(2);
}

std::string to_json(const std::vector<RegimeRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        arr.push_back({{"fidelity", r.fidelity},
                       {"lambda", r.lambda_hz},
                       {"strategy", r.strategy},
                       {"protocol", r.protocol},
                       {"regime", r.regime},
                       {"distance", maybe_int(r.distance)},
                       {"pairs_per_cycle_static", maybe(r.pairs_per_cycle_static)},
                       {"pairs_per_cycle_converged", maybe(r.pairs_per_cycle_converged)}});
    }
    return arr.dump(2);
}

std::string to_json(const std::vector<BudgetRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        arr.push_back({{"fidelity", r.fidelity},
                       {"strategy", r.strategy},
                       {"d", maybe_int(r.distance)},
                       {"n_comm", r.n_comm},
                       {"n_mem", maybe_int(r.n_mem)},
                       {"n_logical", maybe_int(r.n_logical)},
                       {"total", maybe_int(r.total)}});
    }
    return arr.dump(2);
}

std::string to_json(const std::vector<SimulateRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        arr.push_back({{"fidelity", r.fidelity},
                       {"protocol", r.protocol},
                       {"distance", maybe_int(r.distance)},
                       {"pairs_per_round", maybe(r.pairs_per_round)},
                       {"pairs_per_cycle", maybe(r.pairs_per_cycle)},
                       {"cycle_time", maybe(r.cycle_time)},
                       {"optimal_flag", r.optimal},
                       {"mean", maybe(r.mean)},
                       {"std", maybe(r.std)},
                       {"runs", r.runs},
                       {"seed", r.seed}});
    }
    return arr.dump(2);
}

}  // namespace bellplan
