#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bellplan/budget.hpp"
#include "bellplan/cost_model.hpp"
#include "bellplan/distillation.hpp"
#include "bellplan/error_model.hpp"
#include "bellplan/montecarlo.hpp"
#include "bellplan/scenario.hpp"
#include "bellplan/temporal.hpp"

namespace py = pybind11;
using namespace bellplan;

namespace {

const ProtocolSpec* spec_or_null(const ProtocolCatalog& catalog,
                                 const std::optional<std::string>& name) {
    if (!name || *name == "raw") return nullptr;
    return &catalog.get(*name);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Bell-pair resource planning for distributed lattice surgery";

    py::class_<FittedModelParams>(m, "FittedModelParams")
        .def(py::init<>())
        .def_readwrite("kappa", &FittedModelParams::kappa)
        .def_readwrite("eta", &FittedModelParams::eta)
        .def_readwrite("alpha_c", &FittedModelParams::alpha_c)
        .def_readwrite("p_th_bell", &FittedModelParams::p_th_bell)
        .def_readwrite("p_th_local", &FittedModelParams::p_th_local);

    py::class_<DistanceResult>(m, "DistanceResult")
        .def_property_readonly("distance",
                               [](const DistanceResult& r) { return r.distance; })
        .def_readonly("achieved_p_l", &DistanceResult::achieved_p_l)
        .def_property_readonly("feasible", &DistanceResult::feasible)
        .def_property_readonly("reason", [](const DistanceResult& r) {
            switch (r.reason) {
                case InfeasibleReason::None: return "none";
                case InfeasibleReason::AboveEffectiveThreshold:
                    return "above_effective_threshold";
                case InfeasibleReason::ExceedsDistanceCap: return "exceeds_distance_cap";
            }
            return "?";
        });

    m.def(
        "logical_error_rate",
        [](int d_s, double p_bell, double p_local, const FittedModelParams& params) {
            return logical_error_rate(d_s, {p_bell, p_local}, params);
        },
        py::arg("d_s"), py::arg("p_bell"), py::arg("p_local"),
        py::arg("params") = FittedModelParams{});

    m.def(
        "min_distance",
        [](double p_bell, double p_local, double p_l_target,
           const FittedModelParams& params, int d_max) {
            return min_distance({p_bell, p_local}, p_l_target, params, d_max);
        },
        py::arg("p_bell"), py::arg("p_local"), py::arg("p_l_target"),
        py::arg("params") = FittedModelParams{}, py::arg("d_max") = kDefaultDistanceCap);

    m.def("effective_bell_threshold", &effective_bell_threshold, py::arg("p_local"),
          py::arg("params") = FittedModelParams{});
    m.def("distance_ratio", &distance_ratio, py::arg("d_dist"), py::arg("d_raw"));

    py::class_<BellDiagonalState>(m, "BellDiagonalState")
        .def_property_readonly(
            "weights", [](const BellDiagonalState& s) { return s.w; })
        .def_property_readonly("fidelity", &BellDiagonalState::fidelity);
    m.def("werner_state", &werner_state, py::arg("fidelity"));

    py::class_<ProtocolOutcome>(m, "ProtocolOutcome")
        .def_readonly("p_eff", &ProtocolOutcome::p_eff)
        .def_readonly("p_succ", &ProtocolOutcome::p_succ)
        .def_readonly("output", &ProtocolOutcome::output);

    m.def("protocol_names", []() {
        std::vector<std::string> names;
        for (const auto& p : ProtocolCatalog::with_validation().protocols()) {
            names.push_back(p.name);
        }
        return names;
    });
    m.def(
        "protocol_info",
        [](const std::string& name) {
            const ProtocolSpec& p = ProtocolCatalog::with_validation().get(name);
            py::dict d;
            d["name"] = p.name;
            d["n_pairs"] = p.n_pairs;
            d["op_count"] = p.op_count;
            return d;
        },
        py::arg("name"));
    m.def(
        "evaluate_protocol",
        [](const std::string& name, double p_raw, double p_local) {
            return evaluate_protocol(ProtocolCatalog::with_validation().get(name),
                                     p_raw, p_local);
        },
        py::arg("protocol"), py::arg("p_raw"), py::arg("p_local"));
    m.def(
        "serial_raw_cost",
        [](const std::string& name, double p_raw, double p_local, int n_round) {
            const ProtocolSpec& p = ProtocolCatalog::with_validation().get(name);
            return serial_raw_cost(p, evaluate_protocol(p, p_raw, p_local), n_round);
        },
        py::arg("protocol"), py::arg("p_raw"), py::arg("p_local"), py::arg("n_round"));
    m.def("multiplexing_factor", &multiplexing_factor, py::arg("p_succ"));

    m.def(
        "pairs_per_round",
        [](int d_s, int a, int c) { return pairs_per_round(d_s, {a, c}); },
        py::arg("d_s"), py::arg("a") = 2, py::arg("c") = 1);
    m.def(
        "raw_cycle_cost", [](int d) { return raw_cycle_cost(d); }, py::arg("d_raw"));
    m.def(
        "distilled_cycle_cost",
        [](const std::string& name, double p_raw, double p_local, int d_dist) {
            const ProtocolSpec& p = ProtocolCatalog::with_validation().get(name);
            return distilled_cycle_cost(p, evaluate_protocol(p, p_raw, p_local), d_dist);
        },
        py::arg("protocol"), py::arg("p_raw"), py::arg("p_local"), py::arg("d_dist"));
    m.def("cycle_time", &cycle_time, py::arg("d"), py::arg("tau_se"),
          py::arg("tau_d") = 0.0);
    m.def("time_threshold_ratio", &time_threshold_ratio, py::arg("tau_d"),
          py::arg("tau_se"));

    py::class_<CrossoverResult>(m, "CrossoverResult")
        .def_readonly("found", &CrossoverResult::found)
        .def_readonly("fidelity", &CrossoverResult::fidelity)
        .def_readonly("last_protocol", &CrossoverResult::last_protocol)
        .def_readonly("raw_dominates_everywhere",
                      &CrossoverResult::raw_dominates_everywhere)
        .def_readonly("distillation_wins_at_top",
                      &CrossoverResult::distillation_wins_at_top);
    m.def(
        "crossover_fidelity",
        [](double p_l_target, double p_local) {
            CrossoverConfig cfg;
            cfg.p_local = p_local;
            return crossover_fidelity(p_l_target, ProtocolCatalog::standard(), cfg);
        },
        py::arg("p_l_target"), py::arg("p_local") = 1e-3);
    m.def(
        "time_crossover_fidelity",
        [](double p_l_target, double p_local) {
            CrossoverConfig cfg;
            cfg.p_local = p_local;
            return time_crossover_fidelity(p_l_target, ProtocolCatalog::standard(), cfg);
        },
        py::arg("p_l_target"), py::arg("p_local") = 1e-3);

    py::class_<LinkParams>(m, "LinkParams")
        .def(py::init<>())
        .def_readwrite("lambda_hz", &LinkParams::lambda_hz)
        .def_readwrite("interfaces", &LinkParams::interfaces)
        .def_readwrite("attempt_rate_hz", &LinkParams::attempt_rate_hz)
        .def_readwrite("p_herald", &LinkParams::p_herald)
        .def_readwrite("tau_coh_s", &LinkParams::tau_coh_s)
        .def_readwrite("mu", &LinkParams::mu)
        .def_readwrite("tau_se_s", &LinkParams::tau_se_s)
        .def_readwrite("tau_reset_s", &LinkParams::tau_reset_s)
        .def_property_readonly("eta_link", &LinkParams::eta_link);

    py::enum_<Strategy>(m, "Strategy")
        .value("ROUND_BY_ROUND", Strategy::RoundByRound)
        .value("PRE_BUFFERED", Strategy::PreBuffered);

    py::class_<CollectionStats>(m, "CollectionStats")
        .def_readonly("mean", &CollectionStats::mean)
        .def_readonly("variance", &CollectionStats::variance)
        .def_readonly("t99", &CollectionStats::t99);
    m.def("collection_time_stats", &collection_time_stats, py::arg("n"),
          py::arg("lambda_hz"));
    m.def("decayed_fidelity", &decayed_fidelity, py::arg("f0"), py::arg("t_s"),
          py::arg("tau_coh_s"), py::arg("exact_depolarizing") = false);
    m.def("discard_time", &discard_time, py::arg("f0"),
          py::arg("f_discard") = kDefaultDiscardFidelity, py::arg("tau_coh_s") = 10.0);
    m.def("otf_condition", &otf_condition, py::arg("lambda_hz"), py::arg("t_round_s"),
          py::arg("c_round"));
    m.def("strategy1_stored_fidelity", &strategy1_stored_fidelity, py::arg("f0"),
          py::arg("c_round"), py::arg("eta_link"));
    m.def("strategy2_stored_fidelity", &strategy2_stored_fidelity, py::arg("f0"),
          py::arg("d_s"), py::arg("c_round"), py::arg("eta_link"));
    m.def("idle_error", &idle_error, py::arg("c_round"), py::arg("mu"),
          py::arg("eta_link"));

    py::class_<Regime>(m, "Regime")
        .def_property_readonly("kind",
                               [](const Regime& r) { return to_string(r.kind); })
        .def_readonly("eta_link", &Regime::eta_link)
        .def_readonly("n_gen", &Regime::n_gen)
        .def_readonly("c_round", &Regime::c_round);

    py::class_<ConvergedPlan>(m, "ConvergedPlan")
        .def_readonly("distance", &ConvergedPlan::distance)
        .def_readonly("stored_fidelity", &ConvergedPlan::stored_fidelity)
        .def_readonly("idle_error", &ConvergedPlan::idle_error)
        .def_readonly("effective_local", &ConvergedPlan::effective_local)
        .def_readonly("p_bell", &ConvergedPlan::p_bell)
        .def_readonly("p_succ", &ConvergedPlan::p_succ)
        .def_readonly("pairs_per_round", &ConvergedPlan::pairs_per_round)
        .def_readonly("pairs_per_cycle", &ConvergedPlan::pairs_per_cycle)
        .def_readonly("iterations", &ConvergedPlan::iterations)
        .def_readonly("regime", &ConvergedPlan::regime);

    py::class_<SolveResult>(m, "SolveResult")
        .def_property_readonly("plan", [](const SolveResult& r) { return r.plan; })
        .def_readonly("trace", &SolveResult::trace)
        .def_readonly("static_distance", &SolveResult::static_distance)
        .def_property_readonly("feasible", &SolveResult::feasible);

    m.def(
        "self_consistent_distance",
        [](Strategy strategy, const std::optional<std::string>& protocol,
           const LinkParams& link, double f0, double p_phys, double p_l_target) {
            const ProtocolCatalog catalog = ProtocolCatalog::with_validation();
            return self_consistent_distance(strategy, spec_or_null(catalog, protocol),
                                            link, f0, p_phys, p_l_target);
        },
        py::arg("strategy"), py::arg("protocol"), py::arg("link"), py::arg("f0"),
        py::arg("p_phys"), py::arg("p_l_target"));
    m.def(
        "classify_regime",
        [](Strategy strategy, const std::optional<std::string>& protocol,
           const LinkParams& link, double f0, double p_phys, double p_l_target) {
            const ProtocolCatalog catalog = ProtocolCatalog::with_validation();
            return to_string(classify_regime(strategy,
                                             spec_or_null(catalog, protocol), link, f0,
                                             p_phys, p_l_target)
                                 .kind);
        },
        py::arg("strategy"), py::arg("protocol"), py::arg("link"), py::arg("f0"),
        py::arg("p_phys"), py::arg("p_l_target"));
    m.def(
        "min_link_efficiency",
        [](Strategy strategy, const std::optional<std::string>& protocol,
           const LinkParams& link, double f0, double p_phys, double p_l_target) {
            const ProtocolCatalog catalog = ProtocolCatalog::with_validation();
            return min_link_efficiency(strategy, spec_or_null(catalog, protocol), link,
                                       f0, p_phys, p_l_target);
        },
        py::arg("strategy"), py::arg("protocol"), py::arg("link"), py::arg("f0"),
        py::arg("p_phys"), py::arg("p_l_target"));

    py::class_<BudgetReport>(m, "BudgetReport")
        .def_readonly("strategy", &BudgetReport::strategy)
        .def_readonly("distance", &BudgetReport::distance)
        .def_readonly("n_comm", &BudgetReport::n_comm)
        .def_readonly("n_mem", &BudgetReport::n_mem)
        .def_readonly("n_logical", &BudgetReport::n_logical)
        .def_readonly("total", &BudgetReport::total)
        .def_property_readonly("feasible", &BudgetReport::feasible)
        .def_property_readonly("feasible_for_computation",
                               &BudgetReport::feasible_for_computation);
    m.def("comm_qubits", &comm_qubits, py::arg("interfaces"), py::arg("tau_reset_s"),
          py::arg("attempt_rate_hz"));
    m.def(
        "mem_qubits",
        [](int d, const std::optional<std::string>& protocol, double p_raw,
           double p_local) {
            if (!protocol || *protocol == "raw") return mem_qubits(d, nullptr, nullptr);
            const ProtocolCatalog catalog = ProtocolCatalog::with_validation();
            const ProtocolSpec& spec = catalog.get(*protocol);
            const ProtocolOutcome outcome = evaluate_protocol(spec, p_raw, p_local);
            return mem_qubits(d, &spec, &outcome);
        },
        py::arg("d"), py::arg("protocol") = std::nullopt, py::arg("p_raw") = 0.0,
        py::arg("p_local") = 1e-3);
    m.def("logical_capacity", &logical_capacity, py::arg("n_phy"), py::arg("n_comm"),
          py::arg("n_mem"), py::arg("d"));
    m.def("total_budget", &total_budget, py::arg("n_l"), py::arg("d"),
          py::arg("n_comm"), py::arg("n_mem"));
    m.def(
        "best_strategy_for_capacity",
        [](long long n_phy, double f0, double p_phys, double p_l_target,
           const LinkParams& link) {
            return best_strategy_for_capacity(n_phy, f0, p_phys, p_l_target,
                                              ProtocolCatalog::standard(), link);
        },
        py::arg("n_phy"), py::arg("f0"), py::arg("p_phys"), py::arg("p_l_target"),
        py::arg("link"));

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("link", &SimConfig::link)
        .def_readwrite("strategy", &SimConfig::strategy)
        .def_readwrite("protocol", &SimConfig::protocol)
        .def_readwrite("f0", &SimConfig::f0)
        .def_readwrite("p_phys", &SimConfig::p_phys)
        .def_readwrite("p_l_target", &SimConfig::p_l_target)
        .def_readwrite("rounds", &SimConfig::rounds)
        .def_readwrite("runs", &SimConfig::runs)
        .def_readwrite("seed", &SimConfig::seed)
        .def_readwrite("f_discard", &SimConfig::f_discard);

    py::class_<SimResult>(m, "SimResult")
        .def_readonly("distance", &SimResult::distance)
        .def_readonly("pairs_per_cycle_mean", &SimResult::pairs_per_cycle_mean)
        .def_readonly("pairs_per_cycle_std", &SimResult::pairs_per_cycle_std)
        .def_readonly("discards", &SimResult::discards)
        .def_readonly("attempts", &SimResult::attempts)
        .def_readonly("successes", &SimResult::successes)
        .def_readonly("realized_success_rate", &SimResult::realized_success_rate)
        .def_readonly("raw_consumed_total", &SimResult::raw_consumed_total)
        .def_readonly("min_consumed_fidelity", &SimResult::min_consumed_fidelity)
        .def_readonly("unbounded_runs", &SimResult::unbounded_runs)
        .def_readonly("analytically_feasible", &SimResult::analytically_feasible);

    m.def(
        "simulate_operation",
        [](const SimConfig& config) {
            return simulate_operation(config, ProtocolCatalog::with_validation());
        },
        py::arg("config"));
    m.def("simulate_collection", &simulate_collection, py::arg("n"),
          py::arg("lambda_hz"), py::arg("seed"), py::arg("runs"));

    m.def("preset_names", &Scenario::preset_names);
}
