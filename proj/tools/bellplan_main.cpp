#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "bellplan/tables.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;

struct CommonOpts {
    std::string scenario_file;
    std::string preset;
    std::string out_file;
    std::string format;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--scenario", opts.scenario_file, "Scenario JSON file");
    cmd->add_option("--preset", opts.preset, "Built-in scenario name");
    cmd->add_option("--out", opts.out_file, "Write the table here instead of stdout");
    cmd->add_option("--format", opts.format, "csv or json (overrides the scenario)")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--seed", opts.seed, "Master seed for simulation commands")
        ->each([&opts](const std::string&) { opts.seed_set = true; });
}

bellplan::Scenario load_scenario(const CommonOpts& opts) {
    using bellplan::Scenario;
    if (!opts.scenario_file.empty() && !opts.preset.empty()) {
        throw CLI::ValidationError("--scenario and --preset are mutually exclusive");
    }
    Scenario s;
    if (!opts.scenario_file.empty()) {
        std::ifstream in(opts.scenario_file);
        if (!in) {
            throw std::invalid_argument("cannot open scenario file: " +
                                        opts.scenario_file);
        }
        std::stringstream buf;
        buf << in.rdbuf();
        s = Scenario::from_json_text(buf.str());
    } else if (!opts.preset.empty()) {
        s = Scenario::preset(opts.preset);
    } else {
        s = bellplan::default_scenario();
    }
    if (!opts.format.empty()) {
        s.format = opts.format == "json" ? bellplan::OutputFormat::Json
                                         : bellplan::OutputFormat::Csv;
    }
    if (opts.seed_set) s.seed = opts.seed;
    return s;
}

int emit(const std::string& text, const CommonOpts& opts) {
    if (opts.out_file.empty()) {
        std::cout << text;
        return kExitOk;
    }
    std::ofstream out(opts.out_file);
    if (!out) {
        std::cerr << "error: cannot write " << opts.out_file << "\n";
        return kExitUsage;
    }
    out << text;
    return kExitOk;
}

template <typename Row>
int emit_rows(const std::vector<Row>& rows, const bellplan::Scenario& s,
              const CommonOpts& opts, bool all_infeasible) {
    const std::string text = s.format == bellplan::OutputFormat::Json
                                 ? bellplan::to_json(rows)
                                 : bellplan::to_csv(rows);
    const int rc = emit(text, opts);
    if (rc != kExitOk) return rc;
    return all_infeasible ? kExitInfeasible : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bell-pair resource planning for distributed lattice surgery"};
    app.require_subcommand(1);

    CommonOpts opts;
    bool list_presets = false;
    app.add_flag("--list-presets", list_presets, "Print built-in scenario names");

    auto* cmd_distance =
        app.add_subcommand("distance", "Required code distance per strategy");
    auto* cmd_cost = app.add_subcommand("cost", "Static Bell-pair cost per cycle");
    auto* cmd_crossover =
        app.add_subcommand("crossover", "Raw-vs-distilled crossover fidelities");
    auto* cmd_regime = app.add_subcommand("regime", "Operating-regime classification");
    auto* cmd_budget = app.add_subcommand("budget", "Physical-qubit budget per module");
    auto* cmd_simulate =
        app.add_subcommand("simulate", "Monte Carlo consumption bands");
    for (auto* cmd :
         {cmd_distance, cmd_cost, cmd_crossover, cmd_regime, cmd_budget, cmd_simulate}) {
        add_common(cmd, opts);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    if (list_presets) {
        for (const auto& name : bellplan::Scenario::preset_names()) {
            std::cout << name << "\n";
        }
        return kExitOk;
    }

    try {
        const bellplan::Scenario s = load_scenario(opts);
        const bellplan::ProtocolCatalog catalog = bellplan::catalog_for(s);

        if (cmd_distance->parsed()) {
            const auto rows = bellplan::distance_table(s, catalog);
            bool all_inf = true;
            for (const auto& r : rows) all_inf = all_inf && r.distance < 0;
            return emit_rows(rows, s, opts, all_inf);
        }
        if (cmd_cost->parsed()) {
            const auto rows = bellplan::cost_table(s, catalog);
            bool all_inf = true;
            for (const auto& r : rows) all_inf = all_inf && r.distance < 0;
            return emit_rows(rows, s, opts, all_inf);
        }
        if (cmd_crossover->parsed()) {
            const auto rows = bellplan::crossover_table(s, catalog);
            return emit_rows(rows, s, opts, false);
        }
        if (cmd_regime->parsed()) {
            const auto rows = bellplan::regime_table(s, catalog);
            bool all_inf = true;
            for (const auto& r : rows) all_inf = all_inf && r.regime == "infeasible";
            return emit_rows(rows, s, opts, all_inf);
        }
        if (cmd_budget->parsed()) {
            const auto rows = bellplan::budget_table(s, catalog);
            bool all_inf = true;
            for (const auto& r : rows) all_inf = all_inf && r.distance < 0;
            return emit_rows(rows, s, opts, all_inf);
        }
        if (cmd_simulate->parsed()) {
            const auto rows = bellplan::simulate_table(s, catalog);
            bool all_inf = true;
            for (const auto& r : rows) all_inf = all_inf && r.distance < 0;
            return emit_rows(rows, s, opts, all_inf);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
