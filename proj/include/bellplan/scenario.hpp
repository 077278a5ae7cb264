#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bellplan/budget.hpp"
#include "bellplan/cost_model.hpp"
#include "bellplan/error_model.hpp"
#include "bellplan/temporal.hpp"

namespace bellplan {

enum class OutputFormat { Csv, Json };

struct SweepSpec {
    double lo = 0.90;
    double hi = 0.99;
    int points = 150;

    std::vector<double> values() const;
    void validate() const;
};

/// A fully-resolved run description. Parsed from a versioned JSON document
/// with unknown keys rejected; numeric defaults follow the baseline
/// parameter set (tau_se = 1 ms, tau_coh = 10 s, mu = 5, p_local = 0.1%).
struct Scenario {
    FittedModelParams params{};
    std::optional<NoisePoint> noise;  // single operating point, when given
    SweepSpec sweep{};
    std::vector<double> p_l_targets{1e-3};
    std::vector<std::string> protocols{"double_select", "expedient", "stringent"};
    std::optional<std::string> protocol_file;
    LinkParams link{};
    Strategy strategy = Strategy::RoundByRound;
    long long n_phy = 3000;
    double p_local = 1e-3;
    double f_discard = kDefaultDiscardFidelity;
    int d_max = kDefaultDistanceCap;
    SeamScheme scheme{};
    int sim_rounds = 0;
    int sim_runs = 1000;
    std::uint64_t seed = 0;
    OutputFormat format = OutputFormat::Csv;

    void validate() const;

    static Scenario from_json_text(const std::string& text);
    std::string to_json_text() const;

    /// Built-in scenarios carrying published platform numbers and the sweep
    /// settings behind the standard figures.
    static Scenario preset(const std::string& name);
    static std::vector<std::string> preset_names();
};

Scenario default_scenario();

}  // namespace bellplan
