#include "bellplan/scenario.hpp"

#include <stdexcept>

#include "json.hpp"

namespace bellplan {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                    const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool ok = false;
        for (const char* a : allowed) {
            if (key == a) {
                ok = true;
                break;
            }
        }
        if (!ok) throw std::invalid_argument("unknown key in " + where + ": " + key);
    }
}

FittedModelParams model_from_json(const json& j) {
    reject_unknown(j, {"kappa", "eta", "alpha_c", "p_th_bell", "p_th_local"}, "model");
    FittedModelParams p;
    p.kappa = j.value("kappa", p.kappa);
    p.eta = j.value("eta", p.eta);
    p.alpha_c = j.value("alpha_c", p.alpha_c);
    p.p_th_bell = j.value("p_th_bell", p.p_th_bell);
    p.p_th_local = j.value("p_th_local", p.p_th_local);
    return p;
}

LinkParams link_from_json(const json& j, const LinkParams& defaults) {
    reject_unknown(j,
                   {"lambda_hz", "interfaces", "attempt_rate_hz", "p_herald",
                    "tau_coh_s", "mu", "tau_se_s", "tau_reset_s"},
                   "link");
    LinkParams l = defaults;
    l.lambda_hz = j.value("lambda_hz", l.lambda_hz);
    l.interfaces = j.value("interfaces", l.interfaces);
    l.attempt_rate_hz = j.value("attempt_rate_hz", l.attempt_rate_hz);
    l.p_herald = j.value("p_herald", l.p_herald);
    l.tau_coh_s = j.value("tau_coh_s", l.tau_coh_s);
    l.mu = j.value("mu", l.mu);
    l.tau_se_s = j.value("tau_se_s", l.tau_se_s);
    l.tau_reset_s = j.value("tau_reset_s", l.tau_reset_s);
    return l;
}

Scenario scenario_from_json(const json& j) {
    reject_unknown(j,
                   {"schema_version", "model", "noise", "fidelity_sweep",
                    "p_l_targets", "protocols", "protocol_file", "link", "strategy",
                    "n_phy", "p_local", "f_discard", "d_max", "seam", "sim", "seed",
                    "format"},
                   "scenario");
    if (j.value("schema_version", 1) != 1) {
        throw std::invalid_argument("unsupported scenario schema version");
    }
    Scenario s = default_scenario();
    if (j.contains("model")) s.params = model_from_json(j.at("model"));
    if (j.contains("noise")) {
        const json& n = j.at("noise");
        reject_unknown(n, {"p_bell", "p_local"}, "noise");
        NoisePoint np;
        np.p_bell = n.at("p_bell").get<double>();
        np.p_local = n.value("p_local", s.p_local);
        s.noise = np;
        s.p_local = np.p_local;
    }
    if (j.contains("fidelity_sweep")) {
        const json& f = j.at("fidelity_sweep");
        reject_unknown(f, {"lo", "hi", "points"}, "fidelity_sweep");
        s.sweep.lo = f.value("lo", s.sweep.lo);
        s.sweep.hi = f.value("hi", s.sweep.hi);
        s.sweep.points = f.value("points", s.sweep.points);
    }
    if (j.contains("p_l_targets")) {
        s.p_l_targets = j.at("p_l_targets").get<std::vector<double>>();
    }
    if (j.contains("protocols")) {
        s.protocols = j.at("protocols").get<std::vector<std::string>>();
    }
    if (j.contains("protocol_file")) {
        s.protocol_file = j.at("protocol_file").get<std::string>();
    }
    if (j.contains("link")) s.link = link_from_json(j.at("link"), s.link);
    if (j.contains("strategy")) {
        const std::string v = j.at("strategy").get<std::string>();
        if (v == "round_by_round") {
            s.strategy = Strategy::RoundByRound;
        } else if (v == "pre_buffered") {
            s.strategy = Strategy::PreBuffered;
        } else {
            throw std::invalid_argument("unknown strategy: " + v);
        }
    }
    s.n_phy = j.value("n_phy", s.n_phy);
    s.p_local = j.value("p_local", s.p_local);
    s.f_discard = j.value("f_discard", s.f_discard);
    s.d_max = j.value("d_max", s.d_max);
    if (j.contains("seam")) {
        const json& g = j.at("seam");
        reject_unknown(g, {"a", "c"}, "seam");
        s.scheme.a = g.value("a", s.scheme.a);
        s.scheme.c = g.value("c", s.scheme.c);
    }
    if (j.contains("sim")) {
        const json& g = j.at("sim");
        reject_unknown(g, {"rounds", "runs"}, "sim");
        s.sim_rounds = g.value("rounds", s.sim_rounds);
        s.sim_runs = g.value("runs", s.sim_runs);
    }
    s.seed = j.value("seed", s.seed);
    if (j.contains("format")) {
        const std::string v = j.at("format").get<std::string>();
        if (v == "csv") {
            s.format = OutputFormat::Csv;
        } else if (v == "json") {
            s.format = OutputFormat::Json;
        } else {
            throw std::invalid_argument("unknown format: " + v);
        }
    }
    s.validate();
    return s;
}

}  // namespace

std::vector<double> SweepSpec::values() const {
    validate();
    std::vector<double> out;
    out.reserve(points);
    if (points == 1) {
        out.push_back(lo);
        return out;
    }
    for (int i = 0; i < points; ++i) {
        out.push_back(lo + i * (hi - lo) / (points - 1));
    }
    return out;
}

void SweepSpec::validate() const {
    if (points < 1) throw std::invalid_argument("sweep needs at least one point");
    if (points == 1) {
        if (!(lo > 0.0 && lo <= 1.0)) throw std::invalid_argument("sweep point out of range");
        return;
    }
    if (!(lo < hi) || !(lo > 0.0) || !(hi <= 1.0)) {
        throw std::invalid_argument("sweep range must satisfy 0 < lo < hi <= 1");
    }
}

void Scenario::validate() const {
    params.validate();
    sweep.validate();
    if (p_l_targets.empty()) throw std::invalid_argument("at least one p_l target");
    for (double t : p_l_targets) {
        if (!(t > 0.0 && t < 1.0)) {
            throw std::invalid_argument("p_l targets must lie in (0, 1)");
        }
    }
    if (!(p_local >= 0.0 && p_local < params.p_th_local)) {
        throw std::invalid_argument("p_local must lie in [0, p_th_local)");
    }
    if (!(f_discard > 0.25 && f_discard < 1.0)) {
        throw std::invalid_argument("f_discard must lie in (0.25, 1)");
    }
    if (d_max < 3 || d_max % 2 == 0) {
        throw std::invalid_argument("d_max must be an odd integer >= 3");
    }
    if (n_phy < 0) throw std::invalid_argument("n_phy must be non-negative");
    if (sim_runs < 1) throw std::invalid_argument("sim runs must be >= 1");
    if (sim_rounds < 0) throw std::invalid_argument("sim rounds must be >= 0");
    link.validate();
}

Scenario Scenario::from_json_text(const std::string& text) {
    return scenario_from_json(json::parse(text));
}

std::string Scenario::to_json_text() const {
    json j;
    j["schema_version"] = 1;
    j["model"] = {{"kappa", params.kappa},
                  {"eta", params.eta},
                  {"alpha_c", params.alpha_c},
                  {"p_th_bell", params.p_th_bell},
                  {"p_th_local", params.p_th_local}};
    if (noise) {
        j["noise"] = {{"p_bell", noise->p_bell}, {"p_local", noise->p_local}};
    }
    j["fidelity_sweep"] = {{"lo", sweep.lo}, {"hi", sweep.hi}, {"points", sweep.points}};
    j["p_l_targets"] = p_l_targets;
    j["protocols"] = protocols;
    if (protocol_file) j["protocol_file"] = *protocol_file;
    j["link"] = {{"lambda_hz", link.lambda_hz},
                 {"interfaces", link.interfaces},
                 {"attempt_rate_hz", link.attempt_rate_hz},
                 {"p_herald", link.p_herald},
                 {"tau_coh_s", link.tau_coh_s},
                 {"mu", link.mu},
                 {"tau_se_s", link.tau_se_s},
                 {"tau_reset_s", link.tau_reset_s}};
    j["strategy"] = to_string(strategy);
    j["n_phy"] = n_phy;
    j["p_local"] = p_local;
    j["f_discard"] = f_discard;
    j["d_max"] = d_max;
    j["seam"] = {{"a", scheme.a}, {"c", scheme.c}};
    j["sim"] = {{"rounds", sim_rounds}, {"runs", sim_runs}};
    j["seed"] = seed;
    j["format"] = format == OutputFormat::Csv ? "csv" : "json";
    return j.dump(2);
}

Scenario default_scenario() {
    Scenario s;
    s.link.lambda_hz = 1e3;
    s.link.interfaces = 2;
    s.link.tau_coh_s = 10.0;
    s.link.mu = 5.0;
    s.link.tau_se_s = 1e-3;
    return s;
}

namespace {

// Presets are data: each entry is an ordinary scenario document that goes
// through the same parsing and validation as a user file.
struct PresetEntry {
    const char* name;
    const char* text;
};

constexpr PresetEntry kPresets[] = {
    {"fig2a", R"({"p_l_targets": [1e-3]})"},
    {"fig2b", R"({"p_l_targets": [1e-6]})"},
    {"fig2c", R"({"p_l_targets": [1e-9]})"},
    {"fig2d", R"({"p_l_targets": [1e-12]})"},
    {"fig5a", R"({"p_l_targets": [1e-3], "link": {"lambda_hz": 1e3}})"},
    {"fig5b", R"({"p_l_targets": [1e-3], "link": {"lambda_hz": 3e4}})"},
    {"fig5c", R"({"p_l_targets": [1e-6], "link": {"lambda_hz": 5e3}})"},
    {"fig5d", R"({"p_l_targets": [1e-6], "link": {"lambda_hz": 1e5}})"},
    {"fig7", R"({"p_l_targets": [1e-3], "n_phy": 3000, "link": {"interfaces": 2}})"},
    // Demonstrated trapped-ion link: 250 pairs/s at F0 = 94%, 65 s memory.
    {"ion-trap",
     R"({"p_l_targets": [1e-3], "protocols": [],
         "fidelity_sweep": {"lo": 0.94, "points": 1},
         "link": {"lambda_hz": 250, "tau_coh_s": 65}})"},
    // Projected cavity-enhanced neutral-atom link: 1e5 pairs/s at F0 = 99.9%.
    {"neutral-atom-projected",
     R"({"p_l_targets": [1e-3], "protocols": [],
         "fidelity_sweep": {"lo": 0.999, "points": 1},
         "link": {"lambda_hz": 1e5, "tau_coh_s": 10}})"},
};

}  // namespace

Scenario Scenario::preset(const std::string& name) {
    for (const auto& entry : kPresets) {
        if (name == entry.name) return from_json_text(entry.text);
    }
    throw std::invalid_argument("unknown preset: " + name);
}

std::vector<std::string> Scenario::preset_names() {
    std::vector<std::string> names;
    for (const auto& entry : kPresets) names.emplace_back(entry.name);
    return names;
}

}  // namespace bellplan
