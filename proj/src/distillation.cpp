#include "bellplan/distillation.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"

namespace bellplan {

namespace {

// Pauli frame labels: 0=I, 1=X, 2=Y, 3=Z.
constexpr int x_bit(int l) { return (l == 1 || l == 2) ? 1 : 0; }
constexpr int z_bit(int l) { return (l == 2 || l == 3) ? 1 : 0; }
constexpr int from_xz(int x, int z) {
    return x ? (z ? 2 : 1) : (z ? 3 : 0);
}
constexpr int compose(int a, int b) {
    return from_xz(x_bit(a) ^ x_bit(b), z_bit(a) ^ z_bit(b));
}

constexpr double kPassUnderflow = 1e-12;

// Joint Pauli-frame distribution over the three registers a step can touch:
// slot 0 = target, slot 1 = first ancilla, slot 2 = second ancilla.
using Joint = std::array<double, 64>;

constexpr int idx_of(int l0, int l1, int l2) { return (l0 * 4 + l1) * 4 + l2; }

Joint product_state(const BellDiagonalState& t, const BellDiagonalState& a1,
                    const BellDiagonalState& a2) {
    Joint j{};
    for (int l0 = 0; l0 < 4; ++l0)
        for (int l1 = 0; l1 < 4; ++l1)
            for (int l2 = 0; l2 < 4; ++l2)
                j[idx_of(l0, l1, l2)] = t.w[l0] * a1.w[l1] * a2.w[l2];
    return j;
}

// Bilateral CNOT between the pairs in slots c (control) and t (target):
// X frames propagate control -> target, Z frames target -> control.
Joint bilateral_cnot(const Joint& in, int c, int t) {
    Joint out{};
    for (int i = 0; i < 64; ++i) {
        if (in[i] == 0.0) continue;
        int l[3] = {i >> 4, (i >> 2) & 3, i & 3};
        int xc = x_bit(l[c]), zc = z_bit(l[c]);
        int xt = x_bit(l[t]), zt = z_bit(l[t]);
        l[t] = from_xz(xt ^ xc, zt);
        l[c] = from_xz(xc, zc ^ zt);
        out[idx_of(l[0], l[1], l[2])] += in[i];
    }
    return out;
}

// Two-qubit depolarizing noise at rate p on the qubits of slots a and b held
// by one node: uniform over the 15 non-identity Pauli pairs.
Joint depolarize_two_qubit(const Joint& in, int a, int b, double p) {
    if (p == 0.0) return in;
    Joint out{};
    const double keep = 1.0 - p;
    const double each = p / 15.0;
    for (int i = 0; i < 64; ++i) {
        if (in[i] == 0.0) continue;
        const int l0 = i >> 4, l1 = (i >> 2) & 3, l2 = i & 3;
        for (int pa = 0; pa < 4; ++pa) {
            for (int pb = 0; pb < 4; ++pb) {
                const double wgt = (pa == 0 && pb == 0) ? keep : each;
                int l[3] = {l0, l1, l2};
                l[a] = compose(l[a], pa);
                l[b] = compose(l[b], pb);
                out[idx_of(l[0], l[1], l[2])] += in[i] * wgt;
            }
        }
    }
    return out;
}

// DEJMPS frame change: exchanges the Y and Z components of a pair.
void swap_yz(BellDiagonalState& s) { std::swap(s.w[2], s.w[3]); }

struct MeasureSpec {
    int slot;
    bool z_check;  // true: parity = X frame bit; false: X-basis check, parity = Z frame bit
};

// Conditions the joint on the listed parity checks passing (each local
// measurement outcome flips with probability p_meas, so a pair's parity flips
// with probability 2 p (1 - p)), marginalizes the measured slots, and returns
// the unnormalized target distribution. The returned mass is the step's pass
// probability.
double select_and_trace(const Joint& in, const std::vector<MeasureSpec>& checks,
                        double p_meas, BellDiagonalState& target_out) {
    const double flip = 2.0 * p_meas * (1.0 - p_meas);
    std::array<double, 4> acc{0.0, 0.0, 0.0, 0.0};
    double mass = 0.0;
    for (int i = 0; i < 64; ++i) {
        if (in[i] == 0.0) continue;
        const int l[3] = {i >> 4, (i >> 2) & 3, i & 3};
        double w = in[i];
        for (const auto& m : checks) {
            const int parity = m.z_check ? x_bit(l[m.slot]) : z_bit(l[m.slot]);
            w *= (parity == 0) ? (1.0 - flip) : flip;
        }
        acc[l[0]] += w;
        mass += w;
    }
    target_out.w = acc;
    return mass;
}

void run_step(const PurifyStep& step, BellDiagonalState& target,
              BellDiagonalState anc1, BellDiagonalState anc2, double p_local,
              double& pass_out) {
    if (step.rotation == PreRotation::Dejmps) {
        swap_yz(target);
        swap_yz(anc1);
    } else if (step.rotation == PreRotation::WernerTwirl) {
        target = werner_state(target.fidelity());
        anc1 = werner_state(anc1.fidelity());
    }

    Joint j = product_state(target, anc1, anc2);
    std::vector<MeasureSpec> checks;
    if (step.basis == ParityBasis::X) {
        // Z-parity check of anc1 catches X-type errors on the target.
        j = bilateral_cnot(j, /*c=*/0, /*t=*/1);
        j = depolarize_two_qubit(j, 0, 1, p_local);
        j = depolarize_two_qubit(j, 0, 1, p_local);
        if (step.double_select()) {
            // anc2 verifies the Z errors anc1 may have injected into the target.
            j = bilateral_cnot(j, /*c=*/2, /*t=*/1);
            j = depolarize_two_qubit(j, 2, 1, p_local);
            j = depolarize_two_qubit(j, 2, 1, p_local);
            checks.push_back({2, false});
        }
        checks.push_back({1, true});
    } else {
        // X-parity check of anc1 catches Z-type errors on the target.
        j = bilateral_cnot(j, /*c=*/1, /*t=*/0);
        j = depolarize_two_qubit(j, 1, 0, p_local);
        j = depolarize_two_qubit(j, 1, 0, p_local);
        if (step.double_select()) {
            j = bilateral_cnot(j, /*c=*/1, /*t=*/2);
            j = depolarize_two_qubit(j, 1, 2, p_local);
            j = depolarize_two_qubit(j, 1, 2, p_local);
            checks.push_back({2, true});
        }
        checks.push_back({1, false});
    }

    BellDiagonalState out;
    const double mass = select_and_trace(j, checks, p_local, out);
    pass_out = mass;
    if (mass > 0.0) {
        for (double& v : out.w) v /= mass;
    }

    if (step.rotation == PreRotation::Dejmps) {
        swap_yz(out);
    } else if (step.rotation == PreRotation::WernerTwirl) {
        out = werner_state(out.fidelity());
    }
    target = out;
}

nlohmann::json step_to_json(const PurifyStep& s) {
    nlohmann::json j;
    j["basis"] = s.basis == ParityBasis::X ? "X" : "Z";
    j["target"] = s.target;
    j["anc1"] = s.anc1;
    if (s.anc2 >= 0) j["anc2"] = s.anc2;
    switch (s.rotation) {
        case PreRotation::None: break;
        case PreRotation::Dejmps: j["rotation"] = "dejmps"; break;
        case PreRotation::WernerTwirl: j["rotation"] = "werner_twirl"; break;
    }
    return j;
}

PurifyStep step_from_json(const nlohmann::json& j) {
    PurifyStep s;
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "basis" && key != "target" && key != "anc1" && key != "anc2" &&
            key != "rotation") {
            throw std::invalid_argument("unknown key in protocol step: " + key);
        }
    }
    const std::string basis = j.at("basis").get<std::string>();
    if (basis == "X") {
        s.basis = ParityBasis::X;
    } else if (basis == "Z") {
        s.basis = ParityBasis::Z;
    } else {
        throw std::invalid_argument("step basis must be \"X\" or \"Z\"");
    }
    s.target = j.at("target").get<int>();
    s.anc1 = j.at("anc1").get<int>();
    s.anc2 = j.value("anc2", -1);
    const std::string rot = j.value("rotation", "none");
    if (rot == "none") {
        s.rotation = PreRotation::None;
    } else if (rot == "dejmps") {
        s.rotation = PreRotation::Dejmps;
    } else if (rot == "werner_twirl") {
        s.rotation = PreRotation::WernerTwirl;
    } else {
        throw std::invalid_argument("unknown step rotation: " + rot);
    }
    return s;
}

nlohmann::json protocol_to_json(const ProtocolSpec& p) {
    nlohmann::json j;
    j["name"] = p.name;
    j["n_pairs"] = p.n_pairs;
    j["op_count"] = p.op_count;
    j["restart"] =
        p.restart == RestartPolicy::FullRestart ? "full_restart" : "selective_retry";
    j["steps"] = nlohmann::json::array();
    for (const auto& s : p.steps) j["steps"].push_back(step_to_json(s));
    return j;
}

ProtocolSpec protocol_from_json(const nlohmann::json& j) {
    ProtocolSpec p;
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "name" && key != "n_pairs" && key != "op_count" &&
            key != "restart" && key != "steps") {
            throw std::invalid_argument("unknown key in protocol: " + key);
        }
    }
    p.name = j.at("name").get<std::string>();
    for (const auto& sj : j.at("steps")) p.steps.push_back(step_from_json(sj));
    p.n_pairs = j.value("n_pairs", ProtocolSpec::implied_n_pairs(p.steps));
    p.op_count = j.value("op_count", ProtocolSpec::implied_op_count(p.steps));
    const std::string restart = j.value("restart", "full_restart");
    if (restart == "full_restart") {
        p.restart = RestartPolicy::FullRestart;
    } else if (restart == "selective_retry") {
        p.restart = RestartPolicy::SelectiveRetry;
    } else {
        throw std::invalid_argument("unknown restart policy: " + restart);
    }
    p.validate();
    return p;
}

// Fresh raw loads caused by each step (registers referenced while empty).
std::vector<int> fresh_loads_per_step(const std::vector<PurifyStep>& steps) {
    std::vector<int> fresh(steps.size(), 0);
    std::set<int> live;
    for (size_t i = 0; i < steps.size(); ++i) {
        const auto& s = steps[i];
        for (int r : {s.target, s.anc1, s.anc2}) {
            if (r < 0) continue;
            if (live.insert(r).second) ++fresh[i];
        }
        live.erase(s.anc1);
        if (s.anc2 >= 0) live.erase(s.anc2);
    }
    return fresh;
}

}  // namespace

void BellDiagonalState::validate() const {
    double sum = 0.0;
    for (double v : w) {
        if (v < -1e-12) throw std::invalid_argument("negative Bell-diagonal weight");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw std::invalid_argument("Bell-diagonal weights must sum to 1");
    }
}

BellDiagonalState werner_state(double fidelity) {
    if (!(fidelity >= 0.0 && fidelity <= 1.0)) {
        throw std::invalid_argument("fidelity must lie in [0, 1]");
    }
    const double rest = (1.0 - fidelity) / 3.0;
    return BellDiagonalState{{fidelity, rest, rest, rest}};
}

int ProtocolSpec::implied_n_pairs(const std::vector<PurifyStep>& steps) {
    int total = 0;
    for (int f : fresh_loads_per_step(steps)) total += f;
    return total;
}

int ProtocolSpec::implied_op_count(const std::vector<PurifyStep>& steps) {
    int total = 0;
    for (const auto& s : steps) total += s.op_timesteps();
    return total;
}

void ProtocolSpec::validate() const {
    if (name.empty()) throw std::invalid_argument("protocol name must not be empty");
    if (steps.empty()) throw std::invalid_argument("protocol must have at least one step");
    for (const auto& s : steps) {
        if (s.target < 0 || s.anc1 < 0) {
            throw std::invalid_argument("step registers must be non-negative");
        }
        if (s.target == s.anc1 || s.target == s.anc2 ||
            (s.anc2 >= 0 && s.anc1 == s.anc2)) {
            throw std::invalid_argument("step registers must be distinct");
        }
    }
    if (n_pairs != implied_n_pairs(steps)) {
        throw std::invalid_argument("protocol " + name +
                                    ": n_pairs does not match its step list");
    }
    if (op_count != implied_op_count(steps)) {
        throw std::invalid_argument("protocol " + name +
                                    ": op_count does not match its step list");
    }
}

std::string ProtocolSpec::to_json() const { return protocol_to_json(*this).dump(2); }

ProtocolSpec ProtocolSpec::from_json(const std::string& text) {
    return protocol_from_json(nlohmann::json::parse(text));
}

ProtocolSpec make_double_select() {
    ProtocolSpec p;
    p.name = "double_select";
    p.steps = {{ParityBasis::X, 0, 1, 2}};
    p.n_pairs = ProtocolSpec::implied_n_pairs(p.steps);
    p.op_count = ProtocolSpec::implied_op_count(p.steps);
    return p;
}

ProtocolSpec make_expedient() {
    ProtocolSpec p;
    p.name = "expedient";
    p.steps = {{ParityBasis::X, 0, 1, 2}, {ParityBasis::Z, 0, 1, 2}};
    p.n_pairs = ProtocolSpec::implied_n_pairs(p.steps);
    p.op_count = ProtocolSpec::implied_op_count(p.steps);
    return p;
}

ProtocolSpec make_stringent() {
    // Two double-selection rounds on the output pair, each fed by ancillas
    // that were themselves purified by a basic double selection. Sub-circuits
    // run serially, so the depth is six three-timestep rounds.
    ProtocolSpec p;
    p.name = "stringent";
    p.steps = {
        {ParityBasis::X, 1, 2, 3}, {ParityBasis::X, 4, 5, 6},
        {ParityBasis::X, 0, 1, 4}, {ParityBasis::Z, 1, 2, 3},
        {ParityBasis::Z, 4, 5, 6}, {ParityBasis::Z, 0, 1, 4},
    };
    p.n_pairs = ProtocolSpec::implied_n_pairs(p.steps);
    p.op_count = ProtocolSpec::implied_op_count(p.steps);
    return p;
}

ProtocolSpec make_dejmps() {
    ProtocolSpec p;
    p.name = "dejmps";
    p.steps = {{ParityBasis::X, 0, 1, -1, PreRotation::Dejmps}};
    p.n_pairs = ProtocolSpec::implied_n_pairs(p.steps);
    p.op_count = ProtocolSpec::implied_op_count(p.steps);
    return p;
}

ProtocolSpec make_bbpssw() {
    ProtocolSpec p;
    p.name = "bbpssw";
    p.steps = {{ParityBasis::X, 0, 1, -1, PreRotation::WernerTwirl}};
    p.n_pairs = ProtocolSpec::implied_n_pairs(p.steps);
    p.op_count = ProtocolSpec::implied_op_count(p.steps);
    return p;
}

ProtocolCatalog ProtocolCatalog::standard() {
    ProtocolCatalog c;
    c.add(make_double_select());
    c.add(make_expedient());
    c.add(make_stringent());
    return c;
}

ProtocolCatalog ProtocolCatalog::with_validation() {
    ProtocolCatalog c = standard();
    c.add(make_dejmps());
    c.add(make_bbpssw());
    return c;
}

void ProtocolCatalog::add(ProtocolSpec spec) {
    spec.validate();
    if (contains(spec.name)) {
        throw std::invalid_argument("duplicate protocol name: " + spec.name);
    }
    entries_.push_back(std::move(spec));
}

bool ProtocolCatalog::contains(std::string_view name) const {
    for (const auto& p : entries_) {
        if (p.name == name) return true;
    }
    return false;
}

const ProtocolSpec& ProtocolCatalog::get(std::string_view name) const& {
    for (const auto& p : entries_) {
        if (p.name == name) return p;
    }
    throw std::out_of_range("protocol not in catalog: " + std::string(name));
}

std::string ProtocolCatalog::to_json() const {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["protocols"] = nlohmann::json::array();
    for (const auto& p : entries_) j["protocols"].push_back(protocol_to_json(p));
    return j.dump(2);
}

ProtocolCatalog ProtocolCatalog::from_json(const std::string& text) {
    ProtocolCatalog c;
    c.merge_json(text);
    return c;
}

void ProtocolCatalog::merge_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "schema_version" && key != "protocols") {
            throw std::invalid_argument("unknown key in protocol catalog: " + key);
        }
    }
    if (j.value("schema_version", 1) != 1) {
        throw std::invalid_argument("unsupported protocol catalog schema version");
    }
    for (const auto& pj : j.at("protocols")) add(protocol_from_json(pj));
}

ProtocolOutcome evaluate_protocol(const ProtocolSpec& spec, double p_raw,
                                  double p_local) {
    if (!(p_raw >= 0.0 && p_raw <= 0.75)) {
        throw std::invalid_argument(
            "p_raw must lie in [0, 0.75]; the Werner embedding is unphysical below "
            "fidelity 1/4");
    }
    return evaluate_protocol(spec, werner_state(1.0 - p_raw), p_local);
}

ProtocolOutcome evaluate_protocol(const ProtocolSpec& spec,
                                  const BellDiagonalState& raw, double p_local) {
    spec.validate();
    raw.validate();
    if (!(p_local >= 0.0 && p_local < 1.0)) {
        throw std::invalid_argument("p_local must lie in [0, 1)");
    }

    std::unordered_map<int, BellDiagonalState> regs;
    auto fetch = [&](int r) -> BellDiagonalState {
        auto it = regs.find(r);
        if (it != regs.end()) return it->second;
        return raw;
    };

    ProtocolOutcome outcome;
    const BellDiagonalState perfect{};  // dummy for unused second-ancilla slot
    for (const auto& step : spec.steps) {
        BellDiagonalState target = fetch(step.target);
        BellDiagonalState anc1 = fetch(step.anc1);
        BellDiagonalState anc2 = step.double_select() ? fetch(step.anc2) : perfect;
        double pass = 0.0;
        run_step(step, target, anc1, anc2, p_local, pass);
        outcome.step_pass.push_back(pass);
        outcome.p_succ *= pass;
        if (outcome.p_succ < kPassUnderflow) {
            throw std::runtime_error("degenerate protocol: pass probability underflow");
        }
        regs.erase(step.anc1);
        if (step.anc2 >= 0) regs.erase(step.anc2);
        regs[step.target] = target;
    }
    outcome.output = regs.at(spec.steps.back().target);
    outcome.p_eff = 1.0 - outcome.output.fidelity();
    return outcome;
}

double serial_raw_cost(const ProtocolSpec& spec, const ProtocolOutcome& outcome,
                       int n_round) {
    if (!(outcome.p_succ > 0.0)) {
        throw std::runtime_error("degenerate protocol: p_succ must be positive");
    }
    if (n_round < 1) throw std::invalid_argument("n_round must be positive");
    return static_cast<double>(spec.n_pairs) / outcome.p_succ * n_round;
}

int multiplexing_factor(double p_succ) {
    if (!(p_succ > 0.0 && p_succ <= 1.0)) {
        throw std::runtime_error("degenerate protocol: p_succ must lie in (0, 1]");
    }
    if (p_succ >= 0.99) return 1;
    // Nudge below the exact-ratio case (e.g. p_succ = 0.9 gives exactly 2)
    // so float noise cannot push the ceiling up a notch.
    const double k = std::log(0.01) / std::log1p(-p_succ);
    return std::max(1, static_cast<int>(std::ceil(k - 1e-9)));
}

long long parallel_raw_cost(const ProtocolSpec& spec,
                            const ProtocolOutcome& outcome, int n_round) {
    if (n_round < 1) throw std::invalid_argument("n_round must be positive");
    const long long k = multiplexing_factor(outcome.p_succ);
    return static_cast<long long>(n_round) * spec.n_pairs * k;
}

double expected_raw_pairs_per_success(const ProtocolSpec& spec,
                                      const ProtocolOutcome& outcome) {
    if (!(outcome.p_succ > 0.0)) {
        throw std::runtime_error("degenerate protocol: p_succ must be positive");
    }
    if (spec.restart == RestartPolicy::FullRestart) {
        return spec.n_pairs / outcome.p_succ;
    }
    if (outcome.step_pass.size() != spec.steps.size()) {
        throw std::invalid_argument("outcome does not match protocol step list");
    }
    // Selective retry: ancilla-preparation steps re-run locally until they
    // pass; a failed check on the output register restarts the attempt. Wald:
    // expected cost per attempt cycle divided by the completion probability.
    const int output_reg = spec.steps.back().target;
    const std::vector<int> fresh = fresh_loads_per_step(spec.steps);
    double reach = 1.0;
    double cycle_cost = 0.0;
    double complete = 1.0;
    for (size_t i = 0; i < spec.steps.size(); ++i) {
        const bool prep = spec.steps[i].target != output_reg;
        if (prep) {
            cycle_cost += reach * fresh[i] / outcome.step_pass[i];
        } else {
            cycle_cost += reach * fresh[i];
            reach *= outcome.step_pass[i];
            complete *= outcome.step_pass[i];
        }
    }
    return cycle_cost / complete;
}

}  // namespace bellplan
