#include "bellplan/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <unordered_map>

#include "bellplan/rng.hpp"

namespace bellplan {

std::vector<double> simulate_collection(int n, double lambda_hz, std::uint64_t seed,
                                        int runs) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (!(lambda_hz > 0.0)) throw std::invalid_argument("lambda_hz must be positive");
    if (runs < 1) throw std::invalid_argument("runs must be >= 1");
    std::vector<double> totals(runs);
    for (int r = 0; r < runs; ++r) {
        auto eng = make_engine(seed, static_cast<std::uint64_t>(r));
        std::exponential_distribution<double> gap(lambda_hz);
        double t = 0.0;
        for (int i = 0; i < n; ++i) t += gap(eng);
        totals[r] = t;
    }
    return totals;
}

namespace {

// Memoized protocol success probability at a decayed input fidelity,
// quantized so repeated attempts in one run share evaluations.
class SuccessTable {
  public:
    SuccessTable(const ProtocolSpec& spec, double p_phys)
        : spec_(spec), p_phys_(p_phys) {}

    double p_succ(double fidelity) {
        const long long key = std::llround(fidelity * 1e7);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        const double f = key * 1e-7;
        const double p = evaluate_protocol(spec_, 1.0 - f, p_phys_).p_succ;
        cache_.emplace(key, p);
        return p;
    }

  private:
    const ProtocolSpec& spec_;
    double p_phys_;
    std::unordered_map<long long, double> cache_;
};

struct RunTotals {
    long long consumed = 0;
    long long discards = 0;
    long long attempts = 0;
    long long successes = 0;
    int rounds_done = 0;
    bool unbounded = false;
    double min_consumed_fidelity = 1.0;
};

struct RunContext {
    const SimConfig* cfg;
    const ProtocolSpec* spec;
    SuccessTable* succ;
    int distance;
    int n_round;
    int rounds_target;
    double t_round;
    double t_discard;
    long long arrival_cap;
    SimResult* result;
};

void run_once(const RunContext& ctx, std::uint64_t run_index, RunTotals& totals) {
    const SimConfig& cfg = *ctx.cfg;
    auto eng = make_engine(cfg.seed, run_index);
    std::exponential_distribution<double> gap(cfg.link.lambda_hz);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::deque<double> raw_births;
    long long distilled_ready = 0;
    double t = 0.0;
    double window_open = 0.0;
    double exec_end = 0.0;
    double next_arrival = gap(eng);
    long long arrivals = 0;

    const bool prebuffered = cfg.strategy == Strategy::PreBuffered;
    const int quota_rounds = prebuffered ? ctx.distance : 1;
    const long long quota =
        static_cast<long long>(ctx.n_round) * quota_rounds;

    auto prune = [&]() {
        while (!raw_births.empty() && raw_births.front() + ctx.t_discard < t) {
            raw_births.pop_front();
            ++totals.discards;
        }
    };
    auto note_consumed = [&]() {
        const double fid =
            cfg.f0 * std::exp(-(t - raw_births.front()) / cfg.link.tau_coh_s);
        if (fid < totals.min_consumed_fidelity) totals.min_consumed_fidelity = fid;
    };
    auto try_distill = [&]() {
        if (ctx.spec == nullptr) return;
        // Replenish the purified buffer only up to the next quota; surplus
        // raws stay buffered (and may expire) rather than being converted.
        while (distilled_ready < quota &&
               static_cast<long long>(raw_births.size()) >= ctx.spec->n_pairs) {
            note_consumed();
            const double oldest_age = t - raw_births.front();
            const double f_in = cfg.f0 * std::exp(-oldest_age / cfg.link.tau_coh_s);
            for (int i = 0; i < ctx.spec->n_pairs; ++i) raw_births.pop_front();
            totals.consumed += ctx.spec->n_pairs;
            ++totals.attempts;
            if (unit(eng) < ctx.succ->p_succ(f_in)) {
                ++totals.successes;
                ++distilled_ready;
            }
        }
    };
    auto quota_met = [&]() {
        return ctx.spec != nullptr
                   ? distilled_ready >= quota
                   : static_cast<long long>(raw_births.size()) >= quota;
    };

    while (totals.rounds_done < ctx.rounds_target) {
        prune();
        if (quota_met()) {
            if (t < exec_end) {
                // Wait out the running round; arrivals keep landing meanwhile.
                while (next_arrival <= exec_end) {
                    raw_births.push_back(next_arrival);
                    next_arrival += gap(eng);
                    ++arrivals;
                }
                t = exec_end;
                try_distill();
                continue;  // re-check: raws may have expired during the wait
            }
            const double window = t - window_open;
            if (cfg.collect_samples) {
                ctx.result->collection_time_samples.push_back(window);
                ctx.result->earliest_fidelity_samples.push_back(
                    cfg.f0 * std::exp(-window / cfg.link.tau_coh_s));
            }
            if (ctx.spec != nullptr) {
                distilled_ready -= quota;
            } else {
                note_consumed();  // the oldest pair bounds the batch fidelity
                for (long long i = 0; i < quota; ++i) raw_births.pop_front();
                totals.consumed += quota;
            }
            totals.rounds_done += quota_rounds;
            exec_end = t + ctx.t_round * quota_rounds;
            window_open = t;
            continue;
        }
        if (arrivals > ctx.arrival_cap) {
            totals.unbounded = true;
            return;
        }
        t = next_arrival;
        raw_births.push_back(t);
        next_arrival += gap(eng);
        ++arrivals;
        prune();
        try_distill();
    }
}

}  // namespace

SimResult simulate_operation(const SimConfig& config, const ProtocolCatalog& catalog) {
    config.link.validate();
    if (config.runs < 1) throw std::invalid_argument("runs must be >= 1");
    if (!(config.f_discard > 0.25 && config.f_discard < 1.0)) {
        throw std::invalid_argument("f_discard must lie in (0.25, 1)");
    }
    if (config.f0 <= config.f_discard) {
        throw std::invalid_argument("f0 at or below the discard fidelity never buffers");
    }
    const ProtocolSpec* spec =
        config.protocol ? &catalog.get(*config.protocol) : nullptr;

    SolveConfig solve_cfg;
    solve_cfg.params = config.params;
    solve_cfg.scheme = config.scheme;
    solve_cfg.d_max = config.d_max;
    const SolveResult solve =
        self_consistent_distance(config.strategy, spec, config.link, config.f0,
                                 config.p_phys, config.p_l_target, solve_cfg);
    if (!solve.feasible() && solve.static_distance <= 0) {
        throw std::invalid_argument("scenario is infeasible even without decay");
    }

    SimResult result;
    result.analytically_feasible = solve.feasible();
    result.distance =
        solve.feasible() ? solve.plan->distance : solve.static_distance;
    result.t_round_s =
        config.link.tau_se_s +
        (spec != nullptr ? protocol_depth_rounds(*spec) * config.link.tau_se_s : 0.0);
    result.runs = config.runs;
    result.seed = config.seed;

    RunContext ctx;
    ctx.cfg = &config;
    ctx.spec = spec;
    ctx.distance = result.distance;
    ctx.n_round = pairs_per_round(result.distance, config.scheme);
    ctx.rounds_target = config.rounds > 0 ? config.rounds : result.distance;
    if (config.strategy == Strategy::PreBuffered &&
        ctx.rounds_target % result.distance != 0) {
        throw std::invalid_argument(
            "pre-buffered runs must cover whole operations (rounds % distance == 0)");
    }
    ctx.t_round = result.t_round_s;
    ctx.t_discard = discard_time(config.f0, config.f_discard, config.link.tau_coh_s);
    ctx.result = &result;
    result.rounds_per_run = ctx.rounds_target;

    const ProtocolSpec dummy = make_double_select();
    SuccessTable succ(spec != nullptr ? *spec : dummy, config.p_phys);
    ctx.succ = &succ;

    // Progress cutoff: far beyond what any converging scenario consumes.
    const long long per_attempt = spec != nullptr ? spec->n_pairs : 1;
    ctx.arrival_cap =
        200LL * (static_cast<long long>(ctx.rounds_target) * ctx.n_round * per_attempt +
                 100);

    std::vector<double> per_cycle(config.runs);
    int completed = 0;
    double sum = 0.0;
    for (int r = 0; r < config.runs; ++r) {
        RunTotals totals;
        run_once(ctx, static_cast<std::uint64_t>(r), totals);
        result.discards += totals.discards;
        result.attempts += totals.attempts;
        result.successes += totals.successes;
        result.raw_consumed_total += totals.consumed;
        if (totals.min_consumed_fidelity < result.min_consumed_fidelity) {
            result.min_consumed_fidelity = totals.min_consumed_fidelity;
        }
        if (totals.unbounded) {
            ++result.unbounded_runs;
            continue;
        }
        const double cycles =
            static_cast<double>(totals.rounds_done) / result.distance;
        per_cycle[completed] = totals.consumed / cycles;
        sum += per_cycle[completed];
        ++completed;
    }
    if (completed > 0) {
        result.pairs_per_cycle_mean = sum / completed;
        if (completed > 1) {
            double ss = 0.0;
            for (int i = 0; i < completed; ++i) {
                const double d = per_cycle[i] - result.pairs_per_cycle_mean;
                ss += d * d;
            }
            result.pairs_per_cycle_std = std::sqrt(ss / (completed - 1));
        }
    }
    result.realized_success_rate =
        result.attempts > 0
            ? static_cast<double>(result.successes) / result.attempts
            : 1.0;
    return result;
}

std::vector<BandRow> cost_bands(const std::vector<double>& fidelities,
                                const SimConfig& base,
                                const ProtocolCatalog& catalog) {
    if (fidelities.empty()) throw std::invalid_argument("fidelity grid is empty");
    std::vector<BandRow> rows;
    std::vector<const ProtocolSpec*> strategies{nullptr};
    for (const auto& p : catalog.protocols()) strategies.push_back(&p);

    for (std::size_t i = 0; i < fidelities.size(); ++i) {
        for (std::size_t s = 0; s < strategies.size(); ++s) {
            const ProtocolSpec* spec = strategies[s];
            BandRow row;
            row.fidelity = fidelities[i];
            row.protocol = spec != nullptr ? spec->name : "raw";
            row.runs = base.runs;
            row.seed = derive_seed(base.seed, i, s);

            const CostBreakdown analytical =
                static_cost(fidelities[i], base.p_l_target, spec, base.p_phys,
                            base.params, base.scheme, base.d_max);
            if (!analytical.feasible()) {
                rows.push_back(row);
                continue;
            }
            row.distance = analytical.distance;
            row.analytical_pairs_per_cycle = analytical.pairs_per_cycle;

            SimConfig cfg = base;
            cfg.f0 = fidelities[i];
            cfg.protocol =
                spec != nullptr ? std::optional<std::string>(spec->name) : std::nullopt;
            cfg.seed = row.seed;
            cfg.collect_samples = false;
            const SimResult sim = simulate_operation(cfg, catalog);
            row.distance = sim.distance;
            row.mean = sim.pairs_per_cycle_mean;
            row.std = sim.pairs_per_cycle_std;
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace bellplan
