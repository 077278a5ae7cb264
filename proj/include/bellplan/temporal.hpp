#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bellplan/cost_model.hpp"
#include "bellplan/distillation.hpp"
#include "bellplan/error_model.hpp"

namespace bellplan {

/// 99th percentile of the standard normal, pinned to the two-digit value so
/// every derived number is bit-stable.
inline constexpr double kPhiInv99 = 2.33;

/// Fidelity below which a buffered pair is discarded (error rate 13.3%,
/// slightly below the effective threshold).
inline constexpr double kDefaultDiscardFidelity = 0.867;

/// Heralded-link and memory parameters of one module pair.
struct LinkParams {
    double lambda_hz = 0.0;      // Bell pairs per second
    int interfaces = 0;          // optical interfaces I (0 = unspecified)
    double attempt_rate_hz = 0;  // per-interface attempt rate (0 = unspecified)
    double p_herald = 0.0;       // heralding probability (0 = unspecified)
    double tau_coh_s = 10.0;     // Bell-pair memory coherence time
    double mu = 5.0;             // tau_dep / tau_coh, >= 1
    double tau_se_s = 1e-3;      // syndrome extraction round duration
    double tau_reset_s = 0.0;    // communication-qubit reset time

    double eta_link() const { return lambda_hz * tau_coh_s; }
    void validate() const;
};

struct CollectionStats {
    double mean;      // n / lambda
    double variance;  // n / lambda^2
    double t99;       // (n/lambda) (1 + 2.33/sqrt(n))
};

/// Erlang statistics of the time to collect n pairs at rate lambda.
CollectionStats collection_time_stats(int n, double lambda_hz);

/// Stored-pair fidelity after time t. The default exponential form is the
/// high-fidelity approximation; `exact_depolarizing` switches to
/// 1/4 + (f0 - 1/4) exp(-t/tau).
double decayed_fidelity(double f0, double t_s, double tau_coh_s,
                        bool exact_depolarizing = false);

/// Maximum viable storage time tau_coh * ln(f0 / f_discard). Returns 0 when
/// f0 <= f_discard: the pair is already expired, zero viable time.
double discard_time(double f0, double f_discard, double tau_coh_s);

/// Generation keeps pace with per-round consumption at 99% confidence:
/// lambda*T - 2.33*sqrt(lambda*T) >= C_round.
bool otf_condition(double lambda_hz, double t_round_s, double c_round);

struct OtfFidelityBound {
    double bound;        // f0 * exp(-T_round / tau_coh)
    double first_order;  // f0 * (1 - nu)
    double nu;           // T_round / tau_coh
};
OtfFidelityBound otf_stored_fidelity_bound(double f0, double t_round_s,
                                           double tau_coh_s);

/// Round-by-round collection: the earliest pair of each batch decays over one
/// collection window, f0 * exp(-C_round / eta_link).
double strategy1_stored_fidelity(double f0, double c_round, double eta_link);

/// Pre-buffered collection: the earliest pair waits d_s windows,
/// f0 * exp(-d_s * C_round / eta_link).
double strategy2_stored_fidelity(double f0, int d_s, double c_round,
                                 double eta_link);

/// Per-round depolarizing error on idling data qubits while a batch collects:
/// 1 - exp(-C_round / (mu * eta_link)).
double idle_error(double c_round, double mu, double eta_link);

enum class Strategy { RoundByRound, PreBuffered };

enum class RegimeKind { OnTheFly, NoExpire, Infeasible };

struct Regime {
    RegimeKind kind = RegimeKind::Infeasible;
    double eta_link = 0.0;
    double n_gen = 0.0;   // lambda * T_round
    double c_round = 0.0;
};

std::string to_string(RegimeKind kind);
std::string to_string(Strategy strategy);

/// Fixed point of the distance <-> decay feedback loop.
struct ConvergedPlan {
    int distance = 0;               // converged odd distance
    double stored_fidelity = 0.0;   // earliest-pair fidelity at consumption
    double idle_error = 0.0;        // 0 for the pre-buffered strategy
    double effective_local = 0.0;   // p_phys + idle_error
    double p_bell = 0.0;            // seam error rate entering the code
    double p_succ = 1.0;            // distillation success at the stored fidelity (1 for raw)
    double pairs_per_round = 0.0;   // C_round, raw pairs
    double pairs_per_cycle = 0.0;   // C_round * distance
    double t_round_s = 0.0;         // tau_se (+ distillation depth)
    Regime regime{};
    int iterations = 0;
    Strategy strategy = Strategy::RoundByRound;
};

struct SolveResult {
    std::optional<ConvergedPlan> plan;
    std::vector<int> trace;   // distance iterates, starting at the static seed
    int static_distance = -1; // -1 when already statically infeasible

    bool feasible() const { return plan.has_value(); }
};

struct SolveConfig {
    FittedModelParams params{};
    SeamScheme scheme{};
    int d_max = kDefaultDistanceCap;
    int max_iterations = 100;
    double p_succ_tol = 1e-12;
};

/// Iterates d <- d*(p_bell(d), p_local(d)) from the static seed until the
/// distance and (for distillation) the success probability stop moving.
/// Round-by-round strategy: stored fidelity decays over one collection window
/// and idling data qubits pick up idle_error; pre-buffered strategy: the full
/// batch decays, no idle term. Distillation decays the raw inputs first, then
/// applies the protocol map, with C_round = (n_pairs/p_succ) * n_round.
/// Returns an empty plan when the distance escapes d_max (infeasible). A
/// shrinking iterate would indicate a non-monotone model; the solver throws
/// with the iterate trace rather than looping.
SolveResult self_consistent_distance(Strategy strategy, const ProtocolSpec* spec,
                                     const LinkParams& link, double f0,
                                     double p_phys, double p_l_target,
                                     const SolveConfig& config = {});

/// OnTheFly if the OTF condition holds at the converged plan's (T_round,
/// C_round); NoExpire if the solver converges but OTF fails; Infeasible
/// otherwise.
Regime classify_regime(Strategy strategy, const ProtocolSpec* spec,
                       const LinkParams& link, double f0, double p_phys,
                       double p_l_target, const SolveConfig& config = {});

/// Smallest link efficiency (lambda * tau_coh) at which the self-consistent
/// solver still converges, found by bisection. Throws std::domain_error when
/// the scenario is infeasible even without decay.
double min_link_efficiency(Strategy strategy, const ProtocolSpec* spec,
                           const LinkParams& link, double f0, double p_phys,
                           double p_l_target, const SolveConfig& config = {},
                           double rel_tol = 1e-9);

/// Production-constraint form of the minimum link efficiency at a converged
/// operating point: C_round / ln(f0/f_discard) * (1 + 2.33/sqrt(C_round)).
double production_bound_eta(double c_round, double f0,
                            double f_discard = kDefaultDiscardFidelity);

/// No-decay-feedback feasibility bound: the whole buffered batch must stay
/// above f_th, giving n_round/ln(f0/f_th) for round-by-round collection and
/// d_s times that when the full operation is pre-buffered.
double feasibility_bound_eta(Strategy strategy, int d_s, double f0,
                             double f_th = kDefaultDiscardFidelity,
                             SeamScheme scheme = {});

}  // namespace bellplan
