#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace bellplan {

/// Bell-diagonal two-qubit state, stored as weights over the Pauli frame
/// (I, X, Y, Z) of one half relative to the target Bell state. w[0] is the
/// fidelity. Weights are non-negative and sum to 1 within 1e-12.
struct BellDiagonalState {
    std::array<double, 4> w{1.0, 0.0, 0.0, 0.0};

    double fidelity() const { return w[0]; }
    void validate() const;
};

/// Canonical embedding of a scalar fidelity: (F, (1-F)/3, (1-F)/3, (1-F)/3).
BellDiagonalState werner_state(double fidelity);

enum class ParityBasis { X, Z };

/// Optional local frame change applied to a step's inputs.
enum class PreRotation {
    None,
    Dejmps,       // Y <-> Z component exchange on both pairs (undone on the output)
    WernerTwirl,  // inputs twirled to Werner form, output twirled as well
};

enum class RestartPolicy { FullRestart, SelectiveRetry };

/// One pairwise selection round. `target` keeps its (purified) pair; the
/// ancilla registers are measured and freed. A double-selection round adds a
/// second ancilla that verifies the first ancilla's back-propagating errors.
///
/// Basis says which error type the round checks on the target:
///   Z-parity check of the ancilla (basis == X) detects X/Y errors,
///   X-parity check (basis == Z) detects Z/Y errors.
struct PurifyStep {
    ParityBasis basis = ParityBasis::X;
    int target = 0;
    int anc1 = 1;
    int anc2 = -1;  // -1: single selection
    PreRotation rotation = PreRotation::None;

    bool double_select() const { return anc2 >= 0; }
    // Two-qubit-operation timesteps: CNOT layers plus one parallel
    // measurement layer.
    int op_timesteps() const { return double_select() ? 3 : 2; }
};

/// A distillation protocol as an explicit register program. Register `target`
/// of the final step (conventionally 0) carries the output pair. Any register
/// that is referenced while empty is loaded with a fresh raw pair, so
/// `n_pairs` is implied by the step list; `op_count` is the serial circuit
/// depth in two-qubit-operation timesteps.
struct ProtocolSpec {
    std::string name;
    int n_pairs = 0;
    int op_count = 0;
    std::vector<PurifyStep> steps;
    RestartPolicy restart = RestartPolicy::FullRestart;

    static int implied_n_pairs(const std::vector<PurifyStep>& steps);
    static int implied_op_count(const std::vector<PurifyStep>& steps);

    /// Checks n_pairs/op_count against the step list and basic register
    /// sanity. Throws std::invalid_argument on mismatch.
    void validate() const;

    std::string to_json() const;
    static ProtocolSpec from_json(const std::string& text);
};

struct ProtocolOutcome {
    double p_eff = 0.0;   // 1 - output fidelity
    double p_succ = 1.0;  // probability that every heralded check passes
    BellDiagonalState output;
    std::vector<double> step_pass;  // conditional pass probability per step
};

class ProtocolCatalog {
  public:
    /// The three production protocols: double_select (3->1, 3 ops),
    /// expedient (5->1, 6 ops), stringent (13->1, 18 ops).
    static ProtocolCatalog standard();
    /// standard() plus the two-pair reference recurrences dejmps and bbpssw,
    /// used for validation rather than planning.
    static ProtocolCatalog with_validation();

    void add(ProtocolSpec spec);
    bool contains(std::string_view name) const;
    const ProtocolSpec& get(std::string_view name) const&;  // throws std::out_of_range
    const std::vector<ProtocolSpec>& protocols() const& { return entries_; }
    // Rvalue catalogs hand results over by value so lookups and range-for on
    // a temporary catalog cannot dangle.
    ProtocolSpec get(std::string_view name) && { return get(name); }
    std::vector<ProtocolSpec> protocols() && { return std::move(entries_); }

    std::string to_json() const;
    static ProtocolCatalog from_json(const std::string& text);
    /// Merges protocols parsed from a JSON document into this catalog.
    void merge_json(const std::string& text);

  private:
    std::vector<ProtocolSpec> entries_;
};

/// Factory helpers for the individual catalog entries.
ProtocolSpec make_double_select();
ProtocolSpec make_expedient();
ProtocolSpec make_stringent();
ProtocolSpec make_dejmps();
ProtocolSpec make_bbpssw();

/// Exact (p_eff, p_succ) of a protocol on Werner inputs of error rate p_raw,
/// with noisy local operations: each local two-qubit gate is followed by
/// two-qubit depolarizing noise (uniform over the 15 non-identity Paulis at
/// total rate p_local) and each local measurement outcome flips with
/// probability p_local. Computed by propagating the joint Pauli-frame
/// distribution through every step and conditioning on all selection checks
/// passing; states stay Bell-diagonal throughout, so the result is exact for
/// this noise model.
///
/// Preconditions: p_raw in [0, 0.75] (the Werner embedding is unphysical
/// below fidelity 1/4), p_local in [0, 1). Throws std::runtime_error if the
/// joint pass probability underflows 1e-12 (degenerate protocol).
ProtocolOutcome evaluate_protocol(const ProtocolSpec& spec, double p_raw,
                                  double p_local);

/// Same evaluation starting from an explicit Bell-diagonal raw state.
ProtocolOutcome evaluate_protocol(const ProtocolSpec& spec,
                                  const BellDiagonalState& raw, double p_local);

/// Expected raw pairs per syndrome round under serial execution with full
/// restarts: (n_pairs / p_succ) * n_round.
double serial_raw_cost(const ProtocolSpec& spec, const ProtocolOutcome& outcome,
                       int n_round);

/// Smallest k with 1 - (1 - p_succ)^k >= 0.99 (k = 1 once p_succ >= 0.99).
int multiplexing_factor(double p_succ);

/// Raw pairs per round with k-fold parallel attempts:
/// n_round * n_pairs * multiplexing_factor(p_succ). With successes buffered
/// across rounds the long-run average still converges to serial_raw_cost.
long long parallel_raw_cost(const ProtocolSpec& spec,
                            const ProtocolOutcome& outcome, int n_round);

/// Expected raw pairs consumed per successful output under the protocol's
/// restart policy. FullRestart gives n_pairs / p_succ. SelectiveRetry lets a
/// failed ancilla-preparation step (one whose target is not the output
/// register) re-run locally, while a failed check on the output register
/// still discards the whole attempt.
double expected_raw_pairs_per_success(const ProtocolSpec& spec,
                                      const ProtocolOutcome& outcome);

}  // namespace bellplan
