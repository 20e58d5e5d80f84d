#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aaf/automata.hpp"
#include "aaf/stack_machines.hpp"

namespace aaf {

/// Finite automaton over stack symbols representing a regular set of PDA
/// configurations: (q, alpha) is in the set iff reading alpha (top first)
/// from vertex q reaches a final vertex. The first |Q| vertices mirror the
/// PDA control states; saturation may add epsilon transitions for
/// stack-neutral rules.
struct PAutomaton {
    std::size_t num_control = 0; // vertices 0..num_control-1 are PDA states
    std::size_t num_vertices = 0;
    std::size_t stack_symbols = 0;

    struct Transition {
        std::uint32_t from = 0;
        std::optional<SymbolId> label; // nullopt = epsilon
        std::uint32_t to = 0;

        friend bool operator==(const Transition&, const Transition&) = default;
    };
    std::vector<Transition> transitions;
    std::vector<bool> final_vertices;

    bool accepts_config(StateId q, std::span<const SymbolId> stack) const;

    /// Target set {(q, alpha) : q in targets, alpha arbitrary}.
    static PAutomaton control_states_any_stack(const Pda& p, const std::vector<bool>& targets);
    /// Target set {(q, empty) : q in targets}.
    static PAutomaton control_states_empty_stack(const Pda& p, const std::vector<bool>& targets);
    /// Target set containing the single configuration (q, stack).
    static PAutomaton single_config(const Pda& p, StateId q, std::span<const SymbolId> stack);
};

/// Backward reachability of a pushdown system: the returned automaton
/// represents exactly the configurations from which some configuration in
/// `targets` is reachable through the step relation (input labels on rules
/// are existentially abstracted). Saturation adds transitions until fixpoint.
PAutomaton pda_prestar(const Pda& p, const PAutomaton& targets);

/// Exact PDA membership: products the word positions into the control states
/// and asks pre* whether the initial configuration can reach an accepting
/// final-position configuration. Total, unlike the budgeted BFS.
bool pda_accepts_exact(const Pda& p, std::span<const SymbolId> w);

// ---------------------------------------------------------------------------

struct SafetyResult {
    bool safe = true;
    std::optional<Word> counterexample; // shortest witness reaching an unsafe state
};

/// BFS reachability of the unsafe set; the counterexample is a shortest
/// witness (first in shortlex order among the shortest).
SafetyResult fa_safety(const Dfa& d, const std::vector<StateId>& unsafe);

struct LassoWitness {
    Word stem;  // from the start state to the cycle entry, avoiding goal
    Word cycle; // loops forever outside goal
};

struct InevitabilityResult {
    bool inevitable = true;
    std::optional<LassoWitness> witness;
};

/// Inevitable iff every infinite input path eventually visits the goal set,
/// decided by searching for a reachable cycle entirely outside goal.
InevitabilityResult fa_inevitability(const Dfa& d, const std::vector<StateId>& goal);

struct DfaEquivalenceResult {
    bool equivalent = true;
    std::optional<Word> distinguishing; // shortest word accepted by exactly one side
};

/// Product-based equivalence: BFS over state pairs until an XOR-accepting
/// pair is found.
DfaEquivalenceResult dfa_equivalence(const Dfa& a, const Dfa& b);

struct LbaHaltReport {
    bool halts = false;
    LbaVerdict verdict = LbaVerdict::LoopDetected; // Accept/Reject when halts
    std::optional<LbaLoopWitness> witness;         // present when looping
    std::uint64_t steps = 0;
};

/// Wraps run_lba; Loops is a definitive decision backed by a replayable
/// repeated configuration, not a timeout.
LbaHaltReport lba_halts(const Lba& l, std::span<const SymbolId> w);

// ---------------------------------------------------------------------------

enum class QueryKind { SafetyReachability, Inevitability, Membership, Halting, Equivalence };

enum class Decidability { Decidable, DecidableIfDeterministic, Undecidable };

struct CapabilityEntry {
    ClassLabel cls;
    QueryKind query;
    Decidability status;
    bool implemented;  // whether this library ships a decision procedure
    std::string basis; // the classical result the entry rests on
};

/// The per-class decidability matrix. Entries are fixed data; the basis
/// strings cite the standard theorems.
const std::vector<CapabilityEntry>& capability_matrix();

CapabilityEntry capability_query(ClassLabel cls, QueryKind query);

std::string_view to_string(QueryKind q);
std::string_view to_string(Decidability d);
std::optional<QueryKind> query_kind_from_string(std::string_view s);

} // namespace aaf
