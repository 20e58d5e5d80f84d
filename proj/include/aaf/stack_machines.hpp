#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "aaf/errors.hpp"
#include "aaf/ids.hpp"

namespace aaf {

/// One PDA transition. `on == nullopt` is an epsilon input move; `pop ==
/// nullopt` leaves the stack uninspected. `push` is written with its leftmost
/// symbol ending up on top, matching the usual alpha' convention.
struct PdaRule {
    StateId from = 0;
    std::optional<SymbolId> on;
    std::optional<SymbolId> pop;
    StateId to = 0;
    std::vector<SymbolId> push;

    friend bool operator==(const PdaRule&, const PdaRule&) = default;
};

/// Pushdown automaton, acceptance by final state. The initial stack is empty.
struct Pda {
    NameTable states;
    NameTable alphabet;
    NameTable stack_alphabet;
    std::vector<PdaRule> rules;
    StateId start = 0;
    std::vector<bool> accept;

    void validate() const;
};

/// A configuration of a PDA run: control state, how much input has been
/// consumed, and the stack with its top at the front.
struct PdaConfig {
    StateId state = 0;
    std::size_t index = 0;
    std::vector<SymbolId> stack;

    friend bool operator==(const PdaConfig&, const PdaConfig&) = default;
    friend auto operator<=>(const PdaConfig& a, const PdaConfig& b) {
        if (auto c = a.state <=> b.state; c != 0) return c;
        if (auto c = a.index <=> b.index; c != 0) return c;
        return a.stack <=> b.stack;
    }
};

enum class PdaVerdict { Accept, Reject, BudgetExhausted };

struct PdaResult {
    PdaVerdict verdict = PdaVerdict::Reject;
    /// Configuration chain from the initial to an accepting configuration
    /// (present only on Accept).
    std::vector<PdaConfig> accepting_path;
    std::uint64_t configs_explored = 0;
};

/// Breadth-first search over configurations with duplicate suppression.
/// Reject is definitive: it is only returned once the deduplicated frontier
/// empties. The budget bounds the number of expanded configurations and only
/// matters when the stack grows without bound.
PdaResult run_pda(const Pda& p, std::span<const SymbolId> w, std::uint64_t budget);

struct PdaDeterminismReport {
    bool deterministic = true;
    /// Pairs of rule indices that can both fire at some choice point.
    std::vector<std::pair<std::size_t, std::size_t>> conflicts;
};

/// Checks determinism over the states reachable in the rule graph: no two
/// rules may apply at the same (state, input, stack-top), and an epsilon-input
/// rule may not coexist with a symbol rule on an overlapping stack top.
PdaDeterminismReport is_deterministic_pda(const Pda& p);

// ---------------------------------------------------------------------------

enum class TapeMove { Left, Right };

struct TmRule {
    StateId to = 0;
    SymbolId write = 0;
    TapeMove move = TapeMove::Right;

    friend bool operator==(const TmRule&, const TmRule&) = default;
};

/// Deterministic single-tape Turing machine. The tape is one-way infinite to
/// the right with lazy blank extension; a left move at cell 0 keeps the head
/// at 0.
struct Tm {
    NameTable states;
    NameTable input_alphabet;            // Sigma
    NameTable tape_alphabet;             // Gamma, contains Sigma and the blank
    std::vector<SymbolId> input_to_tape; // Sigma id -> Gamma id
    SymbolId blank = 0;                  // Gamma id, not in Sigma
    std::vector<std::optional<TmRule>> delta; // [q * |Gamma| + g]
    StateId start = 0;
    StateId accept_state = 0;
    StateId reject_state = 0;

    const std::optional<TmRule>& rule(StateId q, SymbolId g) const {
        return delta[q * tape_alphabet.size() + g];
    }
    void validate() const;
};

struct TapeSnapshot {
    std::vector<SymbolId> cells; // materialized prefix of the tape
    std::size_t head = 0;
    std::uint64_t step_count = 0;
};

enum class TmVerdict { Accept, Reject, Timeout };

struct TmResult {
    TmVerdict verdict = TmVerdict::Timeout;
    TapeSnapshot snapshot;
};

TmResult run_tm(const Tm& t, std::span<const SymbolId> w, std::uint64_t budget);

// ---------------------------------------------------------------------------

/// Deterministic linear bounded automaton: a TM confined to the tape <w>.
/// Endmarkers are distinguished pseudo-symbols outside the writable alphabet;
/// their ids are |Gamma| (left) and |Gamma|+1 (right).
struct Lba {
    NameTable states;
    NameTable input_alphabet;            // Sigma, no endmarkers
    NameTable tape_alphabet;             // Gamma: writable interior symbols
    std::vector<SymbolId> input_to_tape;
    std::vector<std::optional<TmRule>> delta; // [q * (|Gamma|+2) + sym]
    StateId start = 0;
    StateId accept_state = 0;
    StateId reject_state = 0;

    SymbolId left_end() const { return static_cast<SymbolId>(tape_alphabet.size()); }
    SymbolId right_end() const { return static_cast<SymbolId>(tape_alphabet.size() + 1); }
    std::size_t symbol_count() const { return tape_alphabet.size() + 2; }
    const std::optional<TmRule>& rule(StateId q, SymbolId g) const {
        return delta[q * symbol_count() + g];
    }

    /// Throws EndmarkerViolationError if any rule overwrites an endmarker or
    /// moves the head past one; ValidationError for structural defects.
    void validate() const;
};

/// Head ranges over 0..|interior|+1; positions 0 and |interior|+1 hold the
/// endmarkers and are not stored.
struct LbaConfig {
    StateId state = 0;
    std::size_t head = 0;
    std::vector<SymbolId> interior;

    friend bool operator==(const LbaConfig&, const LbaConfig&) = default;
    friend auto operator<=>(const LbaConfig& a, const LbaConfig& b) {
        if (auto c = a.state <=> b.state; c != 0) return c;
        if (auto c = a.head <=> b.head; c != 0) return c;
        return a.interior <=> b.interior;
    }
};

enum class LbaVerdict { Accept, Reject, LoopDetected };

struct LbaLoopWitness {
    LbaConfig config;      // first configuration seen twice
    std::uint64_t period;  // steps between the two occurrences
};

struct LbaResult {
    LbaVerdict verdict = LbaVerdict::Reject;
    std::uint64_t steps = 0;
    std::optional<LbaLoopWitness> loop; // present on LoopDetected
};

/// |Q| * (n+2) * |Gamma|^n, saturating at 2^62. Exceeding this many steps
/// proves a repeat even without the memo.
std::uint64_t lba_configuration_bound(const Lba& l, std::size_t input_len);

/// Simulates on tape <w>. LoopDetected is a definitive non-accept verdict,
/// found by exact configuration repetition (or the count bound as a backstop).
LbaResult run_lba(const Lba& l, std::span<const SymbolId> w);

/// One step from an arbitrary configuration; used to replay loop witnesses.
/// Returns nullopt when the configuration is halting.
std::optional<LbaConfig> lba_step(const Lba& l, const LbaConfig& c);

} // namespace aaf
