#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "aaf/automata.hpp"
#include "aaf/stack_machines.hpp"

namespace aaf {

/// Maps raw environment events onto the finite perception alphabet and keeps
/// a bounded context window of the most recent symbols. Out-of-vocabulary
/// events are hard errors, never silently bucketed.
struct Tokenizer {
    NameTable alphabet;                            // Sigma
    std::unordered_map<std::string, SymbolId> tau; // declared event vocabulary
    std::size_t kappa = 1;                         // window size, > 0

    void validate() const;
};

struct TokenizeResult {
    Word symbols;      // tau applied pointwise to the whole event stream
    Word final_window; // the at-most-kappa symbols retained at the end
};

TokenizeResult tokenize_window(const Tokenizer& tk, std::span<const std::string> events);

// ---------------------------------------------------------------------------

/// A declared control-flow edge of a finite-state agent.
struct AgentEdge {
    StateId from = 0;
    SymbolId on = 0;
    StateId to = 0;
    std::optional<SymbolId> out; // Mealy action, if the agent produces output

    friend bool operator==(const AgentEdge&, const AgentEdge&) = default;
};

/// What an oracle answers when asked for the next move.
struct EdgeProposal {
    StateId to = 0;
    std::optional<SymbolId> out;

    friend bool operator==(const EdgeProposal&, const EdgeProposal&) = default;
};

/// Pluggable decision procedure standing in for an LLM. It selects among
/// predeclared edges; it cannot create states or memory. Implementations may
/// hold seed state, so one oracle instance serves one run at a time.
class TransitionOracle {
public:
    virtual ~TransitionOracle() = default;
    virtual EdgeProposal propose(StateId state, SymbolId symbol,
                                 std::span<const EdgeProposal> declared) = 0;
};

/// Deterministic table lookup; falls back to the first declared edge for
/// pairs missing from the table.
class TableOracle : public TransitionOracle {
public:
    void set(StateId state, SymbolId symbol, EdgeProposal choice);
    EdgeProposal propose(StateId, SymbolId, std::span<const EdgeProposal>) override;

private:
    std::unordered_map<std::uint64_t, EdgeProposal> table_;
};

/// Replays a fixed list of proposals, then repeats the last one. The script
/// may propose undeclared edges; containment is the caller's job.
class ScriptedOracle : public TransitionOracle {
public:
    explicit ScriptedOracle(std::vector<EdgeProposal> script) : script_(std::move(script)) {}
    EdgeProposal propose(StateId, SymbolId, std::span<const EdgeProposal>) override;

private:
    std::vector<EdgeProposal> script_;
    std::size_t next_ = 0;
};

/// Uniform choice among declared edges, reproducible per seed.
class SeededRandomOracle : public TransitionOracle {
public:
    explicit SeededRandomOracle(std::uint64_t seed) : rng_(seed) {}
    EdgeProposal propose(StateId, SymbolId, std::span<const EdgeProposal>) override;

private:
    SplitMix64 rng_;
};

/// Proposes arbitrary (state, action) pairs from the whole space, declared or
/// not. Used to fuzz containment.
class AdversarialOracle : public TransitionOracle {
public:
    AdversarialOracle(std::uint64_t seed, std::uint32_t state_count, std::uint32_t action_count)
        : rng_(seed), state_count_(state_count), action_count_(action_count) {}
    EdgeProposal propose(StateId, SymbolId, std::span<const EdgeProposal>) override;

private:
    SplitMix64 rng_;
    std::uint32_t state_count_;
    std::uint32_t action_count_;
};

// ---------------------------------------------------------------------------

/// Finite-memory agent: control flow restricted to declared edges over a
/// finite state graph. Possibly nondeterministic (several edges per state and
/// symbol); the induced acceptor is then an NFA.
struct RegularAgent {
    NameTable states;   // S
    NameTable alphabet; // Sigma
    NameTable actions;  // output alphabet; may be empty
    std::vector<AgentEdge> edges;
    StateId start = 0;
    std::vector<bool> accept; // F
    std::optional<Tokenizer> tokenizer;

    void validate() const;

    /// The induced acceptor (component-wise identity).
    Nfa to_nfa() const;

    /// True when exactly one edge is declared for every (state, symbol) pair.
    bool is_deterministic_total() const;

    /// Indices into `edges` declared for (state, symbol).
    std::vector<std::size_t> declared_edges(StateId state, SymbolId symbol) const;
};

/// Agent with a LIFO plan stack; PDA semantics.
struct CfAgent {
    NameTable states;
    NameTable alphabet;
    NameTable stack_alphabet; // Z
    std::vector<PdaRule> rules;
    StateId start = 0;
    std::vector<bool> accept;
    std::optional<Tokenizer> tokenizer;

    void validate() const;
    Pda to_pda() const; // component-wise identity
};

/// Agent whose memory tape is exactly k*|w| cells between endmarkers. Halts
/// accepting as soon as its state enters F; halts rejecting when no rule
/// applies. Loops are detected by configuration repetition.
struct CsAgent {
    NameTable states;
    NameTable input_alphabet;
    NameTable tape_alphabet; // writable interior symbols, includes Sigma
    std::vector<SymbolId> input_to_tape;
    std::optional<SymbolId> blank; // required when k > 1 (fills the extra cells)
    std::vector<std::optional<TmRule>> delta; // [q * (|Gamma|+2) + sym], endmarkers as in Lba
    StateId start = 0;
    std::vector<bool> accept; // F
    std::uint32_t k = 1;
    std::optional<Tokenizer> tokenizer;

    SymbolId left_end() const { return static_cast<SymbolId>(tape_alphabet.size()); }
    SymbolId right_end() const { return static_cast<SymbolId>(tape_alphabet.size() + 1); }
    std::size_t symbol_count() const { return tape_alphabet.size() + 2; }
    const std::optional<TmRule>& rule(StateId q, SymbolId g) const {
        return delta[q * symbol_count() + g];
    }

    /// Throws MemoryBoundViolationError when a rule would overwrite an
    /// endmarker or walk off the tape.
    void validate() const;
};

/// Agent with unbounded read/write memory; TM semantics with the input
/// encoded on the tape. Halts accepting on entering F, rejecting when no
/// rule applies.
struct TcAgent {
    NameTable states;
    NameTable input_alphabet;
    NameTable tape_alphabet;
    std::vector<SymbolId> input_to_tape;
    SymbolId blank = 0;
    std::vector<std::optional<TmRule>> delta; // [q * |Gamma| + g]
    StateId start = 0;
    std::vector<bool> accept; // F
    std::optional<Tokenizer> tokenizer;

    const std::optional<TmRule>& rule(StateId q, SymbolId g) const {
        return delta[q * tape_alphabet.size() + g];
    }
    void validate() const;
};

using AnyAgent = std::variant<RegularAgent, CfAgent, CsAgent, TcAgent>;

ClassLabel agent_class(const AnyAgent& a);
const NameTable& agent_input_alphabet(const AnyAgent& a);

// ---------------------------------------------------------------------------

enum class AgentVerdict { Accept, Reject, BudgetExhausted, LoopDetected };

struct AgentRunResult {
    AgentVerdict verdict = AgentVerdict::Reject;
    /// Regular agents: a witness path through the state graph when accepted.
    std::optional<Trace> fa_trace;
    /// Context-free agents: the accepting configuration chain.
    std::vector<PdaConfig> pda_path;
    /// Tape agents: (state, head) after each step, per-step control view.
    std::vector<std::pair<StateId, std::size_t>> control_path;
    std::uint64_t steps = 0;
};

/// Language membership under the class's acceptor semantics. For Regular
/// agents this is the NFA interpretation (accept iff some declared-edge
/// resolution accepts); a fixed oracle instead yields one concrete run via
/// sample_agent_run. The budget applies to CF (configuration search) and TC
/// (step count) agents and is ignored by the others.
AgentRunResult run_agent(const AnyAgent& agent, std::span<const SymbolId> w,
                         std::uint64_t budget, bool record_paths = true);

/// One mediated transition: the oracle picks among the declared edges for
/// (state, symbol). Throws NoDeclaredEdgeError when the graph is
/// under-specified at this point and UndeclaredEdgeError when the oracle
/// strays outside the declared set (the state is not updated).
std::pair<StateId, std::optional<SymbolId>> oracle_step_constrained(
    const RegularAgent& agent, TransitionOracle& oracle, StateId state, SymbolId symbol);

/// A single sampled trajectory of a Regular agent under the given oracle.
Trace sample_agent_run(const RegularAgent& agent, TransitionOracle& oracle,
                       std::span<const SymbolId> w);

} // namespace aaf
