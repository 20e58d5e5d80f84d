#pragma once

#include <string>
#include <variant>
#include <vector>

#include "aaf/agents.hpp"
#include "aaf/parallel.hpp"
#include "aaf/verification.hpp"

namespace aaf {

using AnyMachine = std::variant<Dfa, Nfa, Mealy, Pda, Lba, Tm>;

std::string_view machine_kind(const AnyMachine& m);
const NameTable& machine_input_alphabet(const AnyMachine& m);

/// Records how a construction mapped one model onto another, plus the bound
/// of any conformance check run on the result.
struct ConstructionReport {
    std::string source_kind;
    std::string target_kind;
    std::vector<std::pair<std::string, std::string>> state_map;    // source -> target
    std::vector<std::pair<std::string, std::string>> alphabet_map; // source -> target
    std::vector<std::string> notes;
    std::optional<int> validated_to_length; // conformance checked on all words up to here
    bool validated_equivalent = false;
};

struct AgentToMachineResult {
    AnyMachine machine;
    ConstructionReport report;
};

struct MachineToAgentResult {
    AnyAgent agent;
    ConstructionReport report;
};

/// Component-wise constructions taking each agent class to its automaton:
/// Regular -> Dfa (deterministic total) or Nfa, CF -> Pda, CS -> Lba,
/// TC -> Tm. Language is preserved.
AgentToMachineResult agent_to_automaton(const AnyAgent& agent);

/// Inverse constructions; for a Tm the agent's runtime configurations are the
/// (state, head) pairs and the memory holds the tape.
MachineToAgentResult automaton_to_agent(const AnyMachine& machine);

// ---------------------------------------------------------------------------

/// One way of expanding a subgoal into an ordered sequence of child subgoals.
/// Several rules may share a name (alternative expansions). A `resume` field
/// other than the unique parent declares a cross-return and is rejected.
struct PlanRule {
    std::string name;
    std::vector<std::string> children;
    std::optional<std::string> resume;
};

struct PlanGrammar {
    std::string root;
    std::vector<PlanRule> rules;
};

/// Builds the PDA accepting exactly the perception traces of completed plans:
/// entering subgoal g is the symbol "g" and pushes a frame, completing it is
/// "done-g" and pops. Throws DisciplineViolationError when a rule encodes a
/// jump into a non-top frame.
Pda plan_to_pda(const PlanGrammar& plan);

// ---------------------------------------------------------------------------

/// Budgets for the engines behind bounded acceptors. PDA membership falls
/// back to the exact pre*-based decision when the configuration search
/// exhausts its budget; TM membership is budgeted by nature.
struct AcceptorLimits {
    std::uint64_t pda_budget = 1 << 16;
    std::uint64_t tm_budget = 4096;
};

/// A machine reduced to its membership predicate, self-contained and
/// thread-safe.
struct BoundedAcceptor {
    NameTable alphabet;
    MembershipFn accepts;
};

BoundedAcceptor make_acceptor(const AnyMachine& m, const AcceptorLimits& limits = {});
BoundedAcceptor make_acceptor(const AnyAgent& a, const AcceptorLimits& limits = {});

struct TraceEquivalenceResult {
    bool equivalent = true;
    std::optional<Word> witness; // first disagreement, in the left alphabet's ids
    std::uint64_t words_checked = 0;
};

/// Exhaustively compares membership on every word of length <= max_len
/// (shortlex order, so the witness is the first disagreement). Alphabets must
/// agree as name sets.
TraceEquivalenceResult check_trace_equivalence(const BoundedAcceptor& a, const BoundedAcceptor& b,
                                               int max_len);
TraceEquivalenceResult check_trace_equivalence(const AnyMachine& a, const AnyMachine& b,
                                               int max_len, const AcceptorLimits& limits = {});

} // namespace aaf
