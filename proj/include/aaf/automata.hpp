#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aaf/errors.hpp"
#include "aaf/ids.hpp"

namespace aaf {

/// Deterministic finite automaton with a total transition function.
/// States and symbols are interned; ids index the name tables.
struct Dfa {
    NameTable states;
    NameTable alphabet;
    std::vector<StateId> delta; // delta[q * |alphabet| + a]
    StateId start = 0;
    std::vector<bool> accept; // |states| flags

    StateId next(StateId q, SymbolId a) const { return delta[q * alphabet.size() + a]; }
    bool is_accepting(StateId q) const { return accept[q]; }

    /// Throws ValidationError if any structural invariant fails.
    void validate() const;
};

/// Nondeterministic finite automaton with optional epsilon moves. Epsilon is
/// not a member of the alphabet; it lives in its own transition table.
struct Nfa {
    NameTable states;
    NameTable alphabet;
    std::vector<std::vector<StateId>> delta; // delta[q * |alphabet| + a], sorted
    std::vector<std::vector<StateId>> eps;   // eps[q], sorted
    StateId start = 0;
    std::vector<bool> accept;

    const std::vector<StateId>& targets(StateId q, SymbolId a) const {
        return delta[q * alphabet.size() + a];
    }

    void add_transition(StateId from, SymbolId on, StateId to);
    void add_epsilon(StateId from, StateId to);

    void validate() const;
};

/// Mealy machine: a DFA plus an output symbol per transition.
struct Mealy {
    Dfa fa;
    NameTable outputs;              // output alphabet
    std::vector<SymbolId> lambda;   // lambda[q * |alphabet| + a]

    SymbolId output(StateId q, SymbolId a) const { return lambda[q * fa.alphabet.size() + a]; }

    void validate() const;
};

/// Record of a single deterministic run: the input, every state visited
/// (|input|+1 of them) and, for transducers, the emitted outputs.
struct Trace {
    Word input;
    std::vector<StateId> visited;
    std::optional<Word> outputs;
    bool accepted = false;
};

enum class ProductMode { Intersection, Union, Difference };

/// Runs the DFA on w. Throws UnknownSymbolError if w strays outside the
/// alphabet.
Trace run_dfa(const Dfa& dfa, std::span<const SymbolId> w);

/// Runs the Mealy machine; the trace's outputs hold lambda applied along the
/// visited path, one output per input symbol.
Trace run_mealy(const Mealy& m, std::span<const SymbolId> w);

/// Direct nondeterministic membership: simulates the Nfa by tracking the
/// reachable state set with epsilon closure at every step. This is the
/// reference semantics the subset construction is checked against.
bool nfa_accepts(const Nfa& nfa, std::span<const SymbolId> w);

/// Epsilon closure of a state set, returned sorted.
std::vector<StateId> epsilon_closure(const Nfa& nfa, std::span<const StateId> seed);

/// Subset construction. Only subsets reachable from the closure of the start
/// state are materialized; each DFA state is named after the (sorted) Nfa
/// subset it represents, e.g. "{q0,q2}".
Dfa nfa_to_dfa(const Nfa& nfa);

/// Language-equivalent Nfa without epsilon moves:
/// delta'(q, a) = closure(move(closure(q), a)), accept' marks states whose
/// closure meets the accept set.
Nfa remove_epsilons(const Nfa& nfa);

/// Product automaton over reachable state pairs. Accept set follows the mode:
/// both accepting / either / a-but-not-b. Alphabets must agree as name sets.
Dfa dfa_product(const Dfa& a, const Dfa& b, ProductMode mode);

/// States reachable from the start state over any input.
std::vector<bool> reachable_states(const Dfa& dfa);

/// Translate a word of symbol names into ids for the given alphabet.
Word intern_word(const NameTable& alphabet, const std::vector<std::string>& names);

namespace detail {
/// Remap b's symbol ids so they line up with a's table; throws
/// AlphabetMismatchError if the name sets differ.
std::vector<SymbolId> alphabet_remap(const NameTable& a, const NameTable& b);
} // namespace detail

} // namespace aaf
