#include "aaf/agents.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace aaf {

void Tokenizer::validate() const {
    std::vector<std::string> bad;
    if (kappa == 0) bad.push_back("tokenizer window size must be positive");
    for (const auto& [event, sym] : tau) {
        if (sym >= alphabet.size())
            bad.push_back("tokenizer maps event \"" + event + "\" outside the alphabet");
    }
    if (!bad.empty()) throw ValidationError(std::move(bad));
}

TokenizeResult tokenize_window(const Tokenizer& tk, std::span<const std::string> events) {
    tk.validate();
    TokenizeResult result;
    result.symbols.reserve(events.size());
    for (const auto& e : events) {
        auto it = tk.tau.find(e);
        if (it == tk.tau.end())
            throw UnknownEventError("event \"" + e + "\" is not in the declared vocabulary");
        result.symbols.push_back(it->second);
        result.final_window.push_back(it->second);
        if (result.final_window.size() > tk.kappa)
            result.final_window.erase(result.final_window.begin());
    }
    return result;
}

// ---------------------------------------------------------------------------

namespace {
std::uint64_t pair_key(StateId s, SymbolId a) {
    return (static_cast<std::uint64_t>(s) << 32) | a;
}
} // namespace

void TableOracle::set(StateId state, SymbolId symbol, EdgeProposal choice) {
    table_[pair_key(state, symbol)] = choice;
}

EdgeProposal TableOracle::propose(StateId state, SymbolId symbol,
                                  std::span<const EdgeProposal> declared) {
    auto it = table_.find(pair_key(state, symbol));
    if (it != table_.end()) return it->second;
    if (declared.empty()) return EdgeProposal{};
    return declared.front();
}

EdgeProposal ScriptedOracle::propose(StateId, SymbolId, std::span<const EdgeProposal>) {
    if (script_.empty()) return EdgeProposal{};
    if (next_ < script_.size()) return script_[next_++];
    return script_.back();
}

EdgeProposal SeededRandomOracle::propose(StateId, SymbolId,
                                         std::span<const EdgeProposal> declared) {
    if (declared.empty()) return EdgeProposal{};
    return declared[static_cast<std::size_t>(rng_.below(declared.size()))];
}

EdgeProposal AdversarialOracle::propose(StateId, SymbolId, std::span<const EdgeProposal>) {
    EdgeProposal p;
    p.to = static_cast<StateId>(rng_.below(std::max<std::uint32_t>(state_count_, 1)));
    if (action_count_ > 0 && rng_.below(2) == 0)
        p.out = static_cast<SymbolId>(rng_.below(action_count_));
    return p;
}

// ---------------------------------------------------------------------------

void RegularAgent::validate() const {
    std::vector<std::string> bad;
    if (states.empty()) bad.push_back("state set is empty");
    if (start >= states.size()) bad.push_back("start state out of range");
    if (accept.size() != states.size()) bad.push_back("accept flags do not cover the state set");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const AgentEdge& e = edges[i];
        if (e.from >= states.size() || e.to >= states.size())
            bad.push_back("edge " + std::to_string(i) + " references a state out of range");
        if (e.on >= alphabet.size())
            bad.push_back("edge " + std::to_string(i) + " reads a symbol outside the alphabet");
        if (e.out && *e.out >= actions.size())
            bad.push_back("edge " + std::to_string(i) + " emits an action outside the action set");
    }
    if (tokenizer) {
        tokenizer->validate();
        if (!(tokenizer->alphabet == alphabet))
            bad.push_back("tokenizer alphabet does not match the agent alphabet");
    }
    if (!bad.empty()) throw ValidationError(std::move(bad));
}

Nfa RegularAgent::to_nfa() const {
    Nfa n;
    n.states = states;
    n.alphabet = alphabet;
    n.delta.assign(states.size() * alphabet.size(), {});
    n.eps.assign(states.size(), {});
    n.start = start;
    n.accept = accept;
    for (const AgentEdge& e : edges) n.add_transition(e.from, e.on, e.to);
    return n;
}

bool RegularAgent::is_deterministic_total() const {
    std::vector<std::uint32_t> count(states.size() * alphabet.size(), 0);
    for (const AgentEdge& e : edges) ++count[e.from * alphabet.size() + e.on];
    return std::all_of(count.begin(), count.end(), [](std::uint32_t c) { return c == 1; });
}

std::vector<std::size_t> RegularAgent::declared_edges(StateId state, SymbolId symbol) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (edges[i].from == state && edges[i].on == symbol) out.push_back(i);
    return out;
}

void CfAgent::validate() const {
    to_pda().validate();
    if (tokenizer) {
        tokenizer->validate();
        if (!(tokenizer->alphabet == alphabet))
            throw ValidationError({"tokenizer alphabet does not match the agent alphabet"});
    }
}

Pda CfAgent::to_pda() const {
    Pda p;
    p.states = states;
    p.alphabet = alphabet;
    p.stack_alphabet = stack_alphabet;
    p.rules = rules;
    p.start = start;
    p.accept = accept;
    return p;
}

void CsAgent::validate() const {
    std::vector<std::string> bad;
    if (states.empty()) bad.push_back("state set is empty");
    if (start >= states.size()) bad.push_back("start state out of range");
    if (accept.size() != states.size()) bad.push_back("accept flags do not cover the state set");
    if (k == 0) bad.push_back("memory factor k must be positive");
    if (k > 1 && !blank) bad.push_back("memory factor k > 1 requires a blank symbol");
    if (blank && *blank >= tape_alphabet.size()) bad.push_back("blank symbol out of range");
    if (input_to_tape.size() != input_alphabet.size())
        bad.push_back("input-to-tape map does not cover the input alphabet");
    for (SymbolId m : input_to_tape)
        if (m >= tape_alphabet.size()) bad.push_back("input symbol maps outside the tape alphabet");
    if (delta.size() != states.size() * symbol_count()) bad.push_back("delta table has wrong shape");
    if (!bad.empty()) throw ValidationError(std::move(bad));

    for (StateId q = 0; q < states.size(); ++q) {
        for (SymbolId g = 0; g < symbol_count(); ++g) {
            const auto& r = rule(q, g);
            if (!r) continue; // missing rule halts the agent, which is fine
            if (r->to >= states.size()) bad.push_back("delta target out of range");
            if (g == left_end()) {
                if (r->write != left_end() || r->move != TapeMove::Right)
                    throw MemoryBoundViolationError(
                        "state " + states.name(q) + " would escape the left memory bound");
            } else if (g == right_end()) {
                if (r->write != right_end() || r->move != TapeMove::Left)
                    throw MemoryBoundViolationError(
                        "state " + states.name(q) + " would escape the right memory bound");
            } else if (r->write >= tape_alphabet.size()) {
                throw MemoryBoundViolationError(
                    "state " + states.name(q) + " writes an endmarker into the memory interior");
            }
        }
    }
    if (!bad.empty()) throw ValidationError(std::move(bad));
}

void TcAgent::validate() const {
    std::vector<std::string> bad;
    if (states.empty()) bad.push_back("state set is empty");
    if (start >= states.size()) bad.push_back("start state out of range");
    if (accept.size() != states.size()) bad.push_back("accept flags do not cover the state set");
    if (blank >= tape_alphabet.size()) bad.push_back("blank symbol out of range");
    if (input_to_tape.size() != input_alphabet.size())
        bad.push_back("input-to-tape map does not cover the input alphabet");
    for (std::size_t i = 0; i < input_to_tape.size(); ++i) {
        if (input_to_tape[i] >= tape_alphabet.size())
            bad.push_back("input symbol maps outside the tape alphabet");
        else if (input_to_tape[i] == blank)
            bad.push_back("blank symbol cannot be an input symbol");
    }
    if (delta.size() != states.size() * tape_alphabet.size())
        bad.push_back("delta table has wrong shape");
    for (const auto& r : delta) {
        if (r && (r->to >= states.size() || r->write >= tape_alphabet.size()))
            bad.push_back("delta target out of range");
    }
    if (!bad.empty()) throw ValidationError(std::move(bad));
}

ClassLabel agent_class(const AnyAgent& a) {
    switch (a.index()) {
        case 0: return ClassLabel::Regular;
        case 1: return ClassLabel::ContextFree;
        case 2: return ClassLabel::ContextSensitive;
        default: return ClassLabel::TuringComplete;
    }
}

const NameTable& agent_input_alphabet(const AnyAgent& a) {
    return std::visit(
        [](const auto& agent) -> const NameTable& {
            using T = std::decay_t<decltype(agent)>;
            if constexpr (std::is_same_v<T, RegularAgent> || std::is_same_v<T, CfAgent>) {
                return agent.alphabet;
            } else {
                return agent.input_alphabet;
            }
        },
        a);
}

// ---------------------------------------------------------------------------

namespace {

void check_word(const NameTable& alphabet, std::span<const SymbolId> w) {
    for (SymbolId a : w)
        if (a >= alphabet.size())
            throw UnknownSymbolError("symbol id " + std::to_string(a) + " outside the alphabet");
}

AgentRunResult run_regular(const RegularAgent& agent, std::span<const SymbolId> w,
                           bool record_paths) {
    agent.validate();
    check_word(agent.alphabet, w);

    // Layered search over the declared edge graph; accepts iff some
    // declared-edge resolution ends in F.
    struct Entry {
        StateId state;
        std::int64_t parent; // index into previous layer's entries
        std::size_t edge;    // edge taken to get here
    };
    std::vector<std::vector<Entry>> layers(w.size() + 1);
    layers[0].push_back({agent.start, -1, 0});

    for (std::size_t i = 0; i < w.size(); ++i) {
        std::vector<bool> seen(agent.states.size(), false);
        for (std::size_t pi = 0; pi < layers[i].size(); ++pi) {
            for (std::size_t ei : agent.declared_edges(layers[i][pi].state, w[i])) {
                StateId to = agent.edges[ei].to;
                if (seen[to]) continue;
                seen[to] = true;
                layers[i + 1].push_back({to, static_cast<std::int64_t>(pi), ei});
            }
        }
    }

    AgentRunResult result;
    result.steps = w.size();
    for (std::size_t fi = 0; fi < layers[w.size()].size(); ++fi) {
        if (!agent.accept[layers[w.size()][fi].state]) continue;
        result.verdict = AgentVerdict::Accept;
        if (record_paths) {
            Trace t;
            t.input.assign(w.begin(), w.end());
            std::vector<std::size_t> edge_path;
            std::int64_t at = static_cast<std::int64_t>(fi);
            for (std::size_t layer = w.size(); layer > 0; --layer) {
                const Entry& e = layers[layer][static_cast<std::size_t>(at)];
                edge_path.push_back(e.edge);
                at = e.parent;
            }
            std::reverse(edge_path.begin(), edge_path.end());
            t.visited.push_back(agent.start);
            bool all_out = !agent.actions.empty();
            Word outs;
            for (std::size_t ei : edge_path) {
                t.visited.push_back(agent.edges[ei].to);
                if (agent.edges[ei].out) outs.push_back(*agent.edges[ei].out);
                else all_out = false;
            }
            if (all_out) t.outputs = std::move(outs);
            t.accepted = true;
            result.fa_trace = std::move(t);
        }
        return result;
    }
    result.verdict = AgentVerdict::Reject;
    return result;
}

AgentRunResult run_cf(const CfAgent& agent, std::span<const SymbolId> w, std::uint64_t budget,
                      bool record_paths) {
    agent.validate();
    PdaResult r = run_pda(agent.to_pda(), w, budget);
    AgentRunResult result;
    result.steps = r.configs_explored;
    switch (r.verdict) {
        case PdaVerdict::Accept: result.verdict = AgentVerdict::Accept; break;
        case PdaVerdict::Reject: result.verdict = AgentVerdict::Reject; break;
        case PdaVerdict::BudgetExhausted: result.verdict = AgentVerdict::BudgetExhausted; break;
    }
    if (record_paths) result.pda_path = std::move(r.accepting_path);
    return result;
}

AgentRunResult run_cs(const CsAgent& agent, std::span<const SymbolId> w, bool record_paths) {
    agent.validate();
    check_word(agent.input_alphabet, w);

    LbaConfig c;
    c.state = agent.start;
    c.head = 0;
    const std::size_t interior_len = static_cast<std::size_t>(agent.k) * w.size();
    c.interior.reserve(interior_len);
    for (SymbolId a : w) c.interior.push_back(agent.input_to_tape[a]);
    c.interior.resize(interior_len, agent.blank.value_or(0));

    // Same finiteness argument as for the LBA: |Q| * (n+2) * |Gamma|^n.
    const std::uint64_t cap = 1ULL << 62;
    std::uint64_t bound = agent.states.size();
    bound *= (interior_len + 2);
    for (std::size_t i = 0; i < interior_len && bound < cap; ++i)
        bound = std::min(cap, bound * std::max<std::uint64_t>(agent.tape_alphabet.size(), 1));

    std::map<LbaConfig, std::uint64_t> seen_at;
    AgentRunResult result;
    while (true) {
        if (record_paths) result.control_path.emplace_back(c.state, c.head);
        if (agent.accept[c.state]) {
            result.verdict = AgentVerdict::Accept;
            return result;
        }
        if (!seen_at.emplace(c, result.steps).second || result.steps > bound) {
            result.verdict = AgentVerdict::LoopDetected;
            return result;
        }
        SymbolId read = c.head == 0                      ? agent.left_end()
                        : c.head == interior_len + 1     ? agent.right_end()
                                                         : c.interior[c.head - 1];
        const auto& r = agent.rule(c.state, read);
        if (!r) {
            result.verdict = AgentVerdict::Reject;
            return result;
        }
        if (c.head >= 1 && c.head <= interior_len) c.interior[c.head - 1] = r->write;
        if (r->move == TapeMove::Right) {
            ++c.head;
        } else if (c.head == 0) {
            throw MemoryBoundViolationError("head escaped the left memory bound");
        } else {
            --c.head;
        }
        if (c.head > interior_len + 1)
            throw MemoryBoundViolationError("head escaped the right memory bound");
        c.state = r->to;
        ++result.steps;
    }
}

AgentRunResult run_tc(const TcAgent& agent, std::span<const SymbolId> w, std::uint64_t budget,
                      bool record_paths) {
    agent.validate();
    check_word(agent.input_alphabet, w);
    if (budget == 0) throw Error("run_agent: budget must be positive");

    std::vector<SymbolId> tape;
    tape.reserve(w.size() + 8);
    for (SymbolId a : w) tape.push_back(agent.input_to_tape[a]);
    std::size_t head = 0;
    StateId q = agent.start;

    AgentRunResult result;
    while (true) {
        if (record_paths) result.control_path.emplace_back(q, head);
        if (agent.accept[q]) {
            result.verdict = AgentVerdict::Accept;
            return result;
        }
        if (result.steps >= budget) {
            result.verdict = AgentVerdict::BudgetExhausted;
            return result;
        }
        if (head >= tape.size()) tape.resize(head + 1, agent.blank);
        const auto& r = agent.rule(q, tape[head]);
        if (!r) {
            result.verdict = AgentVerdict::Reject;
            return result;
        }
        tape[head] = r->write;
        if (r->move == TapeMove::Right) ++head;
        else if (head > 0) --head;
        q = r->to;
        ++result.steps;
    }
}

} // namespace

AgentRunResult run_agent(const AnyAgent& agent, std::span<const SymbolId> w, std::uint64_t budget,
                         bool record_paths) {
    return std::visit(
        [&](const auto& a) {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, RegularAgent>) return run_regular(a, w, record_paths);
            else if constexpr (std::is_same_v<T, CfAgent>) return run_cf(a, w, budget, record_paths);
            else if constexpr (std::is_same_v<T, CsAgent>) return run_cs(a, w, record_paths);
            else return run_tc(a, w, budget, record_paths);
        },
        agent);
}

std::pair<StateId, std::optional<SymbolId>> oracle_step_constrained(
    const RegularAgent& agent, TransitionOracle& oracle, StateId state, SymbolId symbol) {
    if (state >= agent.states.size()) throw UnknownStateError("state id out of range");
    if (symbol >= agent.alphabet.size()) throw UnknownSymbolError("symbol id out of range");

    std::vector<std::size_t> indices = agent.declared_edges(state, symbol);
    if (indices.empty()) {
        throw NoDeclaredEdgeError("no declared edge from state " + agent.states.name(state) +
                                  " on symbol " + agent.alphabet.name(symbol));
    }
    std::vector<EdgeProposal> declared;
    declared.reserve(indices.size());
    for (std::size_t i : indices) declared.push_back({agent.edges[i].to, agent.edges[i].out});

    EdgeProposal choice = oracle.propose(state, symbol, declared);
    for (const EdgeProposal& d : declared) {
        if (d == choice) return {choice.to, choice.out};
    }
    throw UndeclaredEdgeError("oracle proposed an undeclared edge from state " +
                              agent.states.name(state) + " on symbol " +
                              agent.alphabet.name(symbol));
}

Trace sample_agent_run(const RegularAgent& agent, TransitionOracle& oracle,
                       std::span<const SymbolId> w) {
    agent.validate();
    check_word(agent.alphabet, w);

    Trace t;
    t.input.assign(w.begin(), w.end());
    StateId q = agent.start;
    t.visited.push_back(q);
    bool all_out = !agent.actions.empty();
    Word outs;
    for (SymbolId a : w) {
        auto [next, out] = oracle_step_constrained(agent, oracle, q, a);
        q = next;
        t.visited.push_back(q);
        if (out) outs.push_back(*out);
        else all_out = false;
    }
    if (all_out) t.outputs = std::move(outs);
    t.accepted = agent.accept[q];
    return t;
}

} // namespace aaf
