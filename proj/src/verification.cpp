#include "aaf/verification.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace aaf {

namespace {

/// Adjacency view of a PAutomaton used during saturation and membership.
struct PAutoIndex {
    std::size_t vertices;
    // per vertex: labeled edges and epsilon edges
    std::vector<std::vector<std::pair<SymbolId, std::uint32_t>>> labeled;
    std::vector<std::vector<std::uint32_t>> eps;

    explicit PAutoIndex(const PAutomaton& a) : vertices(a.num_vertices) {
        labeled.resize(vertices);
        eps.resize(vertices);
        for (const auto& t : a.transitions) add(t);
    }

    bool has(const PAutomaton::Transition& t) const {
        if (t.label) {
            for (auto [l, to] : labeled[t.from])
                if (l == *t.label && to == t.to) return true;
            return false;
        }
        for (auto to : eps[t.from])
            if (to == t.to) return true;
        return false;
    }

    void add(const PAutomaton::Transition& t) {
        if (t.label) labeled[t.from].emplace_back(*t.label, t.to);
        else eps[t.from].push_back(t.to);
    }

    std::vector<bool> eps_closure(std::uint32_t v) const {
        std::vector<bool> in(vertices, false);
        std::deque<std::uint32_t> work{v};
        in[v] = true;
        while (!work.empty()) {
            std::uint32_t q = work.front();
            work.pop_front();
            for (std::uint32_t t : eps[q]) {
                if (!in[t]) {
                    in[t] = true;
                    work.push_back(t);
                }
            }
        }
        return in;
    }

    /// All vertices reachable from `v` by reading `word` (with epsilon moves).
    std::vector<bool> read_word(std::uint32_t v, std::span<const SymbolId> word) const {
        std::vector<bool> cur = eps_closure(v);
        for (SymbolId a : word) {
            std::vector<bool> next(vertices, false);
            for (std::uint32_t q = 0; q < vertices; ++q) {
                if (!cur[q]) continue;
                for (auto [l, to] : labeled[q]) {
                    if (l != a || next[to]) continue;
                    auto closure = eps_closure(to);
                    for (std::uint32_t x = 0; x < vertices; ++x)
                        if (closure[x]) next[x] = true;
                }
            }
            cur = std::move(next);
        }
        return cur;
    }
};

} // namespace

bool PAutomaton::accepts_config(StateId q, std::span<const SymbolId> stack) const {
    if (q >= num_control) throw UnknownStateError("configuration state out of range");
    PAutoIndex idx(*this);
    std::vector<bool> end = idx.read_word(q, stack);
    for (std::uint32_t v = 0; v < num_vertices; ++v)
        if (end[v] && final_vertices[v]) return true;
    return false;
}

PAutomaton PAutomaton::control_states_any_stack(const Pda& p, const std::vector<bool>& targets) {
    PAutomaton a;
    a.num_control = p.states.size();
    a.num_vertices = a.num_control + 1; // one shared sink
    a.stack_symbols = p.stack_alphabet.size();
    const std::uint32_t sink = static_cast<std::uint32_t>(a.num_control);
    a.final_vertices.assign(a.num_vertices, false);
    a.final_vertices[sink] = true;
    for (StateId q = 0; q < p.states.size(); ++q) {
        if (!targets[q]) continue;
        a.final_vertices[q] = true; // the empty stack belongs to "any stack"
        for (SymbolId g = 0; g < p.stack_alphabet.size(); ++g)
            a.transitions.push_back({q, g, sink});
    }
    for (SymbolId g = 0; g < p.stack_alphabet.size(); ++g)
        a.transitions.push_back({sink, g, sink});
    return a;
}

PAutomaton PAutomaton::control_states_empty_stack(const Pda& p, const std::vector<bool>& targets) {
    PAutomaton a;
    a.num_control = p.states.size();
    a.num_vertices = a.num_control;
    a.stack_symbols = p.stack_alphabet.size();
    a.final_vertices.assign(a.num_vertices, false);
    for (StateId q = 0; q < p.states.size(); ++q)
        if (targets[q]) a.final_vertices[q] = true;
    return a;
}

PAutomaton PAutomaton::single_config(const Pda& p, StateId q, std::span<const SymbolId> stack) {
    PAutomaton a;
    a.num_control = p.states.size();
    a.num_vertices = a.num_control + stack.size();
    a.stack_symbols = p.stack_alphabet.size();
    a.final_vertices.assign(a.num_vertices, false);
    std::uint32_t prev = q;
    for (std::size_t i = 0; i < stack.size(); ++i) {
        std::uint32_t next = static_cast<std::uint32_t>(a.num_control + i);
        a.transitions.push_back({prev, stack[i], next});
        prev = next;
    }
    a.final_vertices[prev] = true;
    return a;
}

PAutomaton pda_prestar(const Pda& p, const PAutomaton& targets) {
    p.validate();
    if (targets.num_control != p.states.size())
        throw Error("pda_prestar: target automaton does not mirror the PDA control states");

    PAutomaton result = targets;
    PAutoIndex idx(result);

    // Saturation: for a rule (q, pop) -> (q', push), whenever push can be read
    // from q' to some vertex t, configurations (q, pop . rest) can reach the
    // set whenever (q', push . rest) can, so add q --pop--> t. Stack-neutral
    // rules (no pop) contribute epsilon transitions instead.
    bool changed = true;
    while (changed) {
        changed = false;
        for (const PdaRule& r : p.rules) {
            std::vector<bool> reach = idx.read_word(r.to, r.push);
            for (std::uint32_t t = 0; t < result.num_vertices; ++t) {
                if (!reach[t]) continue;
                PAutomaton::Transition add;
                add.from = r.from;
                add.to = t;
                if (r.pop) {
                    add.label = *r.pop;
                } else {
                    if (r.from == t) continue; // self epsilon is a no-op
                    add.label = std::nullopt;
                }
                if (!idx.has(add)) {
                    idx.add(add);
                    result.transitions.push_back(add);
                    changed = true;
                }
            }
        }
    }
    return result;
}

bool pda_accepts_exact(const Pda& p, std::span<const SymbolId> w) {
    p.validate();
    // Product control states (q, i) for i = 0..|w|; input moves become
    // position bumps, leaving a pure pushdown system for pre*.
    const std::size_t positions = w.size() + 1;
    Pda prod;
    prod.alphabet = p.alphabet; // unused by prestar but kept well-formed
    prod.stack_alphabet = p.stack_alphabet;
    for (StateId q = 0; q < p.states.size(); ++q)
        for (std::size_t i = 0; i < positions; ++i)
            prod.states.intern(p.states.name(q) + "@" + std::to_string(i));
    auto id_of = [&](StateId q, std::size_t i) {
        return static_cast<StateId>(q * positions + i);
    };
    prod.start = id_of(p.start, 0);
    prod.accept.assign(prod.states.size(), false);
    for (StateId q = 0; q < p.states.size(); ++q)
        if (p.accept[q]) prod.accept[id_of(q, w.size())] = true;

    for (const PdaRule& r : p.rules) {
        if (r.on) {
            for (std::size_t i = 0; i < w.size(); ++i) {
                if (w[i] != *r.on) continue;
                prod.rules.push_back({id_of(r.from, i), std::nullopt, r.pop, id_of(r.to, i + 1), r.push});
            }
        } else {
            for (std::size_t i = 0; i < positions; ++i)
                prod.rules.push_back({id_of(r.from, i), std::nullopt, r.pop, id_of(r.to, i), r.push});
        }
    }

    PAutomaton targets = PAutomaton::control_states_any_stack(prod, prod.accept);
    PAutomaton pre = pda_prestar(prod, targets);
    return pre.accepts_config(prod.start, {});
}

// ---------------------------------------------------------------------------

namespace {

void check_state_set(const Dfa& d, const std::vector<StateId>& set) {
    for (StateId q : set)
        if (q >= d.states.size())
            throw UnknownStateError("state id " + std::to_string(q) + " out of range");
}

} // namespace

SafetyResult fa_safety(const Dfa& d, const std::vector<StateId>& unsafe) {
    d.validate();
    check_state_set(d, unsafe);
    std::vector<bool> is_unsafe(d.states.size(), false);
    for (StateId q : unsafe) is_unsafe[q] = true;

    SafetyResult result;
    std::vector<std::int64_t> parent_state(d.states.size(), -1);
    std::vector<SymbolId> parent_symbol(d.states.size(), 0);
    std::vector<bool> seen(d.states.size(), false);
    std::deque<StateId> work;

    auto witness_to = [&](StateId q) {
        Word w;
        for (StateId at = q; parent_state[at] >= 0; at = static_cast<StateId>(parent_state[at]))
            w.push_back(parent_symbol[at]);
        std::reverse(w.begin(), w.end());
        return w;
    };

    seen[d.start] = true;
    work.push_back(d.start);
    if (is_unsafe[d.start]) {
        result.safe = false;
        result.counterexample = Word{};
        return result;
    }
    while (!work.empty()) {
        StateId q = work.front();
        work.pop_front();
        for (SymbolId a = 0; a < d.alphabet.size(); ++a) {
            StateId t = d.next(q, a);
            if (seen[t]) continue;
            seen[t] = true;
            parent_state[t] = q;
            parent_symbol[t] = a;
            if (is_unsafe[t]) {
                result.safe = false;
                result.counterexample = witness_to(t);
                return result;
            }
            work.push_back(t);
        }
    }
    return result;
}

InevitabilityResult fa_inevitability(const Dfa& d, const std::vector<StateId>& goal) {
    d.validate();
    check_state_set(d, goal);
    std::vector<bool> in_goal(d.states.size(), false);
    for (StateId q : goal) in_goal[q] = true;

    InevitabilityResult result;
    if (in_goal[d.start]) return result; // visited at time zero on every path

    // Restrict to the non-goal subgraph and search for a reachable cycle.
    std::vector<std::int64_t> parent_state(d.states.size(), -1);
    std::vector<SymbolId> parent_symbol(d.states.size(), 0);
    std::vector<bool> seen(d.states.size(), false);
    seen[d.start] = true;
    std::vector<StateId> reach{d.start};
    for (std::size_t i = 0; i < reach.size(); ++i) {
        StateId q = reach[i];
        for (SymbolId a = 0; a < d.alphabet.size(); ++a) {
            StateId t = d.next(q, a);
            if (in_goal[t] || seen[t]) continue;
            seen[t] = true;
            parent_state[t] = q;
            parent_symbol[t] = a;
            reach.push_back(t);
        }
    }

    // Iterative DFS over the restricted reachable subgraph, tracking the
    // on-stack set to recognize back edges.
    enum class Color { White, Grey, Black };
    std::vector<Color> color(d.states.size(), Color::White);
    std::vector<std::int64_t> dfs_parent(d.states.size(), -1);
    std::vector<SymbolId> dfs_symbol(d.states.size(), 0);

    struct Frame {
        StateId state;
        SymbolId next_symbol;
    };
    std::vector<Frame> stack;
    stack.push_back({d.start, 0});
    color[d.start] = Color::Grey;

    std::optional<std::pair<StateId, StateId>> back_edge; // (from, to)
    SymbolId back_symbol = 0;
    while (!stack.empty() && !back_edge) {
        Frame& f = stack.back();
        if (f.next_symbol >= d.alphabet.size()) {
            color[f.state] = Color::Black;
            stack.pop_back();
            continue;
        }
        SymbolId a = f.next_symbol++;
        StateId t = d.next(f.state, a);
        if (in_goal[t]) continue;
        if (color[t] == Color::White) {
            color[t] = Color::Grey;
            dfs_parent[t] = f.state;
            dfs_symbol[t] = a;
            stack.push_back({t, 0});
        } else if (color[t] == Color::Grey) {
            back_edge = std::make_pair(f.state, t);
            back_symbol = a;
        }
    }

    if (!back_edge) return result; // no avoiding cycle: goal is inevitable

    result.inevitable = false;
    LassoWitness w;
    // Cycle: follow DFS parents from the back edge's source up to its target.
    Word cycle;
    cycle.push_back(back_symbol);
    for (StateId at = back_edge->first; at != back_edge->second;
         at = static_cast<StateId>(dfs_parent[at])) {
        cycle.push_back(dfs_symbol[at]);
    }
    std::reverse(cycle.begin(), cycle.end());
    w.cycle = std::move(cycle);
    // Stem: BFS path from the start to the cycle entry, within the subgraph.
    Word stem;
    for (StateId at = back_edge->second; parent_state[at] >= 0;
         at = static_cast<StateId>(parent_state[at])) {
        stem.push_back(parent_symbol[at]);
    }
    std::reverse(stem.begin(), stem.end());
    w.stem = std::move(stem);
    result.witness = std::move(w);
    return result;
}

DfaEquivalenceResult dfa_equivalence(const Dfa& a, const Dfa& b) {
    a.validate();
    b.validate();
    std::vector<SymbolId> b_from_a(a.alphabet.size());
    {
        std::vector<SymbolId> rev = detail::alphabet_remap(a, b);
        for (SymbolId bs = 0; bs < rev.size(); ++bs) b_from_a[rev[bs]] = bs;
    }

    DfaEquivalenceResult result;
    std::map<std::pair<StateId, StateId>, std::pair<std::int64_t, SymbolId>> parent;
    std::deque<std::pair<StateId, StateId>> work;
    std::vector<std::pair<StateId, StateId>> order;

    auto witness_of = [&](std::pair<StateId, StateId> at) {
        Word w;
        while (true) {
            auto [pi, sym] = parent[at];
            if (pi < 0) break;
            w.push_back(sym);
            at = order[static_cast<std::size_t>(pi)];
        }
        std::reverse(w.begin(), w.end());
        return w;
    };

    auto push = [&](std::pair<StateId, StateId> pr, std::int64_t from, SymbolId sym) {
        if (parent.count(pr)) return false;
        parent[pr] = {from, sym};
        order.push_back(pr);
        work.push_back(pr);
        return true;
    };

    push({a.start, b.start}, -1, 0);
    std::size_t index = 0;
    while (!work.empty()) {
        auto pr = work.front();
        work.pop_front();
        if (a.accept[pr.first] != b.accept[pr.second]) {
            result.equivalent = false;
            result.distinguishing = witness_of(pr);
            return result;
        }
        for (SymbolId s = 0; s < a.alphabet.size(); ++s) {
            push({a.next(pr.first, s), b.next(pr.second, b_from_a[s])},
                 static_cast<std::int64_t>(index), s);
        }
        ++index;
    }
    return result;
}

LbaHaltReport lba_halts(const Lba& l, std::span<const SymbolId> w) {
    LbaResult r = run_lba(l, w);
    LbaHaltReport report;
    report.verdict = r.verdict;
    report.steps = r.steps;
    report.halts = r.verdict != LbaVerdict::LoopDetected;
    report.witness = r.loop;
    return report;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<CapabilityEntry> build_matrix() {
    using C = ClassLabel;
    using Q = QueryKind;
    using D = Decidability;
    std::vector<CapabilityEntry> m;
    auto add = [&](C c, Q q, D d, bool impl, std::string basis) {
        m.push_back({c, q, d, impl, std::move(basis)});
    };

    add(C::Regular, Q::SafetyReachability, D::Decidable, true,
        "reachability in a finite automaton is graph search");
    add(C::Regular, Q::Inevitability, D::Decidable, true,
        "a goal set is avoidable iff a reachable cycle avoids it; finite graphs make this a cycle search");
    add(C::Regular, Q::Membership, D::Decidable, true,
        "running a DFA takes one step per input symbol");
    add(C::Regular, Q::Halting, D::Decidable, true,
        "a finite automaton halts after exactly |w| steps");
    add(C::Regular, Q::Equivalence, D::Decidable, true,
        "equivalence reduces to emptiness of the symmetric-difference product");

    add(C::ContextFree, Q::SafetyReachability, D::Decidable, true,
        "pushdown configuration reachability is decidable by pre* saturation");
    add(C::ContextFree, Q::Inevitability, D::Decidable, false,
        "model checking pushdown systems against omega-regular properties is decidable");
    add(C::ContextFree, Q::Membership, D::Decidable, true,
        "context-free membership is decidable (configuration search or CYK)");
    add(C::ContextFree, Q::Halting, D::Decidable, false,
        "existence of an infinite run from a pushdown configuration is decidable via saturation");
    add(C::ContextFree, Q::Equivalence, D::DecidableIfDeterministic, false,
        "language equivalence is undecidable for general PDAs; decidable for deterministic PDAs "
        "(Senizergues), with extremely high complexity");

    add(C::ContextSensitive, Q::SafetyReachability, D::Undecidable, false,
        "emptiness of context-sensitive languages is undecidable, so reachability over all inputs is too");
    add(C::ContextSensitive, Q::Inevitability, D::Undecidable, false,
        "follows from the undecidability of emptiness for linear bounded automata");
    add(C::ContextSensitive, Q::Membership, D::Decidable, true,
        "an LBA on input w has finitely many configurations, so membership is decidable");
    add(C::ContextSensitive, Q::Halting, D::Decidable, true,
        "halting on a given input is decidable via finiteness of configurations: "
        "|Q| * (n+2) * |Gamma|^n bounds the run");
    add(C::ContextSensitive, Q::Equivalence, D::Undecidable, false,
        "equivalence of context-sensitive languages is undecidable");

    add(C::TuringComplete, Q::SafetyReachability, D::Undecidable, false,
        "Rice's theorem: no algorithm decides a nontrivial semantic property for all TMs");
    add(C::TuringComplete, Q::Inevitability, D::Undecidable, false,
        "Rice's theorem");
    add(C::TuringComplete, Q::Membership, D::Undecidable, false,
        "membership is only semi-decidable; budgeted simulation gives partial answers");
    add(C::TuringComplete, Q::Halting, D::Undecidable, false,
        "the halting problem (Turing 1936)");
    add(C::TuringComplete, Q::Equivalence, D::Undecidable, false,
        "follows from the halting problem by reduction");
    return m;
}

} // namespace

const std::vector<CapabilityEntry>& capability_matrix() {
    static const std::vector<CapabilityEntry> matrix = build_matrix();
    return matrix;
}

CapabilityEntry capability_query(ClassLabel cls, QueryKind query) {
    for (const auto& e : capability_matrix())
        if (e.cls == cls && e.query == query) return e;
    throw Error("capability matrix has no such entry"); // unreachable: matrix is total
}

std::string_view to_string(QueryKind q) {
    switch (q) {
        case QueryKind::SafetyReachability: return "safety-reachability";
        case QueryKind::Inevitability: return "inevitability";
        case QueryKind::Membership: return "membership";
        case QueryKind::Halting: return "halting";
        case QueryKind::Equivalence: return "equivalence";
    }
    return "?";
}

std::string_view to_string(Decidability d) {
    switch (d) {
        case Decidability::Decidable: return "decidable";
        case Decidability::DecidableIfDeterministic: return "decidable-if-deterministic";
        case Decidability::Undecidable: return "undecidable";
    }
    return "?";
}

std::optional<QueryKind> query_kind_from_string(std::string_view s) {
    if (s == "safety-reachability" || s == "safety") return QueryKind::SafetyReachability;
    if (s == "inevitability") return QueryKind::Inevitability;
    if (s == "membership") return QueryKind::Membership;
    if (s == "halting") return QueryKind::Halting;
    if (s == "equivalence") return QueryKind::Equivalence;
    return std::nullopt;
}

} // namespace aaf
