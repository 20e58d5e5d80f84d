#include "aaf/equivalence.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <set>

namespace aaf {

std::string_view machine_kind(const AnyMachine& m) {
    switch (m.index()) {
        case 0: return "dfa";
        case 1: return "nfa";
        case 2: return "mealy";
        case 3: return "pda";
        case 4: return "lba";
        default: return "tm";
    }
}

const NameTable& machine_input_alphabet(const AnyMachine& m) {
    return std::visit(
        [](const auto& mm) -> const NameTable& {
            using T = std::decay_t<decltype(mm)>;
            if constexpr (std::is_same_v<T, Mealy>) return mm.fa.alphabet;
            else if constexpr (std::is_same_v<T, Lba> || std::is_same_v<T, Tm>)
                return mm.input_alphabet;
            else return mm.alphabet;
        },
        m);
}

namespace {

std::string fresh_name(const NameTable& table, std::string base) {
    while (table.contains(base)) base += "'";
    return base;
}

void identity_maps(ConstructionReport& r, const NameTable& states, const NameTable& alphabet) {
    for (const auto& s : states.names()) r.state_map.emplace_back(s, s);
    for (const auto& a : alphabet.names()) r.alphabet_map.emplace_back(a, a);
}

// --- Regular agent <-> finite automata --------------------------------------

AgentToMachineResult regular_to_machine(const RegularAgent& a) {
    a.validate();
    AgentToMachineResult result;
    result.report.source_kind = "regular-agent";
    identity_maps(result.report, a.states, a.alphabet);
    if (a.is_deterministic_total()) {
        Dfa d;
        d.states = a.states;
        d.alphabet = a.alphabet;
        d.start = a.start;
        d.accept = a.accept;
        d.delta.assign(a.states.size() * a.alphabet.size(), 0);
        for (const AgentEdge& e : a.edges) d.delta[e.from * a.alphabet.size() + e.on] = e.to;
        d.validate();
        result.report.target_kind = "dfa";
        result.report.notes.push_back("declared edges are deterministic and total");
        result.machine = std::move(d);
    } else {
        result.report.target_kind = "nfa";
        result.report.notes.push_back("nondeterministic declared edges induce an NFA acceptor");
        result.machine = a.to_nfa();
    }
    if (!a.actions.empty())
        result.report.notes.push_back("output function dropped: recognition ignores actions");
    return result;
}

MachineToAgentResult dfa_to_agent(const Dfa& d) {
    d.validate();
    MachineToAgentResult result;
    result.report.source_kind = "dfa";
    result.report.target_kind = "regular-agent";
    identity_maps(result.report, d.states, d.alphabet);
    RegularAgent a;
    a.states = d.states;
    a.alphabet = d.alphabet;
    a.start = d.start;
    a.accept = d.accept;
    for (StateId q = 0; q < d.states.size(); ++q)
        for (SymbolId s = 0; s < d.alphabet.size(); ++s)
            a.edges.push_back({q, s, d.next(q, s), std::nullopt});
    result.agent = std::move(a);
    return result;
}

MachineToAgentResult nfa_to_agent(const Nfa& n) {
    n.validate();
    MachineToAgentResult result;
    result.report.source_kind = "nfa";
    result.report.target_kind = "regular-agent";
    identity_maps(result.report, n.states, n.alphabet);
    bool had_eps = false;
    for (const auto& targets : n.eps) had_eps |= !targets.empty();
    const Nfa* source = &n;
    Nfa eps_free;
    if (had_eps) {
        eps_free = remove_epsilons(n);
        source = &eps_free;
        result.report.notes.push_back(
            "epsilon moves eliminated first: agents perceive one symbol per step");
    }
    RegularAgent a;
    a.states = source->states;
    a.alphabet = source->alphabet;
    a.start = source->start;
    a.accept = source->accept;
    for (StateId q = 0; q < source->states.size(); ++q)
        for (SymbolId s = 0; s < source->alphabet.size(); ++s)
            for (StateId t : source->targets(q, s)) a.edges.push_back({q, s, t, std::nullopt});
    result.agent = std::move(a);
    return result;
}

MachineToAgentResult mealy_to_agent(const Mealy& m) {
    m.validate();
    MachineToAgentResult result;
    result.report.source_kind = "mealy";
    result.report.target_kind = "regular-agent";
    identity_maps(result.report, m.fa.states, m.fa.alphabet);
    RegularAgent a;
    a.states = m.fa.states;
    a.alphabet = m.fa.alphabet;
    a.actions = m.outputs;
    a.start = m.fa.start;
    a.accept = m.fa.accept;
    for (StateId q = 0; q < m.fa.states.size(); ++q)
        for (SymbolId s = 0; s < m.fa.alphabet.size(); ++s)
            a.edges.push_back({q, s, m.fa.next(q, s), m.output(q, s)});
    result.report.notes.push_back("edge actions carry the output function");
    result.agent = std::move(a);
    return result;
}

// --- Context-free agent <-> PDA ---------------------------------------------

AgentToMachineResult cf_to_machine(const CfAgent& a) {
    a.validate();
    AgentToMachineResult result;
    result.report.source_kind = "context-free-agent";
    result.report.target_kind = "pda";
    identity_maps(result.report, a.states, a.alphabet);
    result.machine = a.to_pda();
    return result;
}

MachineToAgentResult pda_to_agent(const Pda& p) {
    p.validate();
    MachineToAgentResult result;
    result.report.source_kind = "pda";
    result.report.target_kind = "context-free-agent";
    identity_maps(result.report, p.states, p.alphabet);
    CfAgent a;
    a.states = p.states;
    a.alphabet = p.alphabet;
    a.stack_alphabet = p.stack_alphabet;
    a.rules = p.rules;
    a.start = p.start;
    a.accept = p.accept;
    result.agent = std::move(a);
    return result;
}

// --- TC agent <-> TM ---------------------------------------------------------

AgentToMachineResult tc_to_machine(const TcAgent& a) {
    a.validate();
    AgentToMachineResult result;
    ConstructionReport& rep = result.report;
    rep.source_kind = "tc-agent";
    rep.target_kind = "tm";

    Tm t;
    t.states = a.states;
    const StateId q_acc = t.states.intern(fresh_name(t.states, "accept"));
    const StateId q_rej = t.states.intern(fresh_name(t.states, "reject"));
    t.input_alphabet = a.input_alphabet;
    t.tape_alphabet = a.tape_alphabet;
    t.input_to_tape = a.input_to_tape;
    t.blank = a.blank;
    t.accept_state = q_acc;
    t.reject_state = q_rej;
    t.start = a.accept[a.start] ? q_acc : a.start;

    const std::size_t gam = a.tape_alphabet.size();
    t.delta.assign(t.states.size() * gam, std::nullopt);
    for (StateId s = 0; s < a.states.size(); ++s) {
        for (SymbolId g = 0; g < gam; ++g) {
            TmRule filled{q_rej, g, TapeMove::Right};
            if (!a.accept[s]) {
                if (const auto& r = a.rule(s, g)) {
                    filled = *r;
                    if (a.accept[filled.to]) filled.to = q_acc;
                }
            }
            t.delta[s * gam + g] = filled;
        }
    }
    t.validate();

    for (const auto& s : a.states.names())
        rep.state_map.emplace_back(s, a.accept[*a.states.find(s)] ? t.states.name(q_acc) : s);
    for (const auto& s : a.input_alphabet.names()) rep.alphabet_map.emplace_back(s, s);
    rep.notes.push_back("accepting agent states merge into the single accept state");
    rep.notes.push_back("missing agent rules route to the fresh reject state");
    result.machine = std::move(t);
    return result;
}

MachineToAgentResult tm_to_agent(const Tm& t) {
    t.validate();
    MachineToAgentResult result;
    result.report.source_kind = "tm";
    result.report.target_kind = "tc-agent";
    identity_maps(result.report, t.states, t.input_alphabet);
    TcAgent a;
    a.states = t.states;
    a.input_alphabet = t.input_alphabet;
    a.tape_alphabet = t.tape_alphabet;
    a.input_to_tape = t.input_to_tape;
    a.blank = t.blank;
    a.start = t.start;
    a.accept.assign(t.states.size(), false);
    a.accept[t.accept_state] = true;
    a.delta.assign(t.states.size() * t.tape_alphabet.size(), std::nullopt);
    for (StateId q = 0; q < t.states.size(); ++q) {
        if (q == t.accept_state || q == t.reject_state) continue;
        for (SymbolId g = 0; g < t.tape_alphabet.size(); ++g)
            a.delta[q * t.tape_alphabet.size() + g] = t.rule(q, g);
    }
    result.report.notes.push_back(
        "agent runtime configurations are (state, head) pairs; memory holds the tape");
    result.agent = std::move(a);
    return result;
}

// --- Context-sensitive agent <-> LBA ------------------------------------------

TmRule reject_default(SymbolId sym, SymbolId lend, SymbolId rend, StateId q_rej) {
    if (sym == lend) return {q_rej, lend, TapeMove::Right};
    if (sym == rend) return {q_rej, rend, TapeMove::Left};
    return {q_rej, sym, TapeMove::Right};
}

AgentToMachineResult cs_to_machine_direct(const CsAgent& a) {
    // k == 1: the memory tape is exactly <w>, so the construction is
    // component-wise up to splitting F into a single accept state.
    AgentToMachineResult result;
    ConstructionReport& rep = result.report;
    rep.source_kind = "context-sensitive-agent";
    rep.target_kind = "lba";

    Lba l;
    l.states = a.states;
    const StateId q_acc = l.states.intern(fresh_name(l.states, "accept"));
    const StateId q_rej = l.states.intern(fresh_name(l.states, "reject"));
    l.input_alphabet = a.input_alphabet;
    l.tape_alphabet = a.tape_alphabet;
    l.input_to_tape = a.input_to_tape;
    l.accept_state = q_acc;
    l.reject_state = q_rej;
    l.start = a.accept[a.start] ? q_acc : a.start;

    const std::size_t syms = a.symbol_count();
    l.delta.assign(l.states.size() * syms, std::nullopt);
    for (StateId s = 0; s < a.states.size(); ++s) {
        for (SymbolId g = 0; g < syms; ++g) {
            TmRule filled = reject_default(g, a.left_end(), a.right_end(), q_rej);
            if (!a.accept[s]) {
                if (const auto& r = a.rule(s, g)) {
                    filled = *r;
                    if (a.accept[filled.to]) filled.to = q_acc;
                }
            }
            l.delta[s * syms + g] = filled;
        }
    }
    l.validate();

    for (const auto& s : a.states.names())
        rep.state_map.emplace_back(s, a.accept[*a.states.find(s)] ? l.states.name(q_acc) : s);
    for (const auto& s : a.input_alphabet.names()) rep.alphabet_map.emplace_back(s, s);
    rep.notes.push_back("memory factor 1: tape layout is already <w>");
    rep.notes.push_back("accepting agent states merge into the single accept state");
    result.machine = std::move(l);
    return result;
}

/// k >= 2: pack k agent cells into one tape cell. The built machine first
/// compacts the spread-out input into tuple cells, then simulates the agent
/// with the intra-tuple offset tracked in the control state. Simulated "stay"
/// moves bounce off the neighbouring cell, costing one extra step.
AgentToMachineResult cs_to_machine_blocked(const CsAgent& a) {
    AgentToMachineResult result;
    ConstructionReport& rep = result.report;
    rep.source_kind = "context-sensitive-agent";
    rep.target_kind = "lba";

    const std::uint32_t k = a.k;
    const std::size_t ag = a.tape_alphabet.size(); // agent interior symbols
    const SymbolId ablank = *a.blank;

    Lba l;
    l.input_alphabet = a.input_alphabet;

    // Tape symbols: raw agent symbols (pre-compaction), a hole marker for
    // emptied cells, and tuples of fill 1..k. A hole reads as an all-blank
    // tuple; a partial tuple is blank beyond its fill.
    for (const auto& n : a.tape_alphabet.names()) l.tape_alphabet.intern(n);
    const SymbolId hole = l.tape_alphabet.intern(fresh_name(l.tape_alphabet, "#"));
    std::vector<std::size_t> tuple_base(k + 1, 0);
    {
        std::size_t next = hole + 1;
        for (std::uint32_t f = 1; f <= k; ++f) {
            tuple_base[f] = next;
            std::size_t count = 1;
            for (std::uint32_t i = 0; i < f; ++i) count *= ag;
            next += count;
        }
        // Intern tuple names in id order.
        for (std::uint32_t f = 1; f <= k; ++f) {
            std::size_t count = 1;
            for (std::uint32_t i = 0; i < f; ++i) count *= ag;
            for (std::size_t idx = 0; idx < count; ++idx) {
                std::string name = "[";
                std::size_t rest = idx;
                std::size_t div = count / ag;
                for (std::uint32_t i = 0; i < f; ++i) {
                    if (i > 0) name += '|';
                    name += a.tape_alphabet.name(static_cast<SymbolId>(rest / div));
                    rest %= div;
                    div = std::max<std::size_t>(div / ag, 1);
                }
                name += ']';
                l.tape_alphabet.intern(name);
            }
        }
    }
    l.input_to_tape = a.input_to_tape; // raw ids coincide with agent tape ids

    auto tuple_id = [&](std::span<const SymbolId> digits) {
        std::size_t idx = 0;
        for (SymbolId d : digits) idx = idx * ag + d;
        return static_cast<SymbolId>(tuple_base[digits.size()] + idx);
    };
    auto tuple_fill = [&](SymbolId sym) -> std::uint32_t { // 0 when not a tuple
        for (std::uint32_t f = 1; f <= k; ++f) {
            std::size_t count = 1;
            for (std::uint32_t i = 0; i < f; ++i) count *= ag;
            if (sym >= tuple_base[f] && sym < tuple_base[f] + count) return f;
        }
        return 0;
    };
    auto tuple_digits = [&](SymbolId sym) {
        std::uint32_t f = tuple_fill(sym);
        std::size_t idx = sym - tuple_base[f];
        std::vector<SymbolId> digits(f);
        for (std::uint32_t i = f; i-- > 0;) {
            digits[i] = static_cast<SymbolId>(idx % ag);
            idx /= ag;
        }
        return digits;
    };
    auto slot = [&](SymbolId sym, std::uint32_t r) -> SymbolId { // agent symbol at offset r
        if (sym == hole) return ablank;
        std::uint32_t f = tuple_fill(sym);
        if (f == 0) return ablank; // raw cells are gone once simulation starts
        auto digits = tuple_digits(sym);
        return r < f ? digits[r] : ablank;
    };
    auto with_slot = [&](SymbolId sym, std::uint32_t r, SymbolId g) {
        std::vector<SymbolId> digits(k, ablank);
        if (std::uint32_t f = tuple_fill(sym); f > 0) {
            auto d = tuple_digits(sym);
            std::copy(d.begin(), d.end(), digits.begin());
        }
        digits[r] = g;
        return tuple_id(digits);
    };

    // Control states.
    const StateId c_scan = l.states.intern("compact:scan");
    const StateId c_rewind = l.states.intern("compact:rewind");
    std::vector<StateId> carry(ag), put(ag);
    for (SymbolId g = 0; g < ag; ++g) {
        carry[g] = l.states.intern("compact:carry[" + a.tape_alphabet.name(g) + "]");
        put[g] = l.states.intern("compact:put[" + a.tape_alphabet.name(g) + "]");
    }
    auto sim_name = [&](StateId s, std::uint32_t r) {
        return "sim[" + a.states.name(s) + "|" + std::to_string(r) + "]";
    };
    std::vector<StateId> sim(a.states.size() * k), bounce_r(a.states.size() * k),
        bounce_l(a.states.size() * k);
    for (StateId s = 0; s < a.states.size(); ++s) {
        for (std::uint32_t r = 0; r < k; ++r) {
            sim[s * k + r] = l.states.intern(sim_name(s, r));
            bounce_r[s * k + r] = l.states.intern("bR[" + a.states.name(s) + "|" + std::to_string(r) + "]");
            bounce_l[s * k + r] = l.states.intern("bL[" + a.states.name(s) + "|" + std::to_string(r) + "]");
        }
    }
    const StateId q_acc = l.states.intern(fresh_name(l.states, "accept"));
    const StateId q_rej = l.states.intern(fresh_name(l.states, "reject"));
    l.accept_state = q_acc;
    l.reject_state = q_rej;
    l.start = a.accept[a.start] ? q_acc : c_scan;

    const SymbolId lend = l.left_end();
    const SymbolId rend = l.right_end();
    const std::size_t syms = l.symbol_count();
    l.delta.assign(l.states.size() * syms, std::nullopt);
    auto set_rule = [&](StateId q, SymbolId on, StateId to, SymbolId write, TapeMove mv) {
        l.delta[q * syms + on] = TmRule{to, write, mv};
    };
    // Default-fill everything but the halting states with reject moves, then
    // overwrite the meaningful entries.
    for (StateId q = 0; q < l.states.size(); ++q) {
        if (q == q_acc || q == q_rej) continue;
        for (SymbolId g = 0; g < syms; ++g)
            l.delta[q * syms + g] = reject_default(g, lend, rend, q_rej);
    }

    auto sim_target = [&](StateId s, std::uint32_t r) { return a.accept[s] ? q_acc : sim[s * k + r]; };

    // Phase 1: compaction. Scan right for the next raw symbol, carry it left
    // into the growing tuple prefix, return and repeat.
    set_rule(c_scan, lend, c_scan, lend, TapeMove::Right);
    set_rule(c_scan, hole, c_scan, hole, TapeMove::Right);
    for (SymbolId g = 0; g < ag; ++g)
        set_rule(c_scan, g, carry[g], hole, TapeMove::Left);
    for (std::uint32_t f = 1; f <= k; ++f) {
        std::size_t count = 1;
        for (std::uint32_t i = 0; i < f; ++i) count *= ag;
        for (std::size_t idx = 0; idx < count; ++idx) {
            SymbolId t = static_cast<SymbolId>(tuple_base[f] + idx);
            set_rule(c_scan, t, c_scan, t, TapeMove::Right);
        }
    }
    set_rule(c_scan, rend, c_rewind, rend, TapeMove::Left);

    for (SymbolId g = 0; g < ag; ++g) {
        set_rule(carry[g], hole, carry[g], hole, TapeMove::Left);
        set_rule(carry[g], lend, put[g], lend, TapeMove::Right);
        for (std::uint32_t f = 1; f <= k; ++f) {
            std::size_t count = 1;
            for (std::uint32_t i = 0; i < f; ++i) count *= ag;
            for (std::size_t idx = 0; idx < count; ++idx) {
                SymbolId t = static_cast<SymbolId>(tuple_base[f] + idx);
                if (f < k) {
                    auto digits = tuple_digits(t);
                    digits.push_back(g);
                    set_rule(carry[g], t, c_scan, tuple_id(digits), TapeMove::Right);
                } else {
                    set_rule(carry[g], t, put[g], t, TapeMove::Right);
                }
            }
        }
        set_rule(put[g], hole, c_scan, tuple_id(std::span<const SymbolId>(&g, 1)), TapeMove::Right);
    }

    for (SymbolId g = 0; g < ag; ++g) set_rule(c_rewind, g, c_rewind, g, TapeMove::Left);
    set_rule(c_rewind, hole, c_rewind, hole, TapeMove::Left);
    for (std::uint32_t f = 1; f <= k; ++f) {
        std::size_t count = 1;
        for (std::uint32_t i = 0; i < f; ++i) count *= ag;
        for (std::size_t idx = 0; idx < count; ++idx) {
            SymbolId t = static_cast<SymbolId>(tuple_base[f] + idx);
            set_rule(c_rewind, t, c_rewind, t, TapeMove::Left);
        }
    }
    // Rewind reached the left endmarker: take the agent's first step.
    if (const auto& r0 = a.rule(a.start, a.left_end()); r0 && !a.accept[a.start])
        set_rule(c_rewind, lend, sim_target(r0->to, 0), lend, TapeMove::Right);

    // Phase 2: simulation. Offset r within the tuple lives in the state.
    for (StateId s = 0; s < a.states.size(); ++s) {
        if (a.accept[s]) continue; // never entered: redirected to accept
        for (std::uint32_t r = 0; r < k; ++r) {
            const StateId me = sim[s * k + r];
            // Endmarkers: the agent sees its own endmarkers there.
            if (const auto& rl = a.rule(s, a.left_end()))
                set_rule(me, lend, sim_target(rl->to, 0), lend, TapeMove::Right);
            if (const auto& rr = a.rule(s, a.right_end()))
                set_rule(me, rend, sim_target(rr->to, k - 1), rend, TapeMove::Left);
            // Interior cells: holes and tuples.
            auto interior_rule = [&](SymbolId cell) {
                SymbolId g = slot(cell, r);
                const auto& ar = a.rule(s, g);
                if (!ar) return; // keep the reject default
                SymbolId cell2 = with_slot(cell, r, ar->write);
                StateId s2 = ar->to;
                if (ar->move == TapeMove::Right) {
                    if (r + 1 < k) {
                        StateId tgt = a.accept[s2] ? q_acc : bounce_r[s2 * k + (r + 1)];
                        set_rule(me, cell, tgt, cell2, TapeMove::Right);
                    } else {
                        set_rule(me, cell, sim_target(s2, 0), cell2, TapeMove::Right);
                    }
                } else {
                    if (r > 0) {
                        StateId tgt = a.accept[s2] ? q_acc : bounce_l[s2 * k + (r - 1)];
                        set_rule(me, cell, tgt, cell2, TapeMove::Left);
                    } else {
                        set_rule(me, cell, sim_target(s2, k - 1), cell2, TapeMove::Left);
                    }
                }
            };
            interior_rule(hole);
            for (std::uint32_t f = 1; f <= k; ++f) {
                std::size_t count = 1;
                for (std::uint32_t i = 0; i < f; ++i) count *= ag;
                for (std::size_t idx = 0; idx < count; ++idx)
                    interior_rule(static_cast<SymbolId>(tuple_base[f] + idx));
            }
        }
    }
    // Bounce states step back onto the cell they came from.
    for (StateId s = 0; s < a.states.size(); ++s) {
        if (a.accept[s]) continue;
        for (std::uint32_t r = 0; r < k; ++r) {
            for (SymbolId g = 0; g < syms; ++g) {
                if (g == lend) {
                    set_rule(bounce_l[s * k + r], lend, sim[s * k + r], lend, TapeMove::Right);
                } else if (g == rend) {
                    set_rule(bounce_r[s * k + r], rend, sim[s * k + r], rend, TapeMove::Left);
                } else {
                    set_rule(bounce_r[s * k + r], g, sim[s * k + r], g, TapeMove::Left);
                    set_rule(bounce_l[s * k + r], g, sim[s * k + r], g, TapeMove::Right);
                }
            }
        }
    }

    l.validate();
    for (const auto& s : a.states.names()) {
        StateId sid = *a.states.find(s);
        rep.state_map.emplace_back(s, a.accept[sid] ? l.states.name(q_acc) : sim_name(sid, 0));
    }
    for (const auto& s : a.input_alphabet.names()) rep.alphabet_map.emplace_back(s, s);
    rep.notes.push_back("memory factor " + std::to_string(k) +
                        ": k agent cells pack into one tape cell");
    rep.notes.push_back("phase 1 compacts the input into tuple cells, phase 2 simulates with "
                        "the intra-tuple offset in the control state");
    result.machine = std::move(l);
    return result;
}

MachineToAgentResult lba_to_agent(const Lba& l) {
    l.validate();
    MachineToAgentResult result;
    result.report.source_kind = "lba";
    result.report.target_kind = "context-sensitive-agent";
    identity_maps(result.report, l.states, l.input_alphabet);
    CsAgent a;
    a.states = l.states;
    a.input_alphabet = l.input_alphabet;
    a.tape_alphabet = l.tape_alphabet;
    a.input_to_tape = l.input_to_tape;
    a.k = 1;
    a.start = l.start;
    a.accept.assign(l.states.size(), false);
    a.accept[l.accept_state] = true;
    a.delta.assign(l.states.size() * l.symbol_count(), std::nullopt);
    for (StateId q = 0; q < l.states.size(); ++q) {
        if (q == l.accept_state || q == l.reject_state) continue;
        for (SymbolId g = 0; g < l.symbol_count(); ++g)
            a.delta[q * l.symbol_count() + g] = l.rule(q, g);
    }
    result.report.notes.push_back("memory factor 1: the agent tape is the LBA tape");
    result.agent = std::move(a);
    return result;
}

} // namespace

AgentToMachineResult agent_to_automaton(const AnyAgent& agent) {
    return std::visit(
        [](const auto& a) -> AgentToMachineResult {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, RegularAgent>) return regular_to_machine(a);
            else if constexpr (std::is_same_v<T, CfAgent>) return cf_to_machine(a);
            else if constexpr (std::is_same_v<T, CsAgent>) {
                a.validate();
                return a.k == 1 ? cs_to_machine_direct(a) : cs_to_machine_blocked(a);
            } else {
                return tc_to_machine(a);
            }
        },
        agent);
}

MachineToAgentResult automaton_to_agent(const AnyMachine& machine) {
    return std::visit(
        [](const auto& m) -> MachineToAgentResult {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Dfa>) return dfa_to_agent(m);
            else if constexpr (std::is_same_v<T, Nfa>) return nfa_to_agent(m);
            else if constexpr (std::is_same_v<T, Mealy>) return mealy_to_agent(m);
            else if constexpr (std::is_same_v<T, Pda>) return pda_to_agent(m);
            else if constexpr (std::is_same_v<T, Lba>) return lba_to_agent(m);
            else return tm_to_agent(m);
        },
        machine);
}

// ---------------------------------------------------------------------------

Pda plan_to_pda(const PlanGrammar& plan) {
    std::vector<std::string> bad;
    if (plan.rules.empty()) bad.push_back("plan declares no subgoal rules");

    std::map<std::string, std::vector<std::size_t>> rules_of; // goal -> rule indices
    for (std::size_t i = 0; i < plan.rules.size(); ++i) {
        const PlanRule& r = plan.rules[i];
        if (r.name.rfind("done-", 0) == 0)
            bad.push_back("subgoal name \"" + r.name + "\" collides with completion symbols");
        rules_of[r.name].push_back(i);
    }
    if (!rules_of.count(plan.root)) bad.push_back("root subgoal \"" + plan.root + "\" has no rule");
    std::map<std::string, std::set<std::string>> parents;
    for (const PlanRule& r : plan.rules) {
        for (const auto& c : r.children) {
            if (!rules_of.count(c))
                bad.push_back("subgoal \"" + c + "\" referenced by \"" + r.name +
                              "\" has no rule");
            parents[c].insert(r.name);
        }
    }
    if (!bad.empty()) throw ValidationError(std::move(bad));

    // LIFO discipline: completing a subgoal may only resume its unique parent
    // frame (the one below it on the stack). An explicit resume anywhere else
    // is a jump into a non-top frame.
    for (const PlanRule& r : plan.rules) {
        if (!r.resume) continue;
        const auto& ps = parents[r.name];
        if (r.name == plan.root || ps.size() != 1 || *ps.begin() != *r.resume) {
            throw DisciplineViolationError(
                "rule for \"" + r.name + "\" resumes \"" + *r.resume +
                "\" which is not its unique parent frame");
        }
    }

    Pda p;
    const StateId st_start = p.states.intern("start");
    const StateId st_run = p.states.intern("run");
    const StateId st_done = p.states.intern("done");
    p.start = st_start;
    p.accept.assign(3, false);
    p.accept[st_done] = true;

    // Entry and completion perceptions, in rule declaration order.
    std::vector<std::string> goal_order;
    {
        std::set<std::string> seen;
        for (const PlanRule& r : plan.rules)
            if (seen.insert(r.name).second) goal_order.push_back(r.name);
    }
    std::map<std::string, SymbolId> enter_sym, done_sym;
    for (const auto& g : goal_order) {
        enter_sym[g] = p.alphabet.intern(g);
        done_sym[g] = p.alphabet.intern("done-" + g);
    }

    // Frames: one per (rule, position); plus a bottom marker under the
    // outermost root frame so its completion is distinguishable.
    std::vector<std::vector<SymbolId>> frame(plan.rules.size());
    for (std::size_t ri = 0; ri < plan.rules.size(); ++ri) {
        const PlanRule& r = plan.rules[ri];
        frame[ri].resize(r.children.size() + 1);
        for (std::size_t i = 0; i <= r.children.size(); ++i) {
            frame[ri][i] = p.stack_alphabet.intern(r.name + "#" + std::to_string(ri) + "@" +
                                                   std::to_string(i));
        }
    }
    const SymbolId bottom = p.stack_alphabet.intern("$");

    // Entering the root pushes its frame over the bottom marker.
    for (std::size_t ri : rules_of[plan.root])
        p.rules.push_back({st_start, enter_sym[plan.root], std::nullopt, st_run,
                           {frame[ri][0], bottom}});

    for (std::size_t ri = 0; ri < plan.rules.size(); ++ri) {
        const PlanRule& r = plan.rules[ri];
        for (std::size_t i = 0; i < r.children.size(); ++i) {
            // Enter child i: swap in the child's fresh frame and bump the
            // return point.
            for (std::size_t ci : rules_of[r.children[i]]) {
                p.rules.push_back({st_run, enter_sym[r.children[i]], frame[ri][i], st_run,
                                   {frame[ci][0], frame[ri][i + 1]}});
            }
        }
        // Complete: pop the exhausted frame.
        p.rules.push_back({st_run, done_sym[r.name], frame[ri][r.children.size()], st_run, {}});
    }
    // The bottom marker surfaces exactly when the outermost root completed.
    p.rules.push_back({st_run, std::nullopt, bottom, st_done, {}});

    p.validate();
    return p;
}

// ---------------------------------------------------------------------------

BoundedAcceptor make_acceptor(const AnyMachine& m, const AcceptorLimits& limits) {
    auto holder = std::make_shared<const AnyMachine>(m);
    BoundedAcceptor acc;
    acc.alphabet = machine_input_alphabet(*holder);
    acc.accepts = std::visit(
        [&](const auto& mm) -> MembershipFn {
            using T = std::decay_t<decltype(mm)>;
            const T* ptr = &mm;
            if constexpr (std::is_same_v<T, Dfa>) {
                return [holder, ptr](std::span<const SymbolId> w) {
                    return run_dfa(*ptr, w).accepted;
                };
            } else if constexpr (std::is_same_v<T, Nfa>) {
                return [holder, ptr](std::span<const SymbolId> w) { return nfa_accepts(*ptr, w); };
            } else if constexpr (std::is_same_v<T, Mealy>) {
                return [holder, ptr](std::span<const SymbolId> w) {
                    return run_dfa(ptr->fa, w).accepted;
                };
            } else if constexpr (std::is_same_v<T, Pda>) {
                auto budget = limits.pda_budget;
                return [holder, ptr, budget](std::span<const SymbolId> w) {
                    PdaResult r = run_pda(*ptr, w, budget);
                    if (r.verdict == PdaVerdict::BudgetExhausted) return pda_accepts_exact(*ptr, w);
                    return r.verdict == PdaVerdict::Accept;
                };
            } else if constexpr (std::is_same_v<T, Lba>) {
                return [holder, ptr](std::span<const SymbolId> w) {
                    return run_lba(*ptr, w).verdict == LbaVerdict::Accept;
                };
            } else {
                auto budget = limits.tm_budget;
                return [holder, ptr, budget](std::span<const SymbolId> w) {
                    return run_tm(*ptr, w, budget).verdict == TmVerdict::Accept;
                };
            }
        },
        *holder);
    return acc;
}

BoundedAcceptor make_acceptor(const AnyAgent& a, const AcceptorLimits& limits) {
    auto holder = std::make_shared<const AnyAgent>(a);
    BoundedAcceptor acc;
    acc.alphabet = agent_input_alphabet(*holder);
    if (const auto* cf = std::get_if<CfAgent>(holder.get())) {
        auto pda = std::make_shared<const Pda>(cf->to_pda());
        auto budget = limits.pda_budget;
        acc.accepts = [pda, budget](std::span<const SymbolId> w) {
            PdaResult r = run_pda(*pda, w, budget);
            if (r.verdict == PdaVerdict::BudgetExhausted) return pda_accepts_exact(*pda, w);
            return r.verdict == PdaVerdict::Accept;
        };
        return acc;
    }
    auto budget = limits.tm_budget;
    acc.accepts = [holder, budget](std::span<const SymbolId> w) {
        return run_agent(*holder, w, budget, false).verdict == AgentVerdict::Accept;
    };
    return acc;
}

TraceEquivalenceResult check_trace_equivalence(const BoundedAcceptor& a, const BoundedAcceptor& b,
                                               int max_len) {
    if (!a.alphabet.same_name_set(b.alphabet))
        throw AlphabetMismatchError("trace equivalence needs identical input alphabets");
    auto remap = *a.alphabet.mapping_into(b.alphabet);

    MembershipFn rhs = [&b, remap](std::span<const SymbolId> w) {
        Word translated;
        translated.reserve(w.size());
        for (SymbolId s : w) translated.push_back(remap[s]);
        return b.accepts(translated);
    };

    ScanResult scan = scan_disagreement(a.alphabet.size(), max_len, a.accepts, rhs);
    TraceEquivalenceResult result;
    result.words_checked = scan.words_checked;
    if (scan.first_disagreement) {
        result.equivalent = false;
        result.witness = word_at_index(a.alphabet.size(), max_len, *scan.first_disagreement);
    }
    return result;
}

TraceEquivalenceResult check_trace_equivalence(const AnyMachine& a, const AnyMachine& b,
                                               int max_len, const AcceptorLimits& limits) {
    return check_trace_equivalence(make_acceptor(a, limits), make_acceptor(b, limits), max_len);
}

} // namespace aaf
