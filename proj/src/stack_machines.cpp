#include "aaf/stack_machines.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <string>

namespace aaf {

namespace {

void check_word(const NameTable& alphabet, std::span<const SymbolId> w) {
    for (SymbolId a : w) {
        if (a >= alphabet.size()) {
            throw UnknownSymbolError("symbol id " + std::to_string(a) +
                                     " outside alphabet of size " + std::to_string(alphabet.size()));
        }
    }
}

} // namespace

void Pda::validate() const {
    std::vector<std::string> bad;
    if (states.empty()) bad.push_back("state set is empty");
    if (start >= states.size()) bad.push_back("start state out of range");
    if (accept.size() != states.size()) bad.push_back("accept flags do not cover the state set");
    for (std::size_t i = 0; i < rules.size(); ++i) {
        const PdaRule& r = rules[i];
        if (r.from >= states.size() || r.to >= states.size())
            bad.push_back("rule " + std::to_string(i) + " references a state out of range");
        if (r.on && *r.on >= alphabet.size())
            bad.push_back("rule " + std::to_string(i) + " reads a symbol outside the input alphabet");
        if (r.pop && *r.pop >= stack_alphabet.size())
            bad.push_back("rule " + std::to_string(i) + " pops a symbol outside the stack alphabet");
        for (SymbolId s : r.push)
            if (s >= stack_alphabet.size())
                bad.push_back("rule " + std::to_string(i) + " pushes a symbol outside the stack alphabet");
    }
    if (!bad.empty()) throw ValidationError(std::move(bad));
}

PdaResult run_pda(const Pda& p, std::span<const SymbolId> w, std::uint64_t budget) {
    p.validate();
    check_word(p.alphabet, w);
    if (budget == 0) throw Error("run_pda: budget must be positive");

    // Rules grouped by source state.
    std::vector<std::vector<std::size_t>> by_state(p.states.size());
    for (std::size_t i = 0; i < p.rules.size(); ++i) by_state[p.rules[i].from].push_back(i);

    auto is_final = [&](const PdaConfig& c) { return c.index == w.size() && p.accept[c.state]; };

    std::vector<PdaConfig> configs;
    std::vector<std::int64_t> parent;
    std::set<PdaConfig> seen;
    std::deque<std::size_t> frontier;

    auto build_path = [&](std::size_t at) {
        std::vector<PdaConfig> path;
        for (std::int64_t i = static_cast<std::int64_t>(at); i >= 0; i = parent[i])
            path.push_back(configs[i]);
        std::reverse(path.begin(), path.end());
        return path;
    };

    PdaResult result;
    PdaConfig init{p.start, 0, {}};
    configs.push_back(init);
    parent.push_back(-1);
    seen.insert(init);
    frontier.push_back(0);
    if (is_final(init)) {
        result.verdict = PdaVerdict::Accept;
        result.accepting_path = build_path(0);
        return result;
    }

    while (!frontier.empty()) {
        if (result.configs_explored >= budget) {
            result.verdict = PdaVerdict::BudgetExhausted;
            return result;
        }
        std::size_t cur = frontier.front();
        frontier.pop_front();
        ++result.configs_explored;
        const PdaConfig c = configs[cur]; // copy: configs may reallocate below

        for (std::size_t ri : by_state[c.state]) {
            const PdaRule& r = p.rules[ri];
            std::size_t next_index = c.index;
            if (r.on) {
                if (c.index >= w.size() || w[c.index] != *r.on) continue;
                next_index = c.index + 1;
            }
            std::vector<SymbolId> stack = c.stack;
            if (r.pop) {
                if (stack.empty() || stack.front() != *r.pop) continue;
                stack.erase(stack.begin());
            }
            stack.insert(stack.begin(), r.push.begin(), r.push.end());

            PdaConfig nc{r.to, next_index, std::move(stack)};
            if (!seen.insert(nc).second) continue;
            configs.push_back(nc);
            parent.push_back(static_cast<std::int64_t>(cur));
            if (is_final(nc)) {
                result.verdict = PdaVerdict::Accept;
                result.accepting_path = build_path(configs.size() - 1);
                return result;
            }
            frontier.push_back(configs.size() - 1);
        }
    }
    result.verdict = PdaVerdict::Reject;
    return result;
}

PdaDeterminismReport is_deterministic_pda(const Pda& p) {
    p.validate();

    // States reachable in the rule graph, ignoring stack contents. This
    // over-approximates true reachability, so a clean report is sound.
    std::vector<bool> reach(p.states.size(), false);
    std::deque<StateId> work{p.start};
    reach[p.start] = true;
    while (!work.empty()) {
        StateId q = work.front();
        work.pop_front();
        for (const PdaRule& r : p.rules) {
            if (r.from == q && !reach[r.to]) {
                reach[r.to] = true;
                work.push_back(r.to);
            }
        }
    }

    auto overlaps = [](const std::optional<SymbolId>& a, const std::optional<SymbolId>& b) {
        return !a || !b || *a == *b;
    };

    PdaDeterminismReport report;
    for (std::size_t i = 0; i < p.rules.size(); ++i) {
        if (!reach[p.rules[i].from]) continue;
        for (std::size_t j = i + 1; j < p.rules.size(); ++j) {
            const PdaRule& a = p.rules[i];
            const PdaRule& b = p.rules[j];
            if (a.from != b.from) continue;
            if (a == b) continue; // exact duplicate, one move in set semantics
            if (overlaps(a.on, b.on) && overlaps(a.pop, b.pop)) {
                report.conflicts.emplace_back(i, j);
            }
        }
    }
    report.deterministic = report.conflicts.empty();
    return report;
}

// ---------------------------------------------------------------------------

void Tm::validate() const {
    std::vector<std::string> bad;
    if (states.empty()) bad.push_back("state set is empty");
    if (start >= states.size()) bad.push_back("start state out of range");
    if (accept_state >= states.size() || reject_state >= states.size())
        bad.push_back("halting state out of range");
    if (accept_state == reject_state) bad.push_back("accept and reject states must differ");
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
    for (StateId q = 0; q < states.size(); ++q) {
        if (q == accept_state || q == reject_state) continue;
        for (SymbolId g = 0; g < tape_alphabet.size(); ++g) {
            const auto& r = delta[q * tape_alphabet.size() + g];
            if (!r) {
                bad.push_back("delta undefined for non-halting state " + states.name(q) +
                              " on symbol " + tape_alphabet.name(g));
            } else if (r->to >= states.size() || r->write >= tape_alphabet.size()) {
                bad.push_back("delta target out of range for state " + states.name(q));
            }
        }
    }
    if (!bad.empty()) throw ValidationError(std::move(bad));
}

TmResult run_tm(const Tm& t, std::span<const SymbolId> w, std::uint64_t budget) {
    t.validate();
    check_word(t.input_alphabet, w);
    if (budget == 0) throw Error("run_tm: budget must be positive");

    TmResult result;
    TapeSnapshot& tape = result.snapshot;
    tape.cells.reserve(w.size() + 8);
    for (SymbolId a : w) tape.cells.push_back(t.input_to_tape[a]);
    tape.head = 0;

    StateId q = t.start;
    while (true) {
        if (q == t.accept_state) {
            result.verdict = TmVerdict::Accept;
            return result;
        }
        if (q == t.reject_state) {
            result.verdict = TmVerdict::Reject;
            return result;
        }
        if (tape.step_count >= budget) {
            result.verdict = TmVerdict::Timeout;
            return result;
        }
        if (tape.head >= tape.cells.size()) tape.cells.resize(tape.head + 1, t.blank);
        const auto& r = t.rule(q, tape.cells[tape.head]);
        tape.cells[tape.head] = r->write;
        if (r->move == TapeMove::Right) {
            ++tape.head;
        } else if (tape.head > 0) {
            --tape.head;
        }
        q = r->to;
        ++tape.step_count;
    }
}

// ---------------------------------------------------------------------------

void Lba::validate() const {
    std::vector<std::string> bad;
    if (states.empty()) bad.push_back("state set is empty");
    if (start >= states.size()) bad.push_back("start state out of range");
    if (accept_state >= states.size() || reject_state >= states.size())
        bad.push_back("halting state out of range");
    if (accept_state == reject_state) bad.push_back("accept and reject states must differ");
    if (input_to_tape.size() != input_alphabet.size())
        bad.push_back("input-to-tape map does not cover the input alphabet");
    for (SymbolId m : input_to_tape)
        if (m >= tape_alphabet.size()) bad.push_back("input symbol maps outside the tape alphabet");
    if (delta.size() != states.size() * symbol_count()) bad.push_back("delta table has wrong shape");
    if (!bad.empty()) throw ValidationError(std::move(bad));

    for (StateId q = 0; q < states.size(); ++q) {
        if (q == accept_state || q == reject_state) continue;
        for (SymbolId g = 0; g < symbol_count(); ++g) {
            const auto& r = rule(q, g);
            if (!r) {
                bad.push_back("delta undefined for non-halting state " + states.name(q));
                continue;
            }
            if (r->to >= states.size()) bad.push_back("delta target out of range");
            if (g == left_end()) {
                if (r->write != left_end() || r->move != TapeMove::Right)
                    throw EndmarkerViolationError(
                        "state " + states.name(q) +
                        " must rewrite the left endmarker and move right");
            } else if (g == right_end()) {
                if (r->write != right_end() || r->move != TapeMove::Left)
                    throw EndmarkerViolationError(
                        "state " + states.name(q) +
                        " must rewrite the right endmarker and move left");
            } else if (r->write >= tape_alphabet.size()) {
                throw EndmarkerViolationError(
                    "state " + states.name(q) + " writes an endmarker into an interior cell");
            }
        }
    }
    if (!bad.empty()) throw ValidationError(std::move(bad));
}

std::uint64_t lba_configuration_bound(const Lba& l, std::size_t input_len) {
    const std::uint64_t cap = 1ULL << 62;
    std::uint64_t bound = l.states.size();
    bound *= (input_len + 2);
    for (std::size_t i = 0; i < input_len; ++i) {
        if (bound > cap / std::max<std::uint64_t>(l.tape_alphabet.size(), 1)) return cap;
        bound *= l.tape_alphabet.size();
    }
    return std::min(bound, cap);
}

std::optional<LbaConfig> lba_step(const Lba& l, const LbaConfig& c) {
    if (c.state == l.accept_state || c.state == l.reject_state) return std::nullopt;
    const std::size_t n = c.interior.size();
    // The head must stay within the endmarked tape.
    if (c.head > n + 1) throw Error("lba_step: head escaped the tape");
    SymbolId read = c.head == 0      ? l.left_end()
                    : c.head == n + 1 ? l.right_end()
                                      : c.interior[c.head - 1];
    const auto& r = l.rule(c.state, read);
    if (!r) throw Error("lba_step: missing transition (validate should have caught this)");
    LbaConfig next = c;
    if (c.head >= 1 && c.head <= n) next.interior[c.head - 1] = r->write;
    if (r->move == TapeMove::Right) {
        ++next.head;
    } else {
        if (next.head == 0) throw Error("lba_step: head escaped left endmarker");
        --next.head;
    }
    next.state = r->to;
    if (next.head > n + 1) throw Error("lba_step: head escaped right endmarker");
    return next;
}

LbaResult run_lba(const Lba& l, std::span<const SymbolId> w) {
    l.validate();
    check_word(l.input_alphabet, w);

    LbaConfig c;
    c.state = l.start;
    c.head = 0;
    c.interior.reserve(w.size());
    for (SymbolId a : w) c.interior.push_back(l.input_to_tape[a]);

    const std::uint64_t bound = lba_configuration_bound(l, w.size());
    std::map<LbaConfig, std::uint64_t> seen_at;

    LbaResult result;
    while (true) {
        if (c.state == l.accept_state) {
            result.verdict = LbaVerdict::Accept;
            return result;
        }
        if (c.state == l.reject_state) {
            result.verdict = LbaVerdict::Reject;
            return result;
        }
        auto [it, inserted] = seen_at.emplace(c, result.steps);
        if (!inserted) {
            result.verdict = LbaVerdict::LoopDetected;
            result.loop = LbaLoopWitness{c, result.steps - it->second};
            return result;
        }
        if (result.steps > bound) {
            // Unreachable when the memo is exact; kept as the formula-level
            // guarantee that simulation always terminates.
            result.verdict = LbaVerdict::LoopDetected;
            result.loop = LbaLoopWitness{c, bound};
            return result;
        }
        auto next = lba_step(l, c);
        if (!next) throw Error("run_lba: halting state slipped through");
        c = std::move(*next);
        ++result.steps;
    }
}

} // namespace aaf
