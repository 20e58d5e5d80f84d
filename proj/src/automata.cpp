#include "aaf/automata.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace aaf {

namespace {

void check_symbols(const NameTable& alphabet, std::span<const SymbolId> w) {
    for (SymbolId a : w) {
        if (a >= alphabet.size()) {
            throw UnknownSymbolError("symbol id " + std::to_string(a) +
                                     " outside alphabet of size " + std::to_string(alphabet.size()));
        }
    }
}

} // namespace

void Dfa::validate() const {
    std::vector<std::string> bad;
    if (states.empty()) bad.push_back("state set is empty");
    if (start >= states.size()) bad.push_back("start state out of range");
    if (accept.size() != states.size()) bad.push_back("accept flags do not cover the state set");
    if (delta.size() != states.size() * alphabet.size())
        bad.push_back("delta is not total over states x alphabet");
    for (std::size_t i = 0; i < delta.size(); ++i) {
        if (delta[i] >= states.size()) {
            bad.push_back("delta target out of range at entry " + std::to_string(i));
            break;
        }
    }
    if (!bad.empty()) throw ValidationError(std::move(bad));
}

void Nfa::add_transition(StateId from, SymbolId on, StateId to) {
    auto& targets = delta[from * alphabet.size() + on];
    auto it = std::lower_bound(targets.begin(), targets.end(), to);
    if (it == targets.end() || *it != to) targets.insert(it, to);
}

void Nfa::add_epsilon(StateId from, StateId to) {
    auto& targets = eps[from];
    auto it = std::lower_bound(targets.begin(), targets.end(), to);
    if (it == targets.end() || *it != to) targets.insert(it, to);
}

void Nfa::validate() const {
    std::vector<std::string> bad;
    if (states.empty()) bad.push_back("state set is empty");
    if (start >= states.size()) bad.push_back("start state out of range");
    if (accept.size() != states.size()) bad.push_back("accept flags do not cover the state set");
    if (delta.size() != states.size() * alphabet.size())
        bad.push_back("delta table has wrong shape");
    if (eps.size() != states.size()) bad.push_back("epsilon table has wrong shape");
    if (alphabet.contains("eps"))
        bad.push_back("\"eps\" is reserved for epsilon moves and cannot be an alphabet symbol");
    for (const auto& targets : delta)
        for (StateId t : targets)
            if (t >= states.size()) bad.push_back("transition target out of range");
    for (const auto& targets : eps)
        for (StateId t : targets)
            if (t >= states.size()) bad.push_back("epsilon target out of range");
    if (!bad.empty()) throw ValidationError(std::move(bad));
}

void Mealy::validate() const {
    fa.validate();
    std::vector<std::string> bad;
    if (lambda.size() != fa.delta.size())
        bad.push_back("lambda is not defined wherever delta is");
    for (SymbolId out : lambda)
        if (out >= outputs.size()) bad.push_back("lambda output out of range");
    if (!bad.empty()) throw ValidationError(std::move(bad));
}

Trace run_dfa(const Dfa& dfa, std::span<const SymbolId> w) {
    check_symbols(dfa.alphabet, w);
    Trace t;
    t.input.assign(w.begin(), w.end());
    t.visited.reserve(w.size() + 1);
    StateId q = dfa.start;
    t.visited.push_back(q);
    for (SymbolId a : w) {
        q = dfa.next(q, a);
        t.visited.push_back(q);
    }
    t.accepted = dfa.is_accepting(q);
    return t;
}

Trace run_mealy(const Mealy& m, std::span<const SymbolId> w) {
    Trace t = run_dfa(m.fa, w);
    Word out;
    out.reserve(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        out.push_back(m.output(t.visited[i], w[i]));
    }
    t.outputs = std::move(out);
    return t;
}

std::vector<StateId> epsilon_closure(const Nfa& nfa, std::span<const StateId> seed) {
    std::vector<bool> in(nfa.states.size(), false);
    std::deque<StateId> work;
    for (StateId q : seed) {
        if (!in[q]) {
            in[q] = true;
            work.push_back(q);
        }
    }
    while (!work.empty()) {
        StateId q = work.front();
        work.pop_front();
        for (StateId t : nfa.eps[q]) {
            if (!in[t]) {
                in[t] = true;
                work.push_back(t);
            }
        }
    }
    std::vector<StateId> closure;
    for (StateId q = 0; q < nfa.states.size(); ++q)
        if (in[q]) closure.push_back(q);
    return closure;
}

bool nfa_accepts(const Nfa& nfa, std::span<const SymbolId> w) {
    check_symbols(nfa.alphabet, w);
    StateId s = nfa.start;
    std::vector<StateId> current = epsilon_closure(nfa, std::span<const StateId>(&s, 1));
    for (SymbolId a : w) {
        std::set<StateId> next;
        for (StateId q : current)
            for (StateId t : nfa.targets(q, a)) next.insert(t);
        std::vector<StateId> base(next.begin(), next.end());
        current = epsilon_closure(nfa, base);
        if (current.empty()) return false;
    }
    for (StateId q : current)
        if (nfa.accept[q]) return true;
    return false;
}

Dfa nfa_to_dfa(const Nfa& nfa) {
    nfa.validate();
    const std::size_t sigma = nfa.alphabet.size();

    auto subset_name = [&](const std::vector<StateId>& subset) {
        std::string name = "{";
        for (std::size_t i = 0; i < subset.size(); ++i) {
            if (i > 0) name += ',';
            name += nfa.states.name(subset[i]);
        }
        name += '}';
        return name;
    };

    Dfa dfa;
    dfa.alphabet = nfa.alphabet;

    std::map<std::vector<StateId>, StateId> seen; // sorted subset -> dfa state
    std::vector<std::vector<StateId>> subsets;    // dfa state -> subset
    std::deque<StateId> work;

    StateId s = nfa.start;
    std::vector<StateId> start_subset = epsilon_closure(nfa, std::span<const StateId>(&s, 1));
    dfa.start = 0;
    seen.emplace(start_subset, 0);
    subsets.push_back(start_subset);
    dfa.states.intern(subset_name(start_subset));
    work.push_back(0);

    std::vector<std::vector<StateId>> table; // per dfa state, per symbol, target

    while (!work.empty()) {
        StateId d = work.front();
        work.pop_front();
        if (table.size() <= d) table.resize(d + 1, std::vector<StateId>(sigma, 0));
        const std::vector<StateId> subset = subsets[d];
        for (SymbolId a = 0; a < sigma; ++a) {
            std::set<StateId> moved;
            for (StateId q : subset)
                for (StateId t : nfa.targets(q, a)) moved.insert(t);
            std::vector<StateId> base(moved.begin(), moved.end());
            std::vector<StateId> next_subset = epsilon_closure(nfa, base);
            auto [it, inserted] = seen.emplace(next_subset, static_cast<StateId>(subsets.size()));
            if (inserted) {
                subsets.push_back(next_subset);
                dfa.states.intern(subset_name(next_subset));
                work.push_back(it->second);
            }
            table[d][a] = it->second;
        }
    }

    dfa.delta.resize(subsets.size() * sigma);
    for (StateId d = 0; d < subsets.size(); ++d)
        for (SymbolId a = 0; a < sigma; ++a) dfa.delta[d * sigma + a] = table[d][a];

    dfa.accept.resize(subsets.size(), false);
    for (StateId d = 0; d < subsets.size(); ++d) {
        for (StateId q : subsets[d]) {
            if (nfa.accept[q]) {
                dfa.accept[d] = true;
                break;
            }
        }
    }
    dfa.validate();
    return dfa;
}

Nfa remove_epsilons(const Nfa& nfa) {
    nfa.validate();
    Nfa out;
    out.states = nfa.states;
    out.alphabet = nfa.alphabet;
    out.start = nfa.start;
    out.delta.assign(nfa.states.size() * nfa.alphabet.size(), {});
    out.eps.assign(nfa.states.size(), {});
    out.accept.assign(nfa.states.size(), false);
    for (StateId q = 0; q < nfa.states.size(); ++q) {
        std::vector<StateId> from = epsilon_closure(nfa, std::span<const StateId>(&q, 1));
        for (StateId p : from)
            if (nfa.accept[p]) out.accept[q] = true;
        for (SymbolId a = 0; a < nfa.alphabet.size(); ++a) {
            std::set<StateId> moved;
            for (StateId p : from)
                for (StateId t : nfa.targets(p, a)) moved.insert(t);
            std::vector<StateId> base(moved.begin(), moved.end());
            for (StateId t : epsilon_closure(nfa, base)) out.add_transition(q, a, t);
        }
    }
    return out;
}

namespace detail {

std::vector<SymbolId> alphabet_remap(const NameTable& a, const NameTable& b) {
    if (!a.same_name_set(b)) {
        throw AlphabetMismatchError("alphabets differ as name sets");
    }
    auto map = b.mapping_into(a);
    return *map; // same_name_set guarantees presence
}

} // namespace detail

Dfa dfa_product(const Dfa& a, const Dfa& b, ProductMode mode) {
    a.validate();
    b.validate();
    // b_map[b-symbol-id] = a-symbol-id; the product is indexed by a's ids.
    std::vector<SymbolId> b_map_rev = detail::alphabet_remap(a, b);
    std::vector<SymbolId> a_to_b(a.alphabet.size());
    for (SymbolId bs = 0; bs < b_map_rev.size(); ++bs) a_to_b[b_map_rev[bs]] = bs;

    const std::size_t sigma = a.alphabet.size();
    Dfa out;
    out.alphabet = a.alphabet;

    std::map<std::pair<StateId, StateId>, StateId> seen;
    std::vector<std::pair<StateId, StateId>> pairs;
    std::deque<StateId> work;

    auto intern_pair = [&](StateId qa, StateId qb) {
        auto [it, inserted] = seen.emplace(std::make_pair(qa, qb), static_cast<StateId>(pairs.size()));
        if (inserted) {
            pairs.emplace_back(qa, qb);
            out.states.intern("(" + a.states.name(qa) + "," + b.states.name(qb) + ")");
            work.push_back(it->second);
        }
        return it->second;
    };

    out.start = intern_pair(a.start, b.start);
    std::vector<std::vector<StateId>> table;
    while (!work.empty()) {
        StateId d = work.front();
        work.pop_front();
        if (table.size() <= d) table.resize(d + 1, std::vector<StateId>(sigma, 0));
        auto [qa, qb] = pairs[d];
        for (SymbolId s = 0; s < sigma; ++s) {
            StateId na = a.next(qa, s);
            StateId nb = b.next(qb, a_to_b[s]);
            table[d][s] = intern_pair(na, nb);
        }
    }

    out.delta.resize(pairs.size() * sigma);
    for (StateId d = 0; d < pairs.size(); ++d)
        for (SymbolId s = 0; s < sigma; ++s) out.delta[d * sigma + s] = table[d][s];

    out.accept.resize(pairs.size(), false);
    for (StateId d = 0; d < pairs.size(); ++d) {
        bool fa = a.accept[pairs[d].first];
        bool fb = b.accept[pairs[d].second];
        switch (mode) {
            case ProductMode::Intersection: out.accept[d] = fa && fb; break;
            case ProductMode::Union: out.accept[d] = fa || fb; break;
            case ProductMode::Difference: out.accept[d] = fa && !fb; break;
        }
    }
    out.validate();
    return out;
}

std::vector<bool> reachable_states(const Dfa& dfa) {
    std::vector<bool> seen(dfa.states.size(), false);
    std::deque<StateId> work;
    seen[dfa.start] = true;
    work.push_back(dfa.start);
    while (!work.empty()) {
        StateId q = work.front();
        work.pop_front();
        for (SymbolId a = 0; a < dfa.alphabet.size(); ++a) {
            StateId t = dfa.next(q, a);
            if (!seen[t]) {
                seen[t] = true;
                work.push_back(t);
            }
        }
    }
    return seen;
}

Word intern_word(const NameTable& alphabet, const std::vector<std::string>& names) {
    Word w;
    w.reserve(names.size());
    for (const auto& n : names) {
        auto id = alphabet.find(n);
        if (!id) throw UnknownSymbolError("symbol \"" + n + "\" is not in the alphabet");
        w.push_back(*id);
    }
    return w;
}

} // namespace aaf
