#include "floyd/fsa.hh"

#include <map>

namespace floyd {

namespace {

// Dense successor table; -1 marks a missing move.
std::vector<std::vector<std::int64_t>> table_of(const FiniteAutomaton& a, std::size_t symbols)
{
    std::vector<std::vector<std::int64_t>> t(a.num_states, std::vector<std::int64_t>(symbols, -1));
    for (const auto& [key, targets] : a.delta)
        if (!targets.empty()) t[key.first][key.second] = *targets.begin();
    return t;
}

} // namespace

bool fsa_is_deterministic(const FiniteAutomaton& a)
{
    if (a.initial.size() != 1) return false;
    for (const auto& [key, targets] : a.delta)
        if (targets.size() > 1) return false;
    return true;
}

FiniteAutomaton fsa_intersect(const FiniteAutomaton& a, const FiniteAutomaton& b, std::size_t symbols)
{
    FiniteAutomaton out;
    std::map<std::pair<State, State>, State> ids;
    std::vector<std::pair<State, State>> todo;
    auto intern = [&](State x, State y) {
        auto [it, fresh] = ids.try_emplace({x, y}, static_cast<State>(out.num_states));
        if (fresh) {
            ++out.num_states;
            todo.emplace_back(x, y);
            if (a.final.count(x) && b.final.count(y)) out.final.insert(it->second);
        }
        return it->second;
    };
    for (State x : a.initial)
        for (State y : b.initial) out.initial.insert(intern(x, y));
    while (!todo.empty()) {
        const auto [x, y] = todo.back();
        todo.pop_back();
        const State from = ids.at({x, y});
        for (Symbol c = 0; c < symbols; ++c) {
            auto ia = a.delta.find({x, c});
            auto ib = b.delta.find({y, c});
            if (ia == a.delta.end() || ib == b.delta.end()) continue;
            for (State p : ia->second)
                for (State r : ib->second) out.add(from, c, intern(p, r));
        }
    }
    return out;
}

FiniteAutomaton fsa_unite(const FiniteAutomaton& a, const FiniteAutomaton& b)
{
    FiniteAutomaton out = a;
    const State off = static_cast<State>(a.num_states);
    out.num_states += b.num_states;
    for (State q : b.initial) out.initial.insert(off + q);
    for (State q : b.final) out.final.insert(off + q);
    for (const auto& [key, targets] : b.delta)
        for (State p : targets) out.add(off + key.first, key.second, off + p);
    return out;
}

FiniteAutomaton fsa_determinize(const FiniteAutomaton& a, std::size_t symbols)
{
    FiniteAutomaton out;
    std::map<StateSet, State> ids;
    std::vector<StateSet> sets;
    auto intern = [&](StateSet s) {
        auto [it, fresh] = ids.try_emplace(s, static_cast<State>(sets.size()));
        if (fresh) {
            for (State q : s)
                if (a.final.count(q)) {
                    out.final.insert(it->second);
                    break;
                }
            sets.push_back(std::move(s));
        }
        return it->second;
    };
    out.initial.insert(intern(a.initial));
    for (std::size_t i = 0; i < sets.size(); ++i) {
        for (Symbol c = 0; c < symbols; ++c) {
            StateSet next;
            for (State q : sets[i]) {
                auto it = a.delta.find({q, c});
                if (it != a.delta.end()) next.insert(it->second.begin(), it->second.end());
            }
            if (!next.empty()) out.add(static_cast<State>(i), c, intern(std::move(next)));
        }
    }
    out.num_states = sets.size();
    return out;
}

FiniteAutomaton fsa_complement(const FiniteAutomaton& a, std::size_t symbols)
{
    FiniteAutomaton d = fsa_is_deterministic(a) ? a : fsa_determinize(a, symbols);
    const State sink = static_cast<State>(d.num_states);
    bool used = d.initial.empty();
    if (d.initial.empty()) d.initial.insert(sink);
    for (State q = 0; q < d.num_states; ++q)
        for (Symbol c = 0; c < symbols; ++c)
            if (!d.delta.count({q, c})) {
                d.add(q, c, sink);
                used = true;
            }
    if (used) {
        ++d.num_states;
        for (Symbol c = 0; c < symbols; ++c) d.add(sink, c, sink);
    }
    StateSet final;
    for (State q = 0; q < d.num_states; ++q)
        if (!d.final.count(q)) final.insert(q);
    d.final = std::move(final);
    return fsa_minimize(d, symbols);
}

FiniteAutomaton fsa_minimize(const FiniteAutomaton& input, std::size_t symbols)
{
    const FiniteAutomaton a = fsa_is_deterministic(input) ? input : fsa_determinize(input, symbols);
    const std::size_t n = a.num_states;
    const auto t = table_of(a, symbols);

    // Live states: reachable from the initial state and reaching a final one.
    std::vector<bool> reach(n, false), live(n, false);
    std::vector<State> stack(a.initial.begin(), a.initial.end());
    for (State q : stack) reach[q] = true;
    while (!stack.empty()) {
        const State q = stack.back();
        stack.pop_back();
        for (Symbol c = 0; c < symbols; ++c)
            if (t[q][c] >= 0 && !reach[t[q][c]]) {
                reach[t[q][c]] = true;
                stack.push_back(static_cast<State>(t[q][c]));
            }
    }
    for (State q : a.final) live[q] = true;
    for (bool changed = true; changed;) {
        changed = false;
        for (State q = 0; q < n; ++q)
            for (Symbol c = 0; c < symbols && !live[q]; ++c)
                if (t[q][c] >= 0 && live[t[q][c]]) live[q] = changed = true;
    }
    auto keep = [&](std::int64_t q) { return q >= 0 && reach[q] && live[q]; };

    // Moore refinement over kept states; -1 stands for the dead class.
    std::vector<std::int64_t> block(n, -1);
    for (State q = 0; q < n; ++q)
        if (keep(q)) block[q] = a.final.count(q) ? 1 : 0;
    for (std::size_t blocks = 0;;) {
        std::map<std::vector<std::int64_t>, std::int64_t> sig;
        std::vector<std::int64_t> next(n, -1);
        for (State q = 0; q < n; ++q) {
            if (!keep(q)) continue;
            std::vector<std::int64_t> s{block[q]};
            for (Symbol c = 0; c < symbols; ++c) s.push_back(keep(t[q][c]) ? block[t[q][c]] : -1);
            next[q] = sig.try_emplace(std::move(s), static_cast<std::int64_t>(sig.size())).first->second;
        }
        block = std::move(next);
        if (sig.size() == blocks) break;
        blocks = sig.size();
    }

    FiniteAutomaton out;
    const State init = a.initial.empty() ? 0 : *a.initial.begin();
    if (a.initial.empty() || !keep(init)) {
        out.num_states = 1;
        out.initial.insert(0);
        return out;
    }
    // Number blocks in discovery order from the initial state.
    std::map<std::int64_t, State> id;
    std::vector<State> order{init};
    id[block[init]] = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const State q = order[i];
        for (Symbol c = 0; c < symbols; ++c) {
            if (!keep(t[q][c])) continue;
            const State p = static_cast<State>(t[q][c]);
            auto [it, fresh] = id.try_emplace(block[p], static_cast<State>(id.size()));
            if (fresh) order.push_back(p);
            out.add(id.at(block[q]), c, it->second);
        }
    }
    out.num_states = id.size();
    out.initial.insert(0);
    for (State q : order)
        if (a.final.count(q)) out.final.insert(id.at(block[q]));
    return out;
}

FiniteAutomaton fsa_pullback(const FiniteAutomaton& a, const std::vector<Symbol>& old_of)
{
    FiniteAutomaton out;
    out.num_states = a.num_states;
    out.initial = a.initial;
    out.final = a.final;
    for (State q = 0; q < a.num_states; ++q)
        for (Symbol c = 0; c < old_of.size(); ++c) {
            auto it = a.delta.find({q, old_of[c]});
            if (it != a.delta.end()) out.delta[{q, c}] = it->second;
        }
    return out;
}

FiniteAutomaton fsa_pushforward(const FiniteAutomaton& a, const std::vector<Symbol>& new_of)
{
    FiniteAutomaton out;
    out.num_states = a.num_states;
    out.initial = a.initial;
    out.final = a.final;
    for (const auto& [key, targets] : a.delta)
        for (State p : targets) out.add(key.first, new_of[key.second], p);
    return out;
}

} // namespace floyd
