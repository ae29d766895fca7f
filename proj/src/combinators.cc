#include "floyd/combinators.hh"

#include <algorithm>
#include <limits>
#include <map>
#include <span>
#include <unordered_map>

#include "explore.hh"
#include "floyd/error.hh"

namespace floyd {

using detail::ExploreHooks;
using detail::Exploration;
using detail::PushKind;

namespace {

FloydAutomaton build(const AlphabetPtr& alpha, const Exploration& ex, const std::vector<State>& initial,
                     const std::vector<bool>& final)
{
    FloydAutomaton out(alpha, ex.num_states);
    for (auto [q, c, p] : ex.pushes) out.add_push(q, c, p);
    for (auto [t, b, p] : ex.flushes) out.add_flush(t, b, p);
    for (State q : initial) out.initial.insert(q);
    for (State q = 0; q < ex.num_states; ++q)
        if (final[q]) out.final.insert(q);
    return out;
}

void require_same_alphabet(const FloydAutomaton& a, const FloydAutomaton& b)
{
    if (a.alphabet_ptr() != b.alphabet_ptr() && !a.alphabet().same_structure(b.alphabet()))
        throw Error("automata are over different alphabets");
}

struct PairHash {
    std::size_t operator()(const std::pair<State, State>& p) const
    {
        return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(p.first) << 32) | p.second);
    }
};

} // namespace

FloydAutomaton max_automaton(AlphabetPtr alpha)
{
    FloydAutomaton out(alpha, 1);
    for (Symbol c = 0; c < alpha->size(); ++c) out.add_push(0, c, 0);
    out.add_flush(0, 0, 0);
    out.initial.insert(0);
    out.final.insert(0);
    return out;
}

FloydAutomaton empty_automaton(AlphabetPtr alpha)
{
    FloydAutomaton out(std::move(alpha), 1);
    out.initial.insert(0);
    return out;
}

bool is_deterministic(const FloydAutomaton& a)
{
    if (a.initial.size() > 1) return false;
    for (State q = 0; q < a.num_states(); ++q)
        for (Symbol c = 0; c < a.alphabet().size(); ++c)
            if (a.push_targets(q, c).size() > 1) return false;
    for (const auto& [key, targets] : a.flush_entries())
        if (targets.size() > 1) return false;
    return true;
}

FloydAutomaton trim(const FloydAutomaton& a)
{
    std::vector<State> to_new(a.num_states(), kSharp);
    std::vector<State> to_old;
    auto intern = [&](State q) {
        if (to_new[q] == kSharp) {
            to_new[q] = static_cast<State>(to_old.size());
            to_old.push_back(q);
        }
        return to_new[q];
    };
    std::vector<State> init;
    for (State q : a.initial) init.push_back(intern(q));

    ExploreHooks hooks;
    hooks.push = [&](State q, Symbol c, std::vector<std::pair<State, PushKind>>& out) {
        for (State p : a.push_targets(to_old[q], c)) out.emplace_back(intern(p), detail::kPushOrMark);
    };
    hooks.flush = [&](State t, State b, std::vector<State>& out) {
        for (State p : a.flush_targets(to_old[t], to_old[b])) out.push_back(intern(p));
    };
    Exploration ex = detail::explore(init, a.alphabet(), hooks);
    std::vector<bool> final(ex.num_states);
    for (State q = 0; q < ex.num_states; ++q) final[q] = a.is_final(to_old[q]);
    FloydAutomaton out = build(a.alphabet_ptr(), ex, init, final);
    for (State q = 0; q < ex.num_states; ++q) out.set_state_name(q, a.state_name(to_old[q]));
    return out;
}

namespace {

using PairSet = std::vector<std::pair<State, State>>; // sorted (anchor, current)

struct DetKey {
    std::uint32_t cls;
    PairSet pairs;
    bool operator==(const DetKey&) const = default;
};

struct DetKeyHash {
    std::size_t operator()(const DetKey& k) const
    {
        std::size_t h = k.cls * 0x9e3779b97f4a7c15ull;
        for (auto [x, y] : k.pairs) h = (h ^ ((static_cast<std::size_t>(x) << 32) | y)) * 0x100000001b3ull;
        return h;
    }
};

void normalize(PairSet& s)
{
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
}

// Largest relation q <= q' such that q' is final when q is, and every push
// or flush move from q (flush as top or as the state below the mark) is
// matched by a move from q' into a state that again dominates. A stack with
// pointwise dominating states accepts every continuation the smaller one
// does, so dominated pairs can be dropped from a determinized state.
std::vector<std::vector<bool>> simulation(const FloydAutomaton& a)
{
    const std::size_t n = a.num_states(), syms = a.alphabet().size();
    std::vector<std::vector<std::pair<State, State>>> as_top(n), as_below(n); // (partner, target)
    for (const auto& [key, targets] : a.flush_entries())
        for (State p : targets) {
            as_top[key.first].emplace_back(key.second, p);
            as_below[key.second].emplace_back(key.first, p);
        }
    for (auto* v : {&as_top, &as_below})
        for (auto& e : *v) std::sort(e.begin(), e.end());

    std::vector<std::vector<bool>> le(n, std::vector<bool>(n, true));
    for (State q = 0; q < n; ++q)
        for (State r = 0; r < n; ++r)
            if (a.is_final(q) && !a.is_final(r)) le[q][r] = false;

    // Every (partner, target) of q is matched by an entry of r with the same partner.
    auto matched = [&](const std::vector<std::pair<State, State>>& mine,
                       const std::vector<std::pair<State, State>>& theirs) {
        for (auto [partner, p] : mine) {
            auto it = std::lower_bound(theirs.begin(), theirs.end(), std::pair<State, State>{partner, 0});
            bool found = false;
            for (; it != theirs.end() && it->first == partner && !found; ++it) found = le[p][it->second];
            if (!found) return false;
        }
        return true;
    };
    for (bool changed = true; changed;) {
        changed = false;
        for (State q = 0; q < n; ++q)
            for (State r = 0; r < n; ++r) {
                if (q == r || !le[q][r]) continue;
                bool ok = matched(as_top[q], as_top[r]) && matched(as_below[q], as_below[r]);
                for (Symbol c = 0; ok && c < syms; ++c)
                    for (State p : a.push_targets(q, c)) {
                        auto theirs = a.push_targets(r, c);
                        if (std::none_of(theirs.begin(), theirs.end(), [&](State p2) { return le[p][p2]; })) {
                            ok = false;
                            break;
                        }
                    }
                if (!ok) {
                    le[q][r] = false;
                    changed = true;
                }
            }
    }
    return le;
}

// Drops (anchor, q) when the same anchor carries a q' dominating q. Among
// mutually dominating states the smallest index is kept.
void prune(PairSet& s, const std::vector<std::vector<bool>>& le)
{
    PairSet kept;
    for (std::size_t i = 0; i < s.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < s.size() && !dominated; ++j) {
            if (i == j || s[i].first != s[j].first) continue;
            const State q = s[i].second, r = s[j].second;
            dominated = le[q][r] && (!le[r][q] || r < q);
        }
        if (!dominated) kept.push_back(s[i]);
    }
    s = std::move(kept);
}

FloydAutomaton subset_construction(const FloydAutomaton& a, bool total)
{
    const auto le = simulation(a);
    const OpAlphabet& alpha = a.alphabet();
    const std::size_t n = alpha.size();
    const std::vector<std::uint32_t> cls = alpha.row_classes();
    const std::uint32_t sink_cls = std::numeric_limits<std::uint32_t>::max();
    std::vector<Symbol> rep(n + 1, kSharp);
    for (Symbol c = n; c-- > 0;) rep[cls[c]] = c;
    rep[cls[n]] = kSharp; // # has its own row, which may coincide with a symbol's

    std::unordered_map<DetKey, State, DetKeyHash> ids;
    std::vector<DetKey> keys;
    auto intern = [&](DetKey k) {
        auto [it, fresh] = ids.try_emplace(k, static_cast<State>(keys.size()));
        if (fresh) keys.push_back(std::move(k));
        return it->second;
    };
    auto class_prec = [&](std::uint32_t c, Symbol look) {
        // The representative row is identical for every member of the class.
        if (c == cls[n]) return alpha.prec(kSharp, look);
        return alpha.prec(rep[c], look);
    };

    PairSet start;
    for (State q : a.initial) start.emplace_back(q, q);
    normalize(start);
    prune(start, le);
    std::vector<State> init;
    if (!start.empty() || total) init.push_back(intern({start.empty() ? sink_cls : cls[n], start}));

    ExploreHooks hooks;
    hooks.push = [&](State id, Symbol c, std::vector<std::pair<State, PushKind>>& out) {
        const DetKey cur = keys[id];
        if (cur.cls == sink_cls) {
            out.emplace_back(id, detail::kPushOrMark);
            return;
        }
        const auto rel = class_prec(cur.cls, c);
        if (!rel || *rel == PrecRel::Takes) return;
        const bool mark = *rel == PrecRel::Yields;
        PairSet next;
        for (auto [anchor, q] : cur.pairs)
            for (State p : a.push_targets(q, c)) next.emplace_back(mark ? q : anchor, p);
        normalize(next);
        prune(next, le);
        if (next.empty()) {
            if (total) out.emplace_back(intern({sink_cls, {}}), mark ? detail::kMarkOnly : detail::kPushOnly);
            return;
        }
        out.emplace_back(intern({cls[c], std::move(next)}), mark ? detail::kMarkOnly : detail::kPushOnly);
    };
    hooks.flush = [&](State top, State below, std::vector<State>& out) {
        const DetKey t = keys[top];
        const DetKey b = keys[below];
        if (b.cls == sink_cls || t.cls == sink_cls) {
            if (total) out.push_back(intern({sink_cls, {}}));
            return;
        }
        PairSet next;
        for (auto [lower, p] : b.pairs) {
            auto it = std::lower_bound(t.pairs.begin(), t.pairs.end(), std::pair<State, State>{p, 0});
            for (; it != t.pairs.end() && it->first == p; ++it)
                for (State q : a.flush_targets(it->second, p)) next.emplace_back(lower, q);
        }
        normalize(next);
        prune(next, le);
        if (next.empty()) {
            if (total) out.push_back(intern({sink_cls, {}}));
            return;
        }
        out.push_back(intern({b.cls, std::move(next)}));
    };

    Exploration ex = detail::explore(init, alpha, hooks);
    std::vector<bool> final(ex.num_states, false);
    for (State q = 0; q < ex.num_states; ++q) {
        bool acc = false;
        for (auto [anchor, cur] : keys[q].pairs) acc = acc || a.is_final(cur);
        final[q] = total ? !acc : acc;
    }
    return build(a.alphabet_ptr(), ex, init, final);
}

} // namespace

FloydAutomaton determinize(const FloydAutomaton& a)
{
    if (is_deterministic(a) && a.initial.size() == 1) return trim(a);
    FloydAutomaton out = subset_construction(a, false);
    if (out.num_states() == 0) return empty_automaton(a.alphabet_ptr());
    return out;
}

namespace {

// Deterministic automaton with a rejecting sink filling every missing move
// that can occur on a reachable stack.
FloydAutomaton complete(const FloydAutomaton& a)
{
    const State sink = static_cast<State>(a.num_states());
    std::vector<State> to_new(a.num_states() + 1, kSharp);
    std::vector<State> to_old;
    auto intern = [&](State q) {
        if (to_new[q] == kSharp) {
            to_new[q] = static_cast<State>(to_old.size());
            to_old.push_back(q);
        }
        return to_new[q];
    };
    std::vector<State> init;
    for (State q : a.initial) init.push_back(intern(q));
    if (init.empty()) init.push_back(intern(sink));

    ExploreHooks hooks;
    hooks.push = [&](State q, Symbol c, std::vector<std::pair<State, PushKind>>& out) {
        const State old = to_old[q];
        const auto t = old == sink ? std::span<const State>{} : a.push_targets(old, c);
        out.emplace_back(intern(t.empty() ? sink : t.front()), detail::kPushOrMark);
    };
    hooks.flush = [&](State t, State b, std::vector<State>& out) {
        const State ot = to_old[t], ob = to_old[b];
        const auto f = ot == sink || ob == sink ? std::span<const State>{} : a.flush_targets(ot, ob);
        out.push_back(intern(f.empty() ? sink : f.front()));
    };
    Exploration ex = detail::explore(init, a.alphabet(), hooks);
    std::vector<bool> final(ex.num_states);
    for (State q = 0; q < ex.num_states; ++q) final[q] = to_old[q] != sink && a.is_final(to_old[q]);
    return build(a.alphabet_ptr(), ex, init, final);
}

} // namespace

FloydAutomaton complement(const FloydAutomaton& a)
{
    if (!is_deterministic(a)) return subset_construction(a, true);
    // Every compatible word has exactly one run in the completed automaton.
    FloydAutomaton out = complete(a);
    StateSet final;
    for (State q = 0; q < out.num_states(); ++q)
        if (!out.is_final(q)) final.insert(q);
    out.final = std::move(final);
    return out;
}

namespace {

// Row classes of the stack symbols that may carry each state; bit k stands
// for class k. Over-approximates, so a push outside it can never fire.
std::vector<std::uint64_t> carried_classes(const FloydAutomaton& a, const std::vector<std::uint32_t>& cls)
{
    const OpAlphabet& alpha = a.alphabet();
    const std::size_t m = alpha.size();
    std::vector<std::uint64_t> carried(a.num_states(), 0);
    for (State q : a.initial) carried[q] |= std::uint64_t{1} << cls[m];
    std::vector<Symbol> rep(64, kSharp);
    for (Symbol c = m; c-- > 0;) rep[cls[c]] = c;
    auto pushable = [&](std::uint32_t k, Symbol c) {
        const auto rel = k == cls[m] ? alpha.prec(kSharp, c) : alpha.prec(rep[k], c);
        return rel && *rel != PrecRel::Takes;
    };
    const auto flushes = a.flush_entries();
    for (bool changed = true; changed;) {
        changed = false;
        auto add = [&](State q, std::uint64_t bits) {
            if ((carried[q] | bits) != carried[q]) {
                carried[q] |= bits;
                changed = true;
            }
        };
        for (State p = 0; p < a.num_states(); ++p) {
            for (Symbol c = 0; c < m; ++c) {
                bool live = false;
                for (std::uint32_t k = 0; k < 64 && !live; ++k) live = ((carried[p] >> k) & 1u) && pushable(k, c);
                if (!live) continue;
                for (State q : a.push_targets(p, c)) add(q, std::uint64_t{1} << cls[c]);
            }
        }
        for (const auto& [key, targets] : flushes)
            for (State q : targets) add(q, carried[key.second]);
    }
    return carried;
}

} // namespace

FloydAutomaton minimize(const FloydAutomaton& input)
{
    if (!is_deterministic(input) || input.initial.size() != 1) throw Error("minimize expects a deterministic automaton");
    const FloydAutomaton a = complete(input);
    const std::size_t n = a.num_states();
    const OpAlphabet& alpha = a.alphabet();
    const std::size_t m = alpha.size();
    const std::vector<std::uint32_t> cls = alpha.row_classes();
    if (*std::max_element(cls.begin(), cls.end()) >= 64) return a;
    const std::vector<std::uint64_t> carried = carried_classes(a, cls);

    // Moves each state can actually make: (side, key) -> target, where side
    // 0 keys a flush by the state below, 1 a flush by the state on top and 2
    // a push by its symbol.
    struct Move {
        int side;
        std::uint32_t key;
        State target;
    };
    std::vector<std::vector<Move>> moves(n);
    std::vector<Symbol> rep(64, kSharp);
    for (Symbol c = m; c-- > 0;) rep[cls[c]] = c;
    for (State q = 0; q < n; ++q)
        for (Symbol c = 0; c < m; ++c) {
            bool live = false;
            for (std::uint32_t k = 0; k < 64 && !live; ++k) {
                if (!((carried[q] >> k) & 1u)) continue;
                const auto rel = k == cls[m] ? alpha.prec(kSharp, c) : alpha.prec(rep[k], c);
                live = rel && *rel != PrecRel::Takes;
            }
            // complete() only adds moves for reachable contexts; the rest are don't-cares.
            const auto targets = a.push_targets(q, c);
            if (live && !targets.empty()) moves[q].push_back({2, c, targets.front()});
        }
    for (const auto& [key, targets] : a.flush_entries()) {
        if (targets.empty()) continue;
        moves[key.first].push_back({0, key.second, targets.front()});
        moves[key.second].push_back({1, key.first, targets.front()});
    }

    std::vector<std::uint32_t> block(n);
    for (State q = 0; q < n; ++q) block[q] = a.is_final(q) ? 1 : 0;
    std::size_t num_blocks = 2;

    // Keys whose moves reach several blocks are marked kClash and ignored
    // while grouping; they are resolved by splitting the other side.
    constexpr std::uint32_t kClash = std::numeric_limits<std::uint32_t>::max();
    using MoveMap = std::map<std::pair<int, std::uint32_t>, std::uint32_t>;
    auto key_of = [&](const Move& mv) { return mv.side == 2 ? mv.key : block[mv.key]; };
    auto own_map = [&](State q) {
        MoveMap own;
        for (const Move& mv : moves[q]) {
            auto [it, ins] = own.try_emplace({mv.side, key_of(mv)}, block[mv.target]);
            if (!ins && it->second != block[mv.target]) it->second = kClash;
        }
        return own;
    };
    auto fits = [&](const MoveMap& group, const MoveMap& own) {
        for (const auto& [k, v] : own) {
            if (v == kClash) continue;
            auto it = group.find(k);
            if (it != group.end() && it->second != v) return false;
        }
        return true;
    };
    while (true) {
        std::vector<std::vector<State>> members(num_blocks);
        for (State q = 0; q < n; ++q) members[block[q]].push_back(q);
        std::vector<std::uint32_t> next(n);
        std::uint32_t fresh = 0;
        for (const auto& mem : members) {
            // Greedy: each state joins the first group it agrees with.
            std::vector<std::pair<MoveMap, std::uint32_t>> groups;
            for (State q : mem) {
                const MoveMap own = own_map(q);
                std::pair<MoveMap, std::uint32_t>* home = nullptr;
                for (auto& g : groups)
                    if (fits(g.first, own)) {
                        home = &g;
                        break;
                    }
                if (home == nullptr) {
                    groups.emplace_back(MoveMap{}, fresh++);
                    home = &groups.back();
                }
                for (const auto& [k, v] : own)
                    if (v != kClash) home->first.emplace(k, v);
                next[q] = home->second;
            }
        }
        const bool changed = fresh != num_blocks;
        num_blocks = fresh;
        block = std::move(next);
        if (changed) continue;

        // Stable: split the block of the partner states behind one clash.
        bool split = false;
        for (State q = 0; q < n && !split; ++q) {
            const MoveMap own = own_map(q);
            for (const auto& [k, v] : own) {
                if (v != kClash || k.first == 2) continue;
                std::map<std::uint32_t, std::uint32_t> renumber;
                for (const Move& mv : moves[q]) {
                    if (mv.side != k.first || block[mv.key] != k.second) continue;
                    auto [it, ins] = renumber.try_emplace(block[mv.target], 0);
                    if (ins) it->second = renumber.size() == 1 ? k.second : static_cast<std::uint32_t>(num_blocks++);
                    block[mv.key] = it->second;
                }
                split = true;
                break;
            }
        }
        if (!split) break;
    }

    FloydAutomaton out(a.alphabet_ptr(), num_blocks);
    for (State q = n; q-- > 0;) out.set_state_name(block[q], a.state_name(q));
    for (State q = 0; q < n; ++q) {
        if (a.is_final(q)) out.final.insert(block[q]);
        for (const Move& mv : moves[q]) {
            if (mv.side == 2) out.add_push(block[q], mv.key, block[mv.target]);
            else if (mv.side == 0) out.add_flush(block[q], block[mv.key], block[mv.target]);
        }
    }
    out.initial.insert(block[*a.initial.begin()]);
    if (!is_deterministic(out)) throw Error("internal error: minimized automaton is nondeterministic");
    return out;
}

FloydAutomaton reduce(const FloydAutomaton& a)
{
    const std::size_t n = a.num_states();
    if (n == 0) return a;
    const std::size_t m = a.alphabet().size();
    // Flush entries seen from each state, as top and as the state below.
    std::vector<std::vector<std::pair<State, std::span<const State>>>> as_top(n), as_below(n);
    for (const auto& [key, targets] : a.flush_entries()) {
        as_top[key.first].emplace_back(key.second, a.flush_targets(key.first, key.second));
        as_below[key.second].emplace_back(key.first, a.flush_targets(key.first, key.second));
    }

    std::vector<std::uint32_t> block(n);
    for (State q = 0; q < n; ++q) block[q] = a.is_final(q) ? 1 : 0;
    std::size_t num_blocks = 0;
    std::vector<std::uint32_t> sig;
    auto blocks_of = [&](std::span<const State> targets) {
        std::vector<std::uint32_t> bs;
        for (State p : targets) bs.push_back(block[p]);
        std::sort(bs.begin(), bs.end());
        bs.erase(std::unique(bs.begin(), bs.end()), bs.end());
        sig.push_back(static_cast<std::uint32_t>(bs.size()));
        sig.insert(sig.end(), bs.begin(), bs.end());
    };
    while (true) {
        std::map<std::vector<std::uint32_t>, std::uint32_t> ids;
        std::vector<std::uint32_t> next(n);
        for (State q = 0; q < n; ++q) {
            sig.clear();
            sig.push_back(block[q]);
            for (Symbol c = 0; c < m; ++c) blocks_of(a.push_targets(q, c));
            sig.push_back(kSharp);
            for (const auto& [r, t] : as_top[q]) {
                sig.push_back(r);
                blocks_of(t);
            }
            sig.push_back(kSharp);
            for (const auto& [r, t] : as_below[q]) {
                sig.push_back(r);
                blocks_of(t);
            }
            next[q] = ids.try_emplace(sig, static_cast<std::uint32_t>(ids.size())).first->second;
        }
        const bool stable = ids.size() == num_blocks;
        num_blocks = ids.size();
        block = std::move(next);
        if (stable) break;
    }
    if (num_blocks == n) return a;

    FloydAutomaton out(a.alphabet_ptr(), num_blocks);
    std::vector<bool> named(num_blocks, false);
    for (State q = 0; q < n; ++q) {
        const State b = block[q];
        if (!named[b]) {
            out.set_state_name(b, a.state_name(q));
            named[b] = true;
        }
        if (a.is_final(q)) out.final.insert(b);
        if (a.initial.count(q)) out.initial.insert(b);
        for (Symbol c = 0; c < m; ++c)
            for (State p : a.push_targets(q, c)) out.add_push(b, c, block[p]);
    }
    for (const auto& [key, targets] : a.flush_entries())
        for (State p : targets) out.add_flush(block[key.first], block[key.second], block[p]);
    return out;
}

FloydAutomaton unite(const FloydAutomaton& a, const FloydAutomaton& b)
{
    require_same_alphabet(a, b);
    const State off = static_cast<State>(a.num_states());
    FloydAutomaton out(a.alphabet_ptr(), a.num_states() + b.num_states());
    const std::size_t n = a.alphabet().size();
    for (State q = 0; q < a.num_states(); ++q)
        for (Symbol c = 0; c < n; ++c)
            for (State p : a.push_targets(q, c)) out.add_push(q, c, p);
    for (State q = 0; q < b.num_states(); ++q)
        for (Symbol c = 0; c < n; ++c)
            for (State p : b.push_targets(q, c)) out.add_push(q + off, c, p + off);
    for (const auto& [k, v] : a.flush_entries())
        for (State p : v) out.add_flush(k.first, k.second, p);
    for (const auto& [k, v] : b.flush_entries())
        for (State p : v) out.add_flush(k.first + off, k.second + off, p + off);
    for (State q : a.initial) out.initial.insert(q);
    for (State q : a.final) out.final.insert(q);
    for (State q : b.initial) out.initial.insert(q + off);
    for (State q : b.final) out.final.insert(q + off);
    return out;
}

FloydAutomaton intersect(const FloydAutomaton& a, const FloydAutomaton& b)
{
    require_same_alphabet(a, b);
    std::unordered_map<std::pair<State, State>, State, PairHash> ids;
    std::vector<std::pair<State, State>> keys;
    auto intern = [&](State x, State y) {
        auto [it, fresh] = ids.try_emplace({x, y}, static_cast<State>(keys.size()));
        if (fresh) keys.emplace_back(x, y);
        return it->second;
    };
    std::vector<State> init;
    for (State x : a.initial)
        for (State y : b.initial) init.push_back(intern(x, y));

    ExploreHooks hooks;
    hooks.push = [&](State id, Symbol c, std::vector<std::pair<State, PushKind>>& out) {
        const auto [x, y] = keys[id];
        for (State x2 : a.push_targets(x, c))
            for (State y2 : b.push_targets(y, c)) out.emplace_back(intern(x2, y2), detail::kPushOrMark);
    };
    hooks.flush = [&](State top, State below, std::vector<State>& out) {
        const auto [tx, ty] = keys[top];
        const auto [bx, by] = keys[below];
        for (State x : a.flush_targets(tx, bx))
            for (State y : b.flush_targets(ty, by)) out.push_back(intern(x, y));
    };
    Exploration ex = detail::explore(init, a.alphabet(), hooks);
    std::vector<bool> final(ex.num_states);
    for (State q = 0; q < ex.num_states; ++q) final[q] = a.is_final(keys[q].first) && b.is_final(keys[q].second);
    if (ex.num_states == 0) return empty_automaton(a.alphabet_ptr());
    return build(a.alphabet_ptr(), ex, init, final);
}

namespace {
const Lifting& lifting_of(const FloydAutomaton& a)
{
    const Lifting* l = a.alphabet().lifting();
    if (l == nullptr) throw Error("automaton is not over a lifted alphabet");
    return *l;
}
} // namespace

FloydAutomaton project(const FloydAutomaton& a, std::size_t component)
{
    const Lifting& l = lifting_of(a);
    const std::size_t n = l.base->size();
    if (component <= n) throw Error("component " + std::to_string(component) + " encodes a base symbol and cannot be erased");
    if (component > n + l.width()) throw Error("component " + std::to_string(component) + " out of range");
    const std::size_t k = component - n - 1;

    std::vector<std::string> vars = l.vars;
    vars.erase(vars.begin() + static_cast<std::ptrdiff_t>(k));
    AlphabetPtr alpha = lift_alphabet(l.base, std::move(vars), l.boundary);

    FloydAutomaton out(alpha, a.num_states());
    const std::uint32_t low_mask = (1u << k) - 1u;
    for (Symbol c = 0; c < a.alphabet().size(); ++c) {
        const std::uint32_t letter = lifted_letter(a.alphabet(), c);
        const std::uint32_t bits = lifted_bits(a.alphabet(), c);
        const std::uint32_t kept = (bits & low_mask) | ((bits >> (k + 1)) << k);
        const Symbol d = lifted_symbol(*alpha, letter, kept);
        for (State q = 0; q < a.num_states(); ++q)
            for (State p : a.push_targets(q, c)) out.add_push(q, d, p);
    }
    for (const auto& [key, v] : a.flush_entries())
        for (State p : v) out.add_flush(key.first, key.second, p);
    out.initial = a.initial;
    out.final = a.final;
    for (State q = 0; q < a.num_states(); ++q) out.set_state_name(q, a.state_name(q));
    return out;
}

FloydAutomaton project_var(const FloydAutomaton& a, std::string_view var)
{
    const Lifting& l = lifting_of(a);
    auto it = std::find(l.vars.begin(), l.vars.end(), var);
    if (it == l.vars.end()) throw Error("no component named '" + std::string(var) + "'");
    return project(a, l.base->size() + static_cast<std::size_t>(it - l.vars.begin()) + 1);
}

FloydAutomaton widen(const FloydAutomaton& a, AlphabetPtr wider)
{
    const Lifting& from = lifting_of(a);
    const Lifting* to = wider->lifting();
    if (to == nullptr || to->base != from.base || to->boundary != from.boundary)
        throw Error("cannot widen to an unrelated alphabet");
    std::vector<std::size_t> where(from.width());
    for (std::size_t k = 0; k < from.width(); ++k) {
        auto it = std::find(to->vars.begin(), to->vars.end(), from.vars[k]);
        if (it == to->vars.end()) throw Error("widened alphabet lacks component '" + from.vars[k] + "'");
        where[k] = static_cast<std::size_t>(it - to->vars.begin());
    }
    FloydAutomaton out(wider, a.num_states());
    for (Symbol c = 0; c < wider->size(); ++c) {
        const std::uint32_t bits = lifted_bits(*wider, c);
        std::uint32_t old = 0;
        for (std::size_t k = 0; k < where.size(); ++k) old |= ((bits >> where[k]) & 1u) << k;
        const Symbol d = lifted_symbol(a.alphabet(), lifted_letter(*wider, c), old);
        for (State q = 0; q < a.num_states(); ++q)
            for (State p : a.push_targets(q, d)) out.add_push(q, c, p);
    }
    for (const auto& [key, v] : a.flush_entries())
        for (State p : v) out.add_flush(key.first, key.second, p);
    out.initial = a.initial;
    out.final = a.final;
    for (State q = 0; q < a.num_states(); ++q) out.set_state_name(q, a.state_name(q));
    return out;
}

FloydAutomaton lift_fsa(AlphabetPtr alpha, const FiniteAutomaton& fsa)
{
    FloydAutomaton out(alpha, fsa.num_states);
    for (const auto& [key, targets] : fsa.delta)
        for (State p : targets) out.add_push(key.first, key.second, p);
    for (State q = 0; q < fsa.num_states; ++q)
        for (State p = 0; p < fsa.num_states; ++p) out.add_flush(q, p, q);
    out.initial = fsa.initial;
    out.final = fsa.final;
    return out;
}

FloydAutomaton strip_boundaries(const FloydAutomaton& a)
{
    const Lifting& l = lifting_of(a);
    if (!l.boundary || l.width() != 0) throw Error("expected a boundary alphabet with no variables");
    const Symbol left = l.left_letter();
    const Symbol right = l.right_letter();
    const std::size_t qn = a.num_states();
    const std::size_t n = l.base->size();

    // State (i, q): the run started in initial state i and currently holds q.
    std::vector<State> starts(a.initial.begin(), a.initial.end());
    FloydAutomaton out(l.base, starts.size() * qn);
    for (std::size_t i = 0; i < starts.size(); ++i) {
        const State off = static_cast<State>(i * qn);
        for (State q = 0; q < qn; ++q) {
            out.set_state_name(off + q, a.state_name(starts[i]) + "_" + a.state_name(q));
            for (Symbol c = 0; c < n; ++c)
                for (State p : a.push_targets(q, c)) out.add_push(off + q, c, off + p);
        }
        for (const auto& [key, v] : a.flush_entries())
            for (State p : v) out.add_flush(off + key.first, off + key.second, off + p);
        for (State p : a.push_targets(starts[i], left)) out.initial.insert(off + p);
        for (State p = 0; p < qn; ++p) {
            bool acc = false;
            for (State r : a.push_targets(p, right))
                for (State f : a.flush_targets(r, starts[i])) acc = acc || a.is_final(f);
            if (acc) out.final.insert(off + p);
        }
    }
    return trim(out);
}

FloydAutomaton reindex_initial_first(const FloydAutomaton& a)
{
    if (a.initial.size() != 1) throw Error("expected exactly one initial state");
    const State init = *a.initial.begin();
    auto map = [&](State q) -> State {
        if (q == init) return 0;
        if (q == 0) return init;
        return q;
    };
    FloydAutomaton out(a.alphabet_ptr(), a.num_states());
    for (State q = 0; q < a.num_states(); ++q) {
        out.set_state_name(map(q), a.state_name(q));
        for (Symbol c = 0; c < a.alphabet().size(); ++c)
            for (State p : a.push_targets(q, c)) out.add_push(map(q), c, map(p));
    }
    for (const auto& [key, v] : a.flush_entries())
        for (State p : v) out.add_flush(map(key.first), map(key.second), map(p));
    out.initial.insert(0);
    for (State q : a.final) out.final.insert(map(q));
    return out;
}

} // namespace floyd
