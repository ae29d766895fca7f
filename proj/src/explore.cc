#include "explore.hh"

#include <algorithm>
#include <deque>
#include <limits>
#include <unordered_map>
#include <unordered_set>

namespace floyd::detail {

namespace {

constexpr State kBottom = std::numeric_limits<State>::max();

std::uint64_t key(State a, State b) { return (static_cast<std::uint64_t>(a) << 32) | b; }

} // namespace

Exploration explore(const std::vector<State>& initial, const OpAlphabet& alpha, const ExploreHooks& hooks)
{
    // Nodes pair a state with the row class of the stack symbol carrying it,
    // which fixes whether the next symbol is pushed or marked.
    const std::size_t n = alpha.size();
    const std::vector<std::uint32_t> cls = alpha.row_classes();
    const std::uint32_t classes = *std::max_element(cls.begin(), cls.end()) + 1;
    std::vector<Symbol> rep(classes, kSharp);
    for (Symbol c = static_cast<Symbol>(n); c-- > 0;) rep[cls[c]] = c;
    auto prec = [&](std::uint32_t k, Symbol c) { return rep[k] == kSharp ? alpha.prec(kSharp, c) : alpha.prec(rep[k], c); };
    std::vector<std::uint8_t> kind_of(classes * n, 0);
    std::vector<bool> can_flush(classes, false);
    for (std::uint32_t k = 0; k < classes; ++k) {
        for (Symbol c = 0; c < n; ++c) {
            const auto rel = prec(k, c);
            if (rel == PrecRel::Yields) kind_of[k * n + c] = kMarkOnly;
            if (rel == PrecRel::Equal) kind_of[k * n + c] = kPushOnly;
            can_flush[k] = can_flush[k] || rel == PrecRel::Takes;
        }
        const auto end = rep[k] == kSharp ? alpha.prec(kSharp, kSharp) : alpha.prec(rep[k], kSharp);
        can_flush[k] = can_flush[k] || end == PrecRel::Takes;
    }
    auto node = [&](State q, std::uint32_t k) { return q * classes + k; };

    Exploration out;
    std::unordered_set<std::uint64_t> relation;
    std::deque<std::pair<State, State>> work;
    std::vector<std::vector<State>> anchors_of; // anchors_of[p]: a with (a, p)
    std::vector<std::vector<State>> tops_over;  // tops_over[p]: t with (p, t)
    std::unordered_map<std::uint64_t, std::vector<std::pair<State, PushKind>>> push_cache;
    std::unordered_map<std::uint64_t, std::vector<State>> flush_cache;

    auto grow = [&](State q) { out.num_states = std::max(out.num_states, static_cast<std::size_t>(q) + 1); };
    auto add = [&](State a, State t) {
        if (!relation.insert(key(a, t)).second) return;
        const std::size_t need = std::max<std::size_t>(t, a == kBottom ? 0 : a) + 1;
        if (anchors_of.size() < need) {
            anchors_of.resize(need);
            tops_over.resize(need);
        }
        work.emplace_back(a, t);
        anchors_of[t].push_back(a);
        if (a != kBottom) tops_over[a].push_back(t);
    };
    auto push_of = [&](State q, Symbol c) -> const std::vector<std::pair<State, PushKind>>& {
        auto [it, fresh] = push_cache.try_emplace(key(q, c));
        if (fresh) {
            hooks.push(q, c, it->second);
            for (auto [p, kind] : it->second) {
                grow(p);
                out.pushes.emplace_back(q, c, p);
            }
        }
        return it->second;
    };
    auto flush_of = [&](State top, State below) -> const std::vector<State>& {
        auto [it, fresh] = flush_cache.try_emplace(key(top, below));
        if (fresh) {
            hooks.flush(top, below, it->second);
            for (State q : it->second) {
                grow(q);
                out.flushes.emplace_back(top, below, q);
            }
        }
        return it->second;
    };

    for (State q : initial) {
        grow(q);
        add(kBottom, node(q, cls[n]));
    }

    while (!work.empty()) {
        auto [a, t] = work.front();
        work.pop_front();
        const State ts = t / classes;
        const std::uint32_t tk = t % classes;

        for (Symbol c = 0; c < n; ++c) {
            const std::uint8_t allowed = kind_of[tk * n + c];
            if (!allowed) continue;
            // Copy: the callbacks may grow the caches.
            const auto succ = push_of(ts, c);
            for (auto [q, kind] : succ) {
                if (!(kind & allowed)) continue;
                if (allowed == kPushOnly) add(a, node(q, cls[c]));
                else add(t, node(q, cls[c]));
            }
        }

        if (a != kBottom && can_flush[tk]) {
            // t sits above a marked item whose predecessor is a.
            const std::uint32_t ak = a % classes;
            const std::vector<State> targets = flush_of(ts, a / classes);
            const std::vector<State> lower = anchors_of[a];
            for (State b : lower)
                for (State q : targets) add(b, node(q, ak));
        }
        // (a, t) as the pair below a marked item: combine with tops above t.
        const std::vector<State> uppers = t < tops_over.size() ? tops_over[t] : std::vector<State>{};
        for (State u : uppers) {
            if (!can_flush[u % classes]) continue;
            const std::vector<State> targets = flush_of(u / classes, ts);
            for (State q : targets) add(a, node(q, tk));
        }
    }
    return out;
}

} // namespace floyd::detail
