#include "oracles.hh"

#include <functional>
#include <stdexcept>

namespace oracle {

using floyd::kSharp;
using floyd::PrecRel;

Chains::Chains(const OpAlphabet& alpha, const Word& s) : alpha_(alpha)
{
    t_.push_back(kSharp);
    t_.insert(t_.end(), s.begin(), s.end());
    t_.push_back(kSharp);
}

std::optional<PrecRel> Chains::rel(std::size_t u, std::size_t v) const
{
    return alpha_.prec(t_[u], t_[v]);
}

std::optional<std::vector<std::size_t>> Chains::body(std::size_t u, std::size_t v)
{
    if (v < u + 2) return std::nullopt;
    // Depth-first over body sequences u < p1 < ... < pm < v.
    std::vector<std::size_t> seq;
    std::function<bool(std::size_t)> extend = [&](std::size_t last) -> bool {
        if (rel(last, v) == PrecRel::Takes && gap(last, v)) return true;
        for (std::size_t p = last + 1; p < v; ++p) {
            if (rel(last, p) != PrecRel::Equal || !gap(last, p)) continue;
            seq.push_back(p);
            if (extend(p)) return true;
            seq.pop_back();
        }
        return false;
    };
    for (std::size_t p = u + 1; p < v; ++p) {
        if (rel(u, p) != PrecRel::Yields || !gap(u, p)) continue;
        seq = {p};
        if (extend(p)) return seq;
    }
    return std::nullopt;
}

bool Chains::chain(std::size_t u, std::size_t v)
{
    auto it = memo_.find({u, v});
    if (it != memo_.end()) return it->second;
    const bool r = body(u, v).has_value();
    memo_[{u, v}] = r;
    return r;
}

bool Chains::compatible()
{
    return t_.size() == 2 || chain(0, t_.size() - 1);
}

void Chains::collect(std::size_t u, std::size_t v, std::set<std::pair<std::size_t, std::size_t>>& out)
{
    auto b = body(u, v);
    if (!b) throw std::logic_error("not a chain");
    out.insert({u, v});
    std::size_t last = u;
    b->push_back(v);
    for (std::size_t p : *b) {
        if (p != last + 1) collect(last, p, out);
        last = p;
    }
}

std::set<std::pair<std::size_t, std::size_t>> Chains::arrows()
{
    std::set<std::pair<std::size_t, std::size_t>> out;
    if (t_.size() > 2 && compatible()) collect(0, t_.size() - 1, out);
    return out;
}

namespace {

struct Item {
    Symbol sym;
    State state;
    bool marked;
    std::size_t pos;
};

bool search(const floyd::FloydAutomaton& a, const Word& s, std::vector<Item>& stack, std::size_t cur,
            std::vector<RefMove>& moves)
{
    const Symbol look = cur < s.size() ? s[cur] : kSharp;
    const Item top = stack.back();
    if (look == kSharp && stack.size() == 1) return a.is_final(top.state);
    const auto r = a.alphabet().prec(top.sym, look);
    if (!r) return false;
    if (*r != PrecRel::Takes) {
        const bool mark = *r == PrecRel::Yields;
        for (State p : a.push_targets(top.state, look)) {
            stack.push_back({look, p, mark, cur + 1});
            moves.push_back({mark ? RefMove::Mark : RefMove::Push, p, cur + 1});
            if (search(a, s, stack, cur + 1, moves)) return true;
            moves.pop_back();
            stack.pop_back();
        }
        return false;
    }
    std::size_t k = stack.size();
    while (k-- > 0 && !stack[k].marked) {}
    if (k == static_cast<std::size_t>(-1) || k == 0) return false;
    const std::vector<Item> saved(stack.begin() + static_cast<std::ptrdiff_t>(k), stack.end());
    const Item below = stack[k - 1];
    stack.resize(k);
    for (State q : a.flush_targets(top.state, below.state)) {
        stack.back().state = q;
        moves.push_back({RefMove::Flush, q, 0, below.pos, cur + 1});
        if (search(a, s, stack, cur, moves)) return true;
        moves.pop_back();
    }
    stack.back() = below;
    stack.insert(stack.end(), saved.begin(), saved.end());
    return false;
}

} // namespace

std::optional<std::vector<RefMove>> accepting_run(const floyd::FloydAutomaton& a, const Word& s)
{
    for (State q0 : a.initial) {
        std::vector<Item> stack{{kSharp, q0, false, 0}};
        std::vector<RefMove> moves;
        if (search(a, s, stack, 0, moves)) return moves;
    }
    return std::nullopt;
}

bool accepts(const floyd::FloydAutomaton& a, const Word& s)
{
    return accepting_run(a, s).has_value();
}

Witness witness_from_run(const floyd::FloydAutomaton& a, const Word& s)
{
    auto run = accepting_run(a, s);
    if (!run) throw std::logic_error("rejected");
    const std::size_t n = a.num_states();
    Witness w{std::vector<std::set<std::size_t>>(n), std::vector<std::set<std::size_t>>(n),
              std::vector<std::set<std::size_t>>(n), s.size()};
    w.P[*a.initial.begin()].insert(0);
    for (const RefMove& m : *run) {
        if (m.kind == RefMove::Flush) {
            w.M[m.state].insert(m.left);
            w.F[m.state].insert(m.right - 1);
        } else {
            w.P[m.state].insert(m.consumed);
        }
    }
    return w;
}

Word lifted_word(const OpAlphabet& lifted, const Word& s, const std::vector<std::uint64_t>& sets)
{
    const floyd::Lifting& l = *lifted.lifting();
    const std::uint32_t span = 1u << l.width();
    auto bits_at = [&](std::size_t p) {
        std::uint32_t b = 0;
        for (std::size_t k = 0; k < sets.size(); ++k)
            if ((sets[k] >> p) & 1u) b |= 1u << k;
        return b;
    };
    Word out;
    out.push_back(static_cast<Symbol>(l.left_letter() * span + bits_at(0)));
    for (std::size_t i = 0; i < s.size(); ++i) out.push_back(static_cast<Symbol>(s[i] * span + bits_at(i + 1)));
    out.push_back(static_cast<Symbol>(l.right_letter() * span + bits_at(s.size() + 1)));
    return out;
}

std::vector<Word> all_words(const OpAlphabet& alpha, std::size_t maxlen)
{
    std::vector<Word> out{{}};
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i].size() == maxlen) continue;
        for (Symbol c = 0; c < alpha.size(); ++c) {
            Word w = out[i];
            w.push_back(c);
            out.push_back(std::move(w));
        }
    }
    return out;
}

} // namespace oracle
