#include "floyd/supports.hh"

#include <map>

namespace floyd {

namespace {

using Table = std::map<State, std::shared_ptr<const Support>>; // exit -> witness

// State of the left context when the chain closes: a leading nested chain
// flushes onto the same context and replaces its state.
State anchor_of(const Support& sup)
{
    if (!sup.body.empty() && sup.body.front().kind == Support::Element::Kind::Nested) return sup.body.front().state;
    return sup.entry;
}

Table chain_supports(const FloydAutomaton& a, const ParseTree& node, State entry)
{
    // Partial traversals keyed by (current state, left context state).
    using Key = std::pair<State, State>;
    std::map<Key, std::vector<Support::Element>> partial{{{entry, entry}, {}}};
    for (std::size_t i = 0; i < node.children.size(); ++i) {
        const ParseTree& child = node.children[i];
        std::map<Key, std::vector<Support::Element>> next;
        for (const auto& [key, body] : partial) {
            const auto [cur, anchor] = key;
            if (child.kind == ParseTree::Kind::Leaf) {
                for (State p : a.push_targets(cur, child.symbol)) {
                    if (next.count({p, anchor})) continue;
                    auto extended = body;
                    extended.push_back({Support::Element::Kind::Symbol, child.symbol, child.position, p, nullptr});
                    next.emplace(Key{p, anchor}, std::move(extended));
                }
            } else {
                for (const auto& [out, sub] : chain_supports(a, child, cur)) {
                    const Key k{out, i == 0 ? out : anchor};
                    if (next.count(k)) continue;
                    auto extended = body;
                    extended.push_back({Support::Element::Kind::Nested, kSharp, 0, out, sub});
                    next.emplace(k, std::move(extended));
                }
            }
        }
        partial = std::move(next);
    }
    Table out;
    for (const auto& [key, body] : partial) {
        for (State q : a.flush_targets(key.first, key.second)) {
            if (out.count(q)) continue;
            auto sup = std::make_shared<Support>();
            sup->chain = node.span;
            sup->entry = entry;
            sup->exit = q;
            sup->body = body;
            out.emplace(q, std::move(sup));
        }
    }
    return out;
}

void format(const FloydAutomaton& a, const Support& sup, std::string& out)
{
    out += a.state_name(sup.entry);
    for (const auto& el : sup.body) {
        if (el.kind == Support::Element::Kind::Symbol) {
            out += " -" + a.alphabet().name(el.symbol) + "-> " + a.state_name(el.state);
        } else {
            out += " [";
            format(a, *el.nested, out);
            out += "]";
        }
    }
    out += " =" + a.state_name(anchor_of(sup)) + "=> " + a.state_name(sup.exit);
}

} // namespace

std::vector<Support> supports(const FloydAutomaton& a, const Word& s)
{
    std::vector<Support> out;
    if (s.empty()) {
        for (State q = 0; q < a.num_states(); ++q) {
            Support sup;
            sup.entry = q;
            sup.exit = q;
            out.push_back(std::move(sup));
        }
        return out;
    }
    const ParseTree tree = parse_tree(a.alphabet(), s);
    for (State q = 0; q < a.num_states(); ++q)
        for (const auto& [exit, sup] : chain_supports(a, tree, q)) out.push_back(*sup);
    return out;
}

std::string format_support(const FloydAutomaton& a, const Support& sup)
{
    std::string out;
    format(a, sup, out);
    return out;
}

} // namespace floyd
