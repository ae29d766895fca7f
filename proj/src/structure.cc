#include "floyd/structure.hh"

#include <algorithm>
#include <functional>
#include <queue>
#include <sstream>

#include "floyd/error.hh"

namespace floyd {

namespace {

// Strongly connected components of the "=" graph, by Kosaraju.
std::vector<std::vector<Symbol>> equal_components(const OpAlphabet& alpha,
                                                  const std::vector<std::vector<Symbol>>& succ)
{
    const std::size_t n = alpha.size();
    std::vector<std::vector<Symbol>> pred(n);
    for (Symbol a = 0; a < n; ++a)
        for (Symbol b : succ[a]) pred[b].push_back(a);

    std::vector<bool> seen(n, false);
    std::vector<Symbol> order;
    std::function<void(Symbol)> visit = [&](Symbol a) {
        seen[a] = true;
        for (Symbol b : succ[a])
            if (!seen[b]) visit(b);
        order.push_back(a);
    };
    for (Symbol a = 0; a < n; ++a)
        if (!seen[a]) visit(a);

    std::vector<int> comp(n, -1);
    std::vector<std::vector<Symbol>> comps;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if (comp[*it] >= 0) continue;
        comps.emplace_back();
        std::vector<Symbol> todo{*it};
        comp[*it] = static_cast<int>(comps.size() - 1);
        while (!todo.empty()) {
            Symbol a = todo.back();
            todo.pop_back();
            comps.back().push_back(a);
            for (Symbol b : pred[a]) {
                if (comp[b] < 0) {
                    comp[b] = comp[*it];
                    todo.push_back(b);
                }
            }
        }
        std::sort(comps.back().begin(), comps.back().end());
    }
    return comps;
}

// Shortest cycle through `start` staying inside `members`.
std::vector<Symbol> cycle_through(Symbol start, const std::vector<Symbol>& members,
                                  const std::vector<std::vector<Symbol>>& succ)
{
    std::vector<Symbol> parent(succ.size(), kSharp);
    std::vector<bool> seen(succ.size(), false);
    auto inside = [&](Symbol s) { return std::binary_search(members.begin(), members.end(), s); };
    std::queue<Symbol> q;
    q.push(start);
    while (!q.empty()) {
        Symbol a = q.front();
        q.pop();
        for (Symbol b : succ[a]) {
            if (!inside(b)) continue;
            if (b == start) {
                std::vector<Symbol> path{a};
                while (path.back() != start) path.push_back(parent[path.back()]);
                std::reverse(path.begin(), path.end());
                return path;
            }
            if (!seen[b]) {
                seen[b] = true;
                parent[b] = a;
                q.push(b);
            }
        }
    }
    return {};
}

} // namespace

ValidationReport validate_alphabet(const OpAlphabet& alpha)
{
    ValidationReport report;
    const std::size_t n = alpha.size();
    for (Symbol a = 0; a < n; ++a) {
        if (auto r = alpha.prec(kSharp, a); r && *r != PrecRel::Yields) {
            report.push_back({IssueKind::SharpConvention,
                              "entry (#, " + alpha.name(a) + ") is '" + to_char(*r) +
                                  "' but the opening # can only yield precedence",
                              {}});
        }
        if (auto r = alpha.prec(a, kSharp); r && *r != PrecRel::Takes) {
            report.push_back({IssueKind::SharpConvention,
                              "entry (" + alpha.name(a) + ", #) is '" + to_char(*r) +
                                  "' but symbols can only take precedence on the closing #",
                              {}});
        }
    }

    std::vector<std::vector<Symbol>> succ(n);
    for (Symbol a = 0; a < n; ++a)
        for (Symbol b = 0; b < n; ++b)
            if (alpha.prec(a, b) == PrecRel::Equal) succ[a].push_back(b);

    for (const auto& comp : equal_components(alpha, succ)) {
        const Symbol first = comp.front();
        const bool self = std::find(succ[first].begin(), succ[first].end(), first) != succ[first].end();
        if (comp.size() == 1 && !self) continue;
        std::vector<Symbol> cycle = cycle_through(first, comp, succ);
        std::string text;
        for (Symbol s : cycle) text += alpha.name(s) + " = ";
        text += alpha.name(cycle.front());
        report.push_back({IssueKind::EqualCycle, "equal-in-precedence cycle: " + text, std::move(cycle)});
    }
    return report;
}

ParseTree ParseTree::leaf(Symbol s, std::size_t pos)
{
    ParseTree t;
    t.kind = Kind::Leaf;
    t.symbol = s;
    t.position = pos;
    return t;
}

ParseTree ParseTree::internal(ArrowPair span, std::vector<ParseTree> children)
{
    ParseTree t;
    t.kind = Kind::Internal;
    t.span = span;
    t.children = std::move(children);
    return t;
}

std::size_t ParseTree::internal_count() const
{
    if (kind == Kind::Leaf) return 0;
    std::size_t n = 1;
    for (const auto& c : children) n += c.internal_count();
    return n;
}

Word ParseTree::frontier() const
{
    if (kind == Kind::Leaf) return {symbol};
    Word out;
    for (const auto& c : children) {
        Word w = c.frontier();
        out.insert(out.end(), w.begin(), w.end());
    }
    return out;
}

Structure analyze(const OpAlphabet& alpha, const Word& word)
{
    struct Item {
        Symbol symbol;
        bool marked;
        std::size_t pos;
        std::optional<ParseTree> trailing; // subtree reduced right after this item
    };

    Structure out;
    std::vector<Item> stack;
    stack.push_back({kSharp, false, 0, std::nullopt});
    std::size_t cursor = 0;

    auto fail = [&](std::size_t pos, std::string reason) {
        out.compatible = false;
        out.arrows.clear();
        out.tree.reset();
        out.fail_position = pos;
        out.fail_reason = std::move(reason);
        return out;
    };

    while (true) {
        const Symbol look = cursor < word.size() ? word[cursor] : kSharp;
        const std::size_t look_pos = cursor + 1;
        if (look == kSharp && stack.size() == 1) break;
        Item& top = stack.back();
        const auto rel = alpha.prec(top.symbol, look);
        if (!rel) {
            return fail(look_pos, "no precedence relation between " + alpha.name(top.symbol) + " (position " +
                                      std::to_string(top.pos) + ") and " + alpha.name(look) +
                                      " (position " + std::to_string(look_pos) + ")");
        }
        if (*rel == PrecRel::Takes) {
            std::size_t i = stack.size();
            while (i > 0 && !stack[i - 1].marked) --i;
            if (i == 0) return fail(look_pos, "reduction required at position " + std::to_string(look_pos) +
                                                  " but no marked symbol on the stack");
            const std::size_t mark = i - 1;
            Item& anchor = stack[mark - 1];
            std::vector<ParseTree> children;
            if (anchor.trailing) children.push_back(std::move(*anchor.trailing));
            for (std::size_t k = mark; k < stack.size(); ++k) {
                children.push_back(ParseTree::leaf(stack[k].symbol, stack[k].pos));
                if (stack[k].trailing) children.push_back(std::move(*stack[k].trailing));
            }
            const ArrowPair span{anchor.pos, look_pos};
            out.arrows.push_back(span);
            anchor.trailing = ParseTree::internal(span, std::move(children));
            stack.resize(mark);
        } else {
            stack.push_back({look, *rel == PrecRel::Yields, look_pos, std::nullopt});
            ++cursor;
        }
    }
    out.compatible = true;
    out.tree = std::move(stack.front().trailing);
    return out;
}

bool is_compatible(const OpAlphabet& alpha, const Word& word)
{
    return analyze(alpha, word).compatible;
}

std::vector<ArrowPair> arrows(const OpAlphabet& alpha, const Word& word)
{
    Structure s = analyze(alpha, word);
    if (!s.compatible) throw StructureError("incompatible string: " + s.fail_reason, s.fail_position);
    return std::move(s.arrows);
}

ParseTree parse_tree(const OpAlphabet& alpha, const Word& word)
{
    Structure s = analyze(alpha, word);
    if (!s.compatible) throw StructureError("incompatible string: " + s.fail_reason, s.fail_position);
    if (!s.tree) throw StructureError("the empty string has no parse tree", 0);
    return std::move(*s.tree);
}

namespace {
void sexp(std::ostringstream& os, const ParseTree& t, const OpAlphabet& alpha)
{
    if (t.kind == ParseTree::Kind::Leaf) {
        os << alpha.name(t.symbol);
        return;
    }
    os << '(';
    for (std::size_t i = 0; i < t.children.size(); ++i) {
        if (i > 0) os << ' ';
        sexp(os, t.children[i], alpha);
    }
    os << ')';
}

void dot(std::ostringstream& os, const ParseTree& t, const OpAlphabet& alpha, std::size_t& next)
{
    const std::size_t id = next++;
    if (t.kind == ParseTree::Kind::Leaf) {
        os << "  n" << id << " [label=\"" << alpha.name(t.symbol) << "\", shape=plaintext];\n";
        return;
    }
    os << "  n" << id << " [label=\"" << t.span.left << "," << t.span.right << "\", shape=circle];\n";
    for (const auto& c : t.children) {
        const std::size_t child = next;
        dot(os, c, alpha, next);
        os << "  n" << id << " -> n" << child << ";\n";
    }
}
} // namespace

std::string to_sexp(const ParseTree& tree, const OpAlphabet& alpha)
{
    std::ostringstream os;
    sexp(os, tree, alpha);
    return os.str();
}

std::string to_dot(const ParseTree& tree, const OpAlphabet& alpha)
{
    std::ostringstream os;
    os << "digraph tree {\n";
    std::size_t next = 0;
    dot(os, tree, alpha, next);
    os << "}\n";
    return os.str();
}

Word parse_word(const OpAlphabet& alpha, std::string_view text)
{
    Word out;
    std::istringstream is{std::string(text)};
    std::string tok;
    while (is >> tok) {
        auto s = alpha.find(tok);
        if (!s || *s == kSharp) throw SyntaxError("unknown input token '" + tok + "'");
        out.push_back(*s);
    }
    return out;
}

std::string format_word(const OpAlphabet& alpha, const Word& word)
{
    std::string out;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (i > 0) out += ' ';
        out += alpha.name(word[i]);
    }
    return out;
}

} // namespace floyd
