#include <algorithm>
#include <optional>
#include <set>

#include "floyd/error.hh"
#include "floyd/logic.hh"

namespace floyd {

namespace {

NormalFormula node(NormalNode::Kind kind, NormalFormula l = nullptr, NormalFormula r = nullptr)
{
    auto n = std::make_shared<NormalNode>();
    n->kind = kind;
    n->left = std::move(l);
    n->right = std::move(r);
    return n;
}

NormalFormula atom(AtomKind kind, std::string x, std::string y = {}, std::string symbol = {})
{
    auto n = std::make_shared<NormalNode>();
    n->kind = NormalNode::Kind::Atom;
    n->atom = kind;
    n->x = std::move(x);
    n->y = std::move(y);
    n->symbol = std::move(symbol);
    return n;
}

NormalFormula neg(NormalFormula f) { return node(NormalNode::Kind::Not, std::move(f)); }
NormalFormula disj(NormalFormula a, NormalFormula b) { return node(NormalNode::Kind::Or, std::move(a), std::move(b)); }
NormalFormula conj(NormalFormula a, NormalFormula b) { return node(NormalNode::Kind::And, std::move(a), std::move(b)); }

NormalFormula exists(std::string v, NormalFormula body)
{
    auto n = std::make_shared<NormalNode>();
    n->kind = NormalNode::Kind::Exists;
    n->x = std::move(v);
    n->left = std::move(body);
    return n;
}

NormalFormula translate(const Formula& f)
{
    switch (f->kind) {
    case FormulaKind::CharAt: return atom(AtomKind::Letter, f->x, {}, f->symbol);
    case FormulaKind::In: return atom(AtomKind::Subset, f->x, f->y);
    case FormulaKind::Le: return atom(AtomKind::Le, f->x, f->y);
    case FormulaKind::Arrow: return atom(AtomKind::Arrow, f->x, f->y);
    case FormulaKind::Succ: return atom(AtomKind::Succ, f->y, f->x);
    case FormulaKind::Lt: return conj(atom(AtomKind::Le, f->x, f->y), neg(atom(AtomKind::Le, f->y, f->x)));
    case FormulaKind::Eq: return conj(atom(AtomKind::Le, f->x, f->y), atom(AtomKind::Le, f->y, f->x));
    case FormulaKind::True: return atom(AtomKind::True, {});
    case FormulaKind::False: return neg(atom(AtomKind::True, {}));
    case FormulaKind::Not: return neg(translate(f->left));
    case FormulaKind::Or: return disj(translate(f->left), translate(f->right));
    case FormulaKind::And: return conj(translate(f->left), translate(f->right));
    case FormulaKind::Implies: return disj(neg(translate(f->left)), translate(f->right));
    case FormulaKind::ExistsFO: return exists(f->x, conj(atom(AtomKind::Singleton, f->x), translate(f->left)));
    case FormulaKind::ForallFO:
        return neg(exists(f->x, conj(atom(AtomKind::Singleton, f->x), neg(translate(f->left)))));
    case FormulaKind::ExistsSO: return exists(f->x, translate(f->left));
    case FormulaKind::ForallSO: return neg(exists(f->x, neg(translate(f->left))));
    }
    throw Error("unknown formula kind");
}

const char* atom_name(AtomKind k)
{
    switch (k) {
    case AtomKind::Singleton: return "Sing";
    case AtomKind::Letter: return "Letter";
    case AtomKind::Subset: return "Sub";
    case AtomKind::Le: return "Le";
    case AtomKind::Succ: return "Succ";
    case AtomKind::Arrow: return "Arrow";
    case AtomKind::True: return "True";
    }
    return "?";
}

void print(const NormalFormula& f, std::string& out)
{
    switch (f->kind) {
    case NormalNode::Kind::Atom:
        out += atom_name(f->atom);
        if (f->atom == AtomKind::True) return;
        out += '(';
        if (f->atom == AtomKind::Letter) out += f->symbol + ", ";
        out += f->x;
        if (!f->y.empty()) out += ", " + f->y;
        out += ')';
        return;
    case NormalNode::Kind::Not:
        out += '!';
        print(f->left, out);
        return;
    case NormalNode::Kind::Or:
    case NormalNode::Kind::And:
        out += '(';
        print(f->left, out);
        out += f->kind == NormalNode::Kind::Or ? " | " : " & ";
        print(f->right, out);
        out += ')';
        return;
    case NormalNode::Kind::Exists:
        out += "(E2 " + f->x + " . ";
        print(f->left, out);
        out += ')';
        return;
    }
}

void collect(const NormalFormula& f, std::multiset<std::string>& bound, std::set<std::string>& free)
{
    switch (f->kind) {
    case NormalNode::Kind::Atom:
        for (const std::string* v : {&f->x, &f->y})
            if (!v->empty() && !bound.count(*v)) free.insert(*v);
        return;
    case NormalNode::Kind::Exists: {
        auto it = bound.insert(f->x);
        collect(f->left, bound, free);
        bound.erase(it);
        return;
    }
    default:
        collect(f->left, bound, free);
        if (f->right) collect(f->right, bound, free);
    }
}

struct NormalEval {
    const OpAlphabet& alpha;
    const Model& m;
    std::map<std::string, std::uint64_t> sets;

    std::uint64_t get(const std::string& v) const
    {
        auto it = sets.find(v);
        if (it == sets.end()) throw Error("unbound set variable '" + v + "'");
        return it->second;
    }

    bool atom(const NormalNode& n) const
    {
        if (n.atom == AtomKind::True) return true;
        const std::uint64_t x = get(n.x);
        const std::uint64_t y = n.y.empty() ? 0 : get(n.y);
        switch (n.atom) {
        case AtomKind::Singleton: return x != 0 && (x & (x - 1)) == 0;
        case AtomKind::Letter: {
            const Symbol a = alpha.symbol(n.symbol);
            for (std::size_t p = 0; p < m.positions(); ++p)
                if (((x >> p) & 1u) && m.symbol_at(p) != a) return false;
            return true;
        }
        case AtomKind::Subset: return (x & ~y) == 0;
        case AtomKind::Le: {
            if (x == 0 || y == 0) return false;
            const int lowest_x = __builtin_ctzll(x);
            const int highest_y = 63 - __builtin_clzll(y);
            return lowest_x <= highest_y;
        }
        case AtomKind::Succ: return ((x << 1) & y) != 0;
        case AtomKind::Arrow: {
            const bool single = x != 0 && (x & (x - 1)) == 0 && y != 0 && (y & (y - 1)) == 0;
            return single && m.arrow(static_cast<std::size_t>(__builtin_ctzll(x)),
                                     static_cast<std::size_t>(__builtin_ctzll(y)));
        }
        case AtomKind::True: return true;
        }
        return false;
    }

    bool run(const NormalFormula& f)
    {
        switch (f->kind) {
        case NormalNode::Kind::Atom: return atom(*f);
        case NormalNode::Kind::Not: return !run(f->left);
        case NormalNode::Kind::Or: return run(f->left) || run(f->right);
        case NormalNode::Kind::And: return run(f->left) && run(f->right);
        case NormalNode::Kind::Exists: {
            auto saved = sets.find(f->x) != sets.end() ? std::optional(sets[f->x]) : std::nullopt;
            bool found = false;
            const NormalFormula& body = f->left;
            const bool singleton = body->kind == NormalNode::Kind::And &&
                                   body->left->kind == NormalNode::Kind::Atom &&
                                   body->left->atom == AtomKind::Singleton && body->left->x == f->x;
            if (singleton) {
                for (std::size_t p = 0; p < m.positions() && !found; ++p) {
                    sets[f->x] = std::uint64_t{1} << p;
                    found = run(body->right);
                }
            } else {
                if (m.positions() > kSetQuantifierPositionCap)
                    throw Error("set quantifier over " + std::to_string(m.positions()) + " positions exceeds the cap");
                const std::uint64_t end = std::uint64_t{1} << m.positions();
                for (std::uint64_t mask = 0; mask < end && !found; ++mask) {
                    sets[f->x] = mask;
                    found = run(body);
                }
            }
            if (saved) sets[f->x] = *saved;
            else sets.erase(f->x);
            return found;
        }
        }
        return false;
    }
};

} // namespace

NormalFormula normalize_open(const Formula& f)
{
    return translate(f);
}

NormalFormula normalize(const Formula& sentence)
{
    if (!free_variables(sentence).empty()) throw Error("normalize expects a sentence; the formula has free variables");
    return translate(sentence);
}

std::string to_text(const NormalFormula& f)
{
    std::string out;
    print(f, out);
    return out;
}

std::vector<std::string> free_sets(const NormalFormula& f)
{
    std::multiset<std::string> bound;
    std::set<std::string> free;
    collect(f, bound, free);
    return {free.begin(), free.end()};
}

bool eval_normalized(const OpAlphabet& alpha, const Model& m, const NormalFormula& f,
                     const std::map<std::string, std::uint64_t>& sets)
{
    NormalEval ev{alpha, m, sets};
    return ev.run(f);
}

} // namespace floyd
