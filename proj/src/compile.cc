#include <algorithm>
#include <iterator>
#include <map>
#include <memory>
#include <optional>

#include "floyd/combinators.hh"
#include "floyd/error.hh"
#include "floyd/fsa.hh"
#include "floyd/logic.hh"

namespace floyd {

AlphabetPtr formula_alphabet(const AlphabetPtr& base, const std::vector<std::string>& vars)
{
    return lift_alphabet(base, vars, true);
}

namespace {

std::size_t var_index(const Lifting& l, const std::string& v)
{
    auto it = std::find(l.vars.begin(), l.vars.end(), v);
    if (it == l.vars.end()) throw Error("alphabet has no component for variable '" + v + "'");
    return static_cast<std::size_t>(it - l.vars.begin());
}

const Lifting& lifting_of(const AlphabetPtr& a)
{
    const Lifting* l = a->lifting();
    if (l == nullptr) throw Error("expected a lifted alphabet");
    return *l;
}

} // namespace

FloydAutomaton arrow_automaton(const AlphabetPtr& lifted, std::size_t i, std::size_t j, ArrowVariant variant)
{
    const Lifting& l = lifting_of(lifted);
    if (i >= l.width() || j >= l.width()) throw Error("arrow component out of range");
    enum : State { q0, q1, q2, q, q3, qF };
    FloydAutomaton a(lifted, 6);
    const char* names[] = {"q0", "q1", "q2", "q", "q3", "qF"};
    for (State s = 0; s < 6; ++s) a.set_state_name(s, names[s]);
    a.initial.insert(q0);
    a.final.insert(qF);

    for (Symbol c = 0; c < lifted->size(); ++c) {
        const std::uint32_t bits = lifted_bits(*lifted, c);
        const bool bi = (bits >> i) & 1u;
        const bool bj = (bits >> j) & 1u;
        if (bi && !bj) {
            a.add_push(q0, c, q1);
        } else if (bj && !bi) {
            a.add_push(q3, c, qF);
        } else if (!bi && !bj) {
            a.add_push(q0, c, q0);
            a.add_push(q1, c, q2);
            a.add_push(q2, c, q2);
            a.add_push(q2, c, q);
            a.add_push(q, c, q);
            a.add_push(qF, c, qF);
            if (variant == ArrowVariant::Corrected) a.add_push(q1, c, q);
        }
    }
    a.add_flush(q, q2, q2);
    a.add_flush(q2, q1, q3);
    a.add_flush(q0, q0, q0);
    a.add_flush(q, q, q);
    a.add_flush(q3, q0, q3);
    a.add_flush(qF, q0, qF);
    a.add_flush(qF, qF, qF);
    if (variant == ArrowVariant::Corrected) {
        // A chain nested right after x returns to x in q1; a chain opened by
        // a mark on y closes over x in q3.
        a.add_flush(q, q1, q1);
        a.add_flush(qF, q3, qF);
    }
    return a;
}

namespace {

// Letter-driven automaton for every atom except the arrow.
FiniteAutomaton atom_fsa(AtomKind kind, const AlphabetPtr& lifted, const std::string& x, const std::string& y,
                         const std::string& symbol)
{
    const Lifting& l = lifting_of(lifted);
    if (kind == AtomKind::True) {
        FiniteAutomaton all;
        all.num_states = 1;
        all.initial.insert(0);
        all.final.insert(0);
        for (Symbol c = 0; c < lifted->size(); ++c) all.add(0, c, 0);
        return all;
    }
    const std::size_t ix = var_index(l, x);
    const std::size_t iy = y.empty() ? ix : var_index(l, y);

    std::optional<Symbol> letter_of_symbol;
    if (kind == AtomKind::Letter) {
        auto s = l.base->find(symbol);
        if (!s) throw Error("unknown symbol '" + symbol + "' in formula");
        letter_of_symbol = *s;
    }

    FiniteAutomaton fsa;
    fsa.initial.insert(0);
    switch (kind) {
    case AtomKind::Singleton:
    case AtomKind::Succ: fsa.num_states = kind == AtomKind::Singleton ? 2 : 3; break;
    case AtomKind::Le: fsa.num_states = 3; break;
    default: fsa.num_states = 1;
    }
    for (Symbol c = 0; c < lifted->size(); ++c) {
        const std::uint32_t bits = lifted_bits(*lifted, c);
        const std::uint32_t letter = lifted_letter(*lifted, c);
        const bool bx = (bits >> ix) & 1u;
        const bool by = (bits >> iy) & 1u;
        switch (kind) {
        case AtomKind::Singleton:
            // 0: none seen, 1: one seen.
            fsa.add(0, c, bx ? 1 : 0);
            if (!bx) fsa.add(1, c, 1);
            break;
        case AtomKind::Letter: {
            const bool ok = *letter_of_symbol == kSharp ? letter >= l.base->size() : letter == *letter_of_symbol;
            if (!bx || ok) fsa.add(0, c, 0);
            break;
        }
        case AtomKind::Subset:
            if (!bx || by) fsa.add(0, c, 0);
            break;
        case AtomKind::Le:
            // 0: nothing yet, 1: seen X, 2: satisfied.
            fsa.add(0, c, bx && by ? 2 : bx ? 1 : 0);
            fsa.add(1, c, by ? 2 : 1);
            fsa.add(2, c, 2);
            break;
        case AtomKind::Succ:
            // 0: previous position not in X, 1: previous position in X, 2: satisfied.
            fsa.add(0, c, bx ? 1 : 0);
            fsa.add(1, c, by ? 2 : bx ? 1 : 0);
            fsa.add(2, c, 2);
            break;
        default: break;
        }
    }
    switch (kind) {
    case AtomKind::Singleton: fsa.final.insert(1); break;
    case AtomKind::Le:
    case AtomKind::Succ: fsa.final.insert(2); break;
    default: fsa.final.insert(0);
    }
    return fsa;
}

} // namespace

FloydAutomaton atom_automaton(AtomKind kind, const AlphabetPtr& lifted, const std::string& x, const std::string& y,
                              const std::string& symbol)
{
    if (kind == AtomKind::True) return max_automaton(lifted);
    if (kind == AtomKind::Arrow) {
        const Lifting& l = lifting_of(lifted);
        return arrow_automaton(lifted, var_index(l, x), y.empty() ? var_index(l, x) : var_index(l, y));
    }
    return lift_fsa(lifted, atom_fsa(kind, lifted, x, y, symbol));
}

namespace {

// Maps each symbol of `big` to the symbol of `small` with the same letter
// and the bits of small's variables.
std::vector<Symbol> restrict_map(const OpAlphabet& big, const OpAlphabet& small)
{
    const Lifting& from = *big.lifting();
    const Lifting& to = *small.lifting();
    std::vector<std::size_t> where(to.width());
    for (std::size_t k = 0; k < to.width(); ++k)
        where[k] = static_cast<std::size_t>(std::find(from.vars.begin(), from.vars.end(), to.vars[k]) - from.vars.begin());
    std::vector<Symbol> out(big.size());
    for (Symbol c = 0; c < big.size(); ++c) {
        const std::uint32_t bits = lifted_bits(big, c);
        std::uint32_t kept = 0;
        for (std::size_t k = 0; k < where.size(); ++k) kept |= ((bits >> where[k]) & 1u) << k;
        out[c] = lifted_symbol(small, lifted_letter(big, c), kept);
    }
    return out;
}

// Intermediate result. Structure-blind results stay plain finite automata,
// minimized after every step, and are lifted only when they meet an arrow.
struct Piece {
    AlphabetPtr alpha;
    std::optional<FiniteAutomaton> fsa;
    FloydAutomaton fa;

    FloydAutomaton floyd() const { return fsa ? lift_fsa(alpha, *fsa) : fa; }
};

struct Compiler {
    AlphabetPtr base;
    CompileOptions options;
    CompileStats stats;
    std::map<std::vector<std::string>, AlphabetPtr> alphabets;

    AlphabetPtr alphabet(const std::vector<std::string>& vars)
    {
        const std::size_t width = base->size() + vars.size();
        if (width > options.width_cap) {
            throw Error("formula needs " + std::to_string(width) + " tuple components (" +
                        std::to_string(base->size()) + " symbols + " + std::to_string(vars.size()) +
                        " variables), above the cap of " + std::to_string(options.width_cap));
        }
        stats.max_width = std::max(stats.max_width, width);
        auto it = alphabets.find(vars);
        if (it == alphabets.end()) it = alphabets.emplace(vars, formula_alphabet(base, vars)).first;
        return it->second;
    }

    Piece note(const NormalFormula& f, FloydAutomaton a)
    {
        a = is_deterministic(a) ? minimize(a) : reduce(a);
        stats.max_states = std::max(stats.max_states, a.num_states());
        if (options.on_node) options.on_node(f, a);
        return {a.alphabet_ptr(), std::nullopt, std::move(a)};
    }

    Piece note(const NormalFormula& f, const AlphabetPtr& alpha, const FiniteAutomaton& fsa)
    {
        Piece p{alpha, fsa_minimize(fsa, alpha->size()), {}};
        stats.max_states = std::max(stats.max_states, p.fsa->num_states);
        if (options.on_node) options.on_node(f, p.floyd());
        return p;
    }

    static const std::vector<std::string>& vars_of(const AlphabetPtr& a) { return a->lifting()->vars; }

    Piece widened(Piece p, const AlphabetPtr& alpha)
    {
        if (p.alpha == alpha) return p;
        if (p.fsa) p.fsa = fsa_pullback(*p.fsa, restrict_map(*alpha, *p.alpha));
        else p.fa = widen(p.fa, alpha);
        p.alpha = alpha;
        return p;
    }

    std::pair<Piece, Piece> align(Piece a, Piece b)
    {
        const auto &va = vars_of(a.alpha), &vb = vars_of(b.alpha);
        std::vector<std::string> all;
        std::set_union(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(all));
        AlphabetPtr alpha = alphabet(all);
        return {widened(std::move(a), alpha), widened(std::move(b), alpha)};
    }

    Piece conjoin(const NormalFormula& f, Piece a, Piece b)
    {
        auto [l, r] = align(std::move(a), std::move(b));
        if (l.fsa && r.fsa) return note(f, l.alpha, fsa_intersect(*l.fsa, *r.fsa, l.alpha->size()));
        return note(f, intersect(l.floyd(), r.floyd()));
    }

    // g & !b as g & !(b & g) when b needs a structured complement:
    // determinizing b & g visits only the runs g allows.
    Piece guarded_complement(const NormalFormula& f, bool negated_right)
    {
        const NormalFormula& neg = negated_right ? f->right : f->left;
        Piece guard = run(negated_right ? f->left : f->right);
        Piece body = run(neg->left);
        if (body.fsa) return conjoin(f, std::move(guard), note(neg, body.alpha, fsa_complement(*body.fsa, body.alpha->size())));
        auto [g, b] = align(std::move(guard), std::move(body));
        const FloydAutomaton ga = g.floyd();
        return note(f, intersect(complement(trim(intersect(b.fa, ga))), ga));
    }

    Piece run(const NormalFormula& f)
    {
        switch (f->kind) {
        case NormalNode::Kind::Atom: {
            std::vector<std::string> vars;
            if (!f->x.empty()) vars.push_back(f->x);
            if (!f->y.empty() && f->y != f->x) vars.push_back(f->y);
            std::sort(vars.begin(), vars.end());
            const AlphabetPtr alpha = alphabet(vars);
            if (f->atom == AtomKind::Arrow) {
                FloydAutomaton a = atom_automaton(f->atom, alpha, f->x, f->y, f->symbol);
                return note(f, a);
            }
            return note(f, alpha, atom_fsa(f->atom, alpha, f->x, f->y, f->symbol));
        }
        case NormalNode::Kind::Not: {
            Piece p = run(f->left);
            if (p.fsa) return note(f, p.alpha, fsa_complement(*p.fsa, p.alpha->size()));
            return note(f, complement(p.fa));
        }
        case NormalNode::Kind::Or: {
            auto [l, r] = align(run(f->left), run(f->right));
            if (l.fsa && r.fsa) return note(f, l.alpha, fsa_unite(*l.fsa, *r.fsa));
            const FloydAutomaton a = l.floyd(), b = r.floyd();
            // De Morgan keeps deterministic operands deterministic, so later complements stay cheap.
            if (is_deterministic(a) && is_deterministic(b))
                return note(f, complement(intersect(complement(a), complement(b))));
            return note(f, trim(unite(a, b)));
        }
        case NormalNode::Kind::And: {
            if (f->right->kind == NormalNode::Kind::Not) return guarded_complement(f, true);
            if (f->left->kind == NormalNode::Kind::Not) return guarded_complement(f, false);
            return conjoin(f, run(f->left), run(f->right));
        }
        case NormalNode::Kind::Exists: {
            Piece body = run(f->left);
            const auto& vars = vars_of(body.alpha);
            if (std::find(vars.begin(), vars.end(), f->x) == vars.end()) return body;
            std::vector<std::string> rest = vars;
            rest.erase(std::find(rest.begin(), rest.end(), f->x));
            // Reuse the cached alphabet so later products compare by pointer.
            const AlphabetPtr alpha = alphabet(rest);
            if (body.fsa) return note(f, alpha, fsa_pushforward(*body.fsa, restrict_map(*body.alpha, *alpha)));
            FloydAutomaton pr = widen(project_var(body.fa, f->x), alpha);
            return note(f, pr);
        }
        }
        throw Error("unknown normalized formula node");
    }
};

} // namespace

namespace {

void conjuncts(const NormalFormula& f, std::vector<NormalFormula>& out)
{
    if (f->kind == NormalNode::Kind::And) {
        conjuncts(f->left, out);
        conjuncts(f->right, out);
    } else {
        out.push_back(f);
    }
}

NormalFormula make(NormalNode::Kind kind, NormalFormula l, NormalFormula r = nullptr, std::string x = {})
{
    auto n = std::make_shared<NormalNode>();
    n->kind = kind;
    n->left = std::move(l);
    n->right = std::move(r);
    n->x = std::move(x);
    return n;
}

NormalFormula conjoin(const std::vector<NormalFormula>& parts)
{
    NormalFormula f = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) f = make(NormalNode::Kind::And, f, parts[i]);
    return f;
}

bool mentions(const NormalFormula& f, const std::string& v)
{
    const auto free = free_sets(f);
    return std::binary_search(free.begin(), free.end(), v);
}

} // namespace

NormalFormula miniscope(const NormalFormula& f)
{
    switch (f->kind) {
    case NormalNode::Kind::Atom: return f;
    case NormalNode::Kind::Not: {
        // Complements are the expensive step, so apply them to the smallest
        // pieces: !!a is a and !(a | b) is !a & !b.
        const NormalFormula& g = f->left;
        if (g->kind == NormalNode::Kind::Not) return miniscope(g->left);
        if (g->kind == NormalNode::Kind::Or)
            return make(NormalNode::Kind::And, miniscope(make(NormalNode::Kind::Not, g->left)),
                        miniscope(make(NormalNode::Kind::Not, g->right)));
        return make(f->kind, miniscope(g));
    }
    case NormalNode::Kind::Or:
    case NormalNode::Kind::And: return make(f->kind, miniscope(f->left), miniscope(f->right));
    case NormalNode::Kind::Exists: {
        std::vector<NormalFormula> parts, inside, outside;
        conjuncts(miniscope(f->left), parts);
        for (auto& p : parts) (mentions(p, f->x) ? inside : outside).push_back(p);
        if (inside.empty()) return conjoin(outside);
        NormalFormula q = make(NormalNode::Kind::Exists, conjoin(inside), nullptr, f->x);
        if (outside.empty()) return q;
        outside.push_back(q);
        return conjoin(outside);
    }
    }
    return f;
}

FloydAutomaton compile_normalized(const AlphabetPtr& base, const NormalFormula& f, const CompileOptions& options,
                                  CompileStats* stats)
{
    if (base->lifting() != nullptr) throw Error("compile expects an unlifted alphabet");
    Compiler c{base, options, {}, {}};
    const Piece p = c.widened(c.run(miniscope(f)), c.alphabet(free_sets(f)));
    FloydAutomaton out = p.floyd();
    if (stats) *stats = c.stats;
    return out;
}

FloydAutomaton compile(const AlphabetPtr& base, const Formula& sentence, const CompileOptions& options,
                       CompileStats* stats)
{
    const NormalFormula f = normalize(sentence);
    FloydAutomaton lifted = compile_normalized(base, f, options, stats);
    return trim(strip_boundaries(lifted));
}

} // namespace floyd
