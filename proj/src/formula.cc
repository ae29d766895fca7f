#include "floyd/formula.hh"

#include <cctype>
#include <functional>
#include <set>

#include "floyd/error.hh"

namespace floyd {

bool is_core(FormulaKind kind)
{
    return kind <= FormulaKind::ExistsSO;
}

bool is_quantifier(FormulaKind kind)
{
    switch (kind) {
    case FormulaKind::ExistsFO:
    case FormulaKind::ExistsSO:
    case FormulaKind::ForallFO:
    case FormulaKind::ForallSO: return true;
    default: return false;
    }
}

bool same_formula(const Formula& a, const Formula& b)
{
    if (a == b) return true;
    if (!a || !b) return false;
    return a->kind == b->kind && a->symbol == b->symbol && a->x == b->x && a->y == b->y &&
           same_formula(a->left, b->left) && same_formula(a->right, b->right);
}

std::size_t formula_size(const Formula& f)
{
    if (!f) return 0;
    return 1 + formula_size(f->left) + formula_size(f->right);
}

namespace mso {

namespace {
Formula make(FormulaKind kind, std::string symbol, std::string x, std::string y, Formula l, Formula r)
{
    auto n = std::make_shared<FormulaNode>();
    n->kind = kind;
    n->symbol = std::move(symbol);
    n->x = std::move(x);
    n->y = std::move(y);
    n->left = std::move(l);
    n->right = std::move(r);
    return n;
}

Formula atom(FormulaKind kind, std::string x, std::string y)
{
    return make(kind, {}, std::move(x), std::move(y), nullptr, nullptr);
}

Formula fold(std::vector<Formula>& parts, std::size_t lo, std::size_t hi, Formula (*join)(Formula, Formula))
{
    if (hi - lo == 1) return parts[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    return join(fold(parts, lo, mid, join), fold(parts, mid, hi, join));
}
} // namespace

Formula char_at(std::string symbol, std::string x) { return make(FormulaKind::CharAt, std::move(symbol), std::move(x), {}, nullptr, nullptr); }
Formula in(std::string x, std::string set) { return atom(FormulaKind::In, std::move(x), std::move(set)); }
Formula le(std::string x, std::string y) { return atom(FormulaKind::Le, std::move(x), std::move(y)); }
Formula arrow(std::string x, std::string y) { return atom(FormulaKind::Arrow, std::move(x), std::move(y)); }
Formula succ(std::string x, std::string y) { return atom(FormulaKind::Succ, std::move(x), std::move(y)); }
Formula eq(std::string x, std::string y) { return atom(FormulaKind::Eq, std::move(x), std::move(y)); }
Formula lt(std::string x, std::string y) { return atom(FormulaKind::Lt, std::move(x), std::move(y)); }
Formula lnot(Formula f) { return make(FormulaKind::Not, {}, {}, {}, std::move(f), nullptr); }
Formula lor(Formula a, Formula b) { return make(FormulaKind::Or, {}, {}, {}, std::move(a), std::move(b)); }
Formula land(Formula a, Formula b) { return make(FormulaKind::And, {}, {}, {}, std::move(a), std::move(b)); }
Formula implies(Formula a, Formula b) { return make(FormulaKind::Implies, {}, {}, {}, std::move(a), std::move(b)); }
Formula exists1(std::string x, Formula body) { return make(FormulaKind::ExistsFO, {}, std::move(x), {}, std::move(body), nullptr); }
Formula exists2(std::string set, Formula body) { return make(FormulaKind::ExistsSO, {}, std::move(set), {}, std::move(body), nullptr); }
Formula forall1(std::string x, Formula body) { return make(FormulaKind::ForallFO, {}, std::move(x), {}, std::move(body), nullptr); }
Formula forall2(std::string set, Formula body) { return make(FormulaKind::ForallSO, {}, std::move(set), {}, std::move(body), nullptr); }

Formula top()
{
    static const Formula t = make(FormulaKind::True, {}, {}, {}, nullptr, nullptr);
    return t;
}

Formula bottom()
{
    static const Formula f = make(FormulaKind::False, {}, {}, {}, nullptr, nullptr);
    return f;
}

Formula land_all(std::vector<Formula> parts)
{
    if (parts.empty()) return top();
    return fold(parts, 0, parts.size(), &land);
}

Formula lor_all(std::vector<Formula> parts)
{
    if (parts.empty()) return bottom();
    return fold(parts, 0, parts.size(), &lor);
}

Formula prec_rel(const OpAlphabet& alpha, PrecRel rel, const std::string& x, const std::string& y)
{
    std::vector<Symbol> all;
    for (Symbol a = 0; a < alpha.size(); ++a) all.push_back(a);
    all.push_back(kSharp);
    std::vector<Formula> parts;
    for (Symbol a : all) {
        for (Symbol b : all) {
            if (a == kSharp && b == kSharp) continue;
            if (alpha.prec(a, b) == rel) parts.push_back(land(char_at(alpha.name(a), x), char_at(alpha.name(b), y)));
        }
    }
    return lor_all(std::move(parts));
}

} // namespace mso

namespace {

struct Desugarer {
    std::size_t fresh = 0;

    std::string next() { return "_d" + std::to_string(fresh++); }

    Formula run(const Formula& f)
    {
        using namespace mso;
        switch (f->kind) {
        case FormulaKind::CharAt:
        case FormulaKind::In:
        case FormulaKind::Le:
        case FormulaKind::Arrow:
        case FormulaKind::Succ: return f;
        case FormulaKind::Not: return lnot(run(f->left));
        case FormulaKind::Or: return lor(run(f->left), run(f->right));
        case FormulaKind::ExistsFO: return exists1(f->x, run(f->left));
        case FormulaKind::ExistsSO: return exists2(f->x, run(f->left));
        case FormulaKind::True: {
            const std::string v = next();
            return lnot(exists1(v, lnot(le(v, v))));
        }
        case FormulaKind::False: {
            const std::string v = next();
            return exists1(v, lnot(le(v, v)));
        }
        case FormulaKind::And: return lnot(lor(lnot(run(f->left)), lnot(run(f->right))));
        case FormulaKind::Implies: return lor(lnot(run(f->left)), run(f->right));
        case FormulaKind::ForallFO: return lnot(exists1(f->x, lnot(run(f->left))));
        case FormulaKind::ForallSO: return lnot(exists2(f->x, lnot(run(f->left))));
        case FormulaKind::Eq: return run(land(le(f->x, f->y), le(f->y, f->x)));
        case FormulaKind::Lt: return run(land(le(f->x, f->y), lnot(le(f->y, f->x))));
        }
        throw Error("unknown formula kind");
    }
};

} // namespace

Formula desugar(const Formula& f)
{
    Desugarer d;
    return d.run(f);
}

Signature free_variables(const Formula& f)
{
    Signature sig;
    std::set<std::string> seen_fo, seen_so;
    std::multiset<std::string> bound_fo, bound_so;
    auto use_fo = [&](const std::string& v) {
        if (!bound_fo.count(v) && seen_fo.insert(v).second) sig.fo.push_back(v);
    };
    auto use_so = [&](const std::string& v) {
        if (!bound_so.count(v) && seen_so.insert(v).second) sig.so.push_back(v);
    };
    std::function<void(const Formula&)> walk = [&](const Formula& g) {
        switch (g->kind) {
        case FormulaKind::CharAt: use_fo(g->x); break;
        case FormulaKind::In:
            use_fo(g->x);
            use_so(g->y);
            break;
        case FormulaKind::Le:
        case FormulaKind::Arrow:
        case FormulaKind::Succ:
        case FormulaKind::Eq:
        case FormulaKind::Lt:
            use_fo(g->x);
            use_fo(g->y);
            break;
        case FormulaKind::ExistsFO:
        case FormulaKind::ForallFO: {
            auto it = bound_fo.insert(g->x);
            walk(g->left);
            bound_fo.erase(it);
            break;
        }
        case FormulaKind::ExistsSO:
        case FormulaKind::ForallSO: {
            auto it = bound_so.insert(g->x);
            walk(g->left);
            bound_so.erase(it);
            break;
        }
        default:
            if (g->left) walk(g->left);
            if (g->right) walk(g->right);
        }
    };
    walk(f);
    return sig;
}

namespace {

void print(const Formula& f, std::string& out, bool nested)
{
    switch (f->kind) {
    case FormulaKind::CharAt: out += f->symbol + "(" + f->x + ")"; return;
    case FormulaKind::In: out += f->x + " in " + f->y; return;
    case FormulaKind::Le: out += f->x + " <= " + f->y; return;
    case FormulaKind::Lt: out += f->x + " < " + f->y; return;
    case FormulaKind::Eq: out += f->x + " = " + f->y; return;
    case FormulaKind::Succ: out += f->x + " = " + f->y + " + 1"; return;
    case FormulaKind::Arrow: out += f->x + " ~ " + f->y; return;
    case FormulaKind::True: out += "true"; return;
    case FormulaKind::False: out += "false"; return;
    case FormulaKind::Not: {
        out += '!';
        print(f->left, out, true);
        return;
    }
    case FormulaKind::Or:
    case FormulaKind::And:
    case FormulaKind::Implies: {
        const char* op = f->kind == FormulaKind::Or ? " | " : f->kind == FormulaKind::And ? " & " : " -> ";
        out += '(';
        print(f->left, out, true);
        out += op;
        print(f->right, out, true);
        out += ')';
        return;
    }
    case FormulaKind::ExistsFO:
    case FormulaKind::ForallFO:
    case FormulaKind::ExistsSO:
    case FormulaKind::ForallSO: {
        const char* q = f->kind == FormulaKind::ExistsFO   ? "E1 "
                        : f->kind == FormulaKind::ForallFO ? "A1 "
                        : f->kind == FormulaKind::ExistsSO ? "E2 "
                                                           : "A2 ";
        if (nested) out += '(';
        out += q + f->x + " . ";
        print(f->left, out, false);
        if (nested) out += ')';
        return;
    }
    }
}

// Recursive-descent parser over a small token stream.
struct Parser {
    enum class Tok { Ident, Sharp, LParen, RParen, Dot, Comma, Not, And, Or, Arrow, Le, Lt, Eq, Plus, One, Tilde, End };
    struct Token {
        Tok kind;
        std::string text;
        std::size_t offset;
    };

    std::vector<Token> toks;
    std::size_t pos = 0;

    explicit Parser(std::string_view s)
    {
        std::size_t i = 0;
        while (i < s.size()) {
            const char c = s[i];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++i;
                continue;
            }
            if (c == '%') {
                while (i < s.size() && s[i] != '\n') ++i;
                continue;
            }
            const std::size_t at = i;
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
                toks.push_back({Tok::Ident, std::string(s.substr(at, i - at)), at});
                continue;
            }
            auto two = [&](const char* p) { return s.substr(i, 2) == p; };
            Tok k;
            std::size_t len = 1;
            if (two("->")) { k = Tok::Arrow; len = 2; }
            else if (two("<=")) { k = Tok::Le; len = 2; }
            else {
                switch (c) {
                case '#': k = Tok::Sharp; break;
                case '(': k = Tok::LParen; break;
                case ')': k = Tok::RParen; break;
                case '.': k = Tok::Dot; break;
                case ',': k = Tok::Comma; break;
                case '!': k = Tok::Not; break;
                case '&': k = Tok::And; break;
                case '|': k = Tok::Or; break;
                case '<': k = Tok::Lt; break;
                case '=': k = Tok::Eq; break;
                case '+': k = Tok::Plus; break;
                case '1': k = Tok::One; break;
                case '~': k = Tok::Tilde; break;
                default: throw SyntaxError("unexpected character '" + std::string(1, c) + "' at offset " + std::to_string(at));
                }
            }
            toks.push_back({k, std::string(s.substr(i, len)), at});
            i += len;
        }
        toks.push_back({Tok::End, "", s.size()});
    }

    const Token& peek(std::size_t ahead = 0) const { return toks[std::min(pos + ahead, toks.size() - 1)]; }

    [[noreturn]] void fail(const std::string& what) const
    {
        const Token& t = peek();
        throw SyntaxError(what + " at offset " + std::to_string(t.offset) +
                          (t.kind == Tok::End ? " (end of input)" : " near '" + t.text + "'"));
    }

    void expect(Tok k, const char* what)
    {
        if (peek().kind != k) fail(std::string("expected ") + what);
        ++pos;
    }

    static bool is_set_var(const std::string& v) { return std::isupper(static_cast<unsigned char>(v[0])) != 0; }

    std::string fo_var()
    {
        if (peek().kind != Tok::Ident || is_set_var(peek().text)) fail("expected a position variable");
        return toks[pos++].text;
    }

    std::string so_var()
    {
        if (peek().kind != Tok::Ident || !is_set_var(peek().text)) fail("expected a set variable");
        return toks[pos++].text;
    }

    bool at_quantifier() const
    {
        const Token& t = peek();
        return t.kind == Tok::Ident && (t.text == "E1" || t.text == "A1" || t.text == "E2" || t.text == "A2");
    }

    Formula formula()
    {
        if (at_quantifier()) return quantified();
        Formula lhs = disjunction();
        if (peek().kind == Tok::Arrow) {
            ++pos;
            return mso::implies(lhs, formula());
        }
        return lhs;
    }

    Formula quantified()
    {
        const std::string q = toks[pos++].text;
        const bool second = q[1] == '2';
        std::vector<std::string> vars{second ? so_var() : fo_var()};
        while (peek().kind == Tok::Comma) {
            ++pos;
            vars.push_back(second ? so_var() : fo_var());
        }
        expect(Tok::Dot, "'.' after quantified variables");
        Formula body = formula();
        for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
            if (q == "E1") body = mso::exists1(*it, body);
            else if (q == "A1") body = mso::forall1(*it, body);
            else if (q == "E2") body = mso::exists2(*it, body);
            else body = mso::forall2(*it, body);
        }
        return body;
    }

    Formula disjunction()
    {
        Formula f = conjunction();
        while (peek().kind == Tok::Or) {
            ++pos;
            f = mso::lor(f, conjunction());
        }
        return f;
    }

    Formula conjunction()
    {
        Formula f = unary();
        while (peek().kind == Tok::And) {
            ++pos;
            f = mso::land(f, unary());
        }
        return f;
    }

    Formula unary()
    {
        if (peek().kind == Tok::Not) {
            ++pos;
            return mso::lnot(unary());
        }
        if (at_quantifier()) return quantified();
        if (peek().kind == Tok::LParen) {
            ++pos;
            Formula f = formula();
            expect(Tok::RParen, "')'");
            return f;
        }
        return atom();
    }

    Formula atom()
    {
        const Token& t = peek();
        if (t.kind == Tok::Sharp || (t.kind == Tok::Ident && peek(1).kind == Tok::LParen)) {
            std::string sym = t.text;
            pos += 2;
            std::string x = fo_var();
            expect(Tok::RParen, "')'");
            return mso::char_at(std::move(sym), std::move(x));
        }
        if (t.kind == Tok::Ident && t.text == "true") {
            ++pos;
            return mso::top();
        }
        if (t.kind == Tok::Ident && t.text == "false") {
            ++pos;
            return mso::bottom();
        }
        std::string x = fo_var();
        const Token& op = peek();
        if (op.kind == Tok::Ident && op.text == "in") {
            ++pos;
            return mso::in(std::move(x), so_var());
        }
        switch (op.kind) {
        case Tok::Le: ++pos; return mso::le(std::move(x), fo_var());
        case Tok::Lt: ++pos; return mso::lt(std::move(x), fo_var());
        case Tok::Tilde: ++pos; return mso::arrow(std::move(x), fo_var());
        case Tok::Eq: {
            ++pos;
            std::string y = fo_var();
            if (peek().kind == Tok::Plus) {
                ++pos;
                expect(Tok::One, "'1' after '+'");
                return mso::succ(std::move(x), std::move(y));
            }
            return mso::eq(std::move(x), std::move(y));
        }
        default: fail("expected a relation after variable '" + x + "'");
        }
    }
};

} // namespace

std::string to_text(const Formula& f)
{
    std::string out;
    print(f, out, false);
    return out;
}

Formula parse_formula(std::string_view text)
{
    Parser p(text);
    Formula f = p.formula();
    if (p.peek().kind != Parser::Tok::End) p.fail("unexpected trailing input");
    return f;
}

} // namespace floyd
