#include "floyd/encode.hh"

#include <algorithm>
#include <functional>

#include "floyd/combinators.hh"
#include "floyd/error.hh"

namespace floyd {

using namespace mso;

namespace {

std::optional<State> only(std::span<const State> s)
{
    if (s.empty()) return std::nullopt;
    return s.front();
}

std::string key_of(const std::string& name, const std::vector<std::string>& args)
{
    std::string k = name + "(";
    for (std::size_t i = 0; i < args.size(); ++i) k += (i ? "," : "") + args[i];
    return k + ")";
}

// first(x): x is position 0.
Formula first(const std::string& x)
{
    return lnot(exists1("_o", lt("_o", x)));
}

} // namespace

MacroTable::MacroTable(const FloydAutomaton& a)
    : a_(a), n_(a.num_states())
{
    if (!is_deterministic(a)) throw Error("the automaton is nondeterministic; determinize it first");
}

Formula MacroTable::memo(const std::string& name, std::vector<std::string> args, const std::function<Formula()>& build)
{
    const std::string k = key_of(name, args);
    auto it = sites_.find(k);
    if (it == sites_.end()) {
        Formula f = build();
        it = sites_.emplace(k, Site{name, std::move(args), 0, std::move(f)}).first;
    }
    ++it->second.uses;
    return it->second.expansion;
}

Formula MacroTable::prec(PrecRel rel, const std::string& x, const std::string& y)
{
    const std::string name = std::string("prec") + to_char(rel);
    return memo(name, {x, y}, [&] { return prec_rel(a_.alphabet(), rel, x, y); });
}

Formula MacroTable::pred_in(const std::string& y, const std::string& set)
{
    return memo("pred_in", {y, set}, [&] { return exists1("_u", land(mso::succ(y, "_u"), in("_u", set))); });
}

Formula MacroTable::tree(const std::string& x, const std::string& z, const std::string& w, const std::string& y)
{
    return memo("Tree", {x, z, w, y}, [&] {
        // z is the largest arrow target of x below y (x + 1 if there is none);
        // w is the smallest arrow source to y above x (y - 1 if none).
        Formula left = land_all({
            lor(mso::succ(z, x), arrow(x, z)),
            lt(z, y),
            lnot(exists1("_t", land_all({lt(z, "_t"), lt("_t", y), arrow(x, "_t")}))),
        });
        Formula right = land_all({
            lor(mso::succ(y, w), arrow(w, y)),
            lt(x, w),
            lnot(exists1("_t", land_all({lt(x, "_t"), lt("_t", w), arrow("_t", y)}))),
        });
        return land_all({arrow(x, y), left, right});
    });
}

Formula MacroTable::succ(std::size_t k, const std::string& x, const std::string& y)
{
    return memo("Succ" + std::to_string(k), {x, y}, [&] { return land(mso::succ(y, x), in(x, p(k))); });
}

Formula MacroTable::next(std::size_t k, const std::string& x, const std::string& y)
{
    return memo("Next" + std::to_string(k), {x, y},
                [&] { return land_all({arrow(x, y), in(x, m(k)), pred_in(y, f(k))}); });
}

Formula MacroTable::fl(std::size_t k, const std::string& x, const std::string& y)
{
    return memo("fl" + std::to_string(k), {x, y}, [&] {
        std::vector<Formula> cases;
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                auto d = only(a_.flush_targets(static_cast<State>(i), static_cast<State>(j)));
                if (!d || *d != k) continue;
                cases.push_back(land(lor(succ(i, "_w", y), next(i, "_w", y)), lor(succ(j, x, "_z"), next(j, x, "_z"))));
            }
        }
        Formula inner = exists1("_z", exists1("_w", land(tree(x, "_z", "_w", y), lor_all(std::move(cases)))));
        return land_all({arrow(x, y), in(x, m(k)), pred_in(y, f(k)), inner});
    });
}

Formula MacroTable::tree_ij(std::size_t i, std::size_t j, const std::string& x, const std::string& z,
                            const std::string& w, const std::string& y)
{
    return memo("Tree" + std::to_string(i) + "," + std::to_string(j), {x, z, w, y}, [&] {
        return land_all({tree(x, z, w, y), lor(succ(i, w, y), fl(i, w, y)), lor(succ(j, x, z), fl(j, x, z))});
    });
}

Signature EncodedSentence::body_signature() const
{
    Signature sig;
    sig.fo.push_back("e");
    for (std::size_t k = 0; k < num_states; ++k) sig.so.push_back(MacroTable::p(k));
    for (std::size_t k = 0; k < num_states; ++k) sig.so.push_back(MacroTable::m(k));
    for (std::size_t k = 0; k < num_states; ++k) sig.so.push_back(MacroTable::f(k));
    return sig;
}

namespace {

struct Encoder {
    const FloydAutomaton& a;
    MacroTable mt;
    std::size_t n;
    std::vector<Symbol> symbols;

    explicit Encoder(const FloydAutomaton& aut)
        : a(aut), mt(aut), n(aut.num_states())
    {
        for (Symbol c = 0; c < a.alphabet().size(); ++c) symbols.push_back(c);
    }

    std::string sym(Symbol c) const { return a.alphabet().name(c); }

    std::optional<State> push(std::size_t i, Symbol c) const { return only(a.push_targets(static_cast<State>(i), c)); }
    std::optional<State> flush(std::size_t i, std::size_t j) const
    {
        return only(a.flush_targets(static_cast<State>(i), static_cast<State>(j)));
    }

    // x yields to or equals y.
    Formula pushes(const std::string& x, const std::string& y)
    {
        return lor(mt.prec(PrecRel::Yields, x, y), mt.prec(PrecRel::Equal, x, y));
    }

    Formula push_fw()
    {
        std::vector<Formula> parts;
        for (std::size_t i = 0; i < n; ++i)
            for (Symbol c : symbols)
                if (auto d = push(i, c))
                    parts.push_back(implies(land_all({char_at(sym(c), "y"), pushes("x", "y"),
                                                      lor(mt.succ(i, "x", "y"), mt.fl(i, "x", "y"))}),
                                            in("y", MacroTable::p(*d))));
        return forall1("x", forall1("y", land_all(std::move(parts))));
    }

    Formula flush_fw()
    {
        std::vector<Formula> parts;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (auto d = flush(i, j))
                    parts.push_back(implies(mt.tree_ij(i, j, "x", "z", "w", "y"),
                                            land(in("x", MacroTable::m(*d)), mt.pred_in("y", MacroTable::f(*d)))));
        return forall1("x", forall1("z", forall1("w", forall1("y", land_all(std::move(parts))))));
    }

    Formula push_bw(bool adjacent)
    {
        std::vector<Formula> parts;
        for (std::size_t k = 0; k < n; ++k) {
            for (Symbol c : symbols) {
                std::vector<Formula> sources;
                for (std::size_t i = 0; i < n; ++i)
                    if (push(i, c) == static_cast<State>(k))
                        sources.push_back(adjacent ? mt.succ(i, "x", "y") : mt.fl(i, "x", "y"));
                Formula link = adjacent ? mso::succ("y", "x") : arrow("x", "y");
                parts.push_back(implies(land_all({char_at(sym(c), "y"), in("y", MacroTable::p(k)), link, pushes("x", "y")}),
                                        lor_all(std::move(sources))));
            }
        }
        return forall1("x", forall1("y", land_all(std::move(parts))));
    }

    // Some chain x ~ y with first and last body positions z and w whose flush lands in k.
    Formula flush_into(std::size_t k)
    {
        std::vector<Formula> cases;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (flush(i, j) == static_cast<State>(k)) cases.push_back(mt.tree_ij(i, j, "x", "z", "w", "y"));
        return lor_all(std::move(cases));
    }

    Formula flush_bw_m()
    {
        std::vector<Formula> parts;
        for (std::size_t k = 0; k < n; ++k)
            parts.push_back(implies(in("x", MacroTable::m(k)), exists1("y", exists1("z", exists1("w", flush_into(k))))));
        return forall1("x", land_all(std::move(parts)));
    }

    Formula flush_bw_f()
    {
        std::vector<Formula> parts;
        for (std::size_t k = 0; k < n; ++k)
            parts.push_back(
                implies(mt.pred_in("y", MacroTable::f(k)), exists1("x", exists1("z", exists1("w", flush_into(k))))));
        return forall1("y", land_all(std::move(parts)));
    }

    Formula flush_bw()
    {
        std::vector<Formula> parts;
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (flush(i, j) != static_cast<State>(k))
                        parts.push_back(lnot(land(mt.tree_ij(i, j, "x", "z", "w", "y"), mt.fl(k, "x", "y"))));
        return forall1("x", forall1("z", forall1("w", forall1("y", land_all(std::move(parts))))));
    }

    Formula push_exist()
    {
        std::vector<Formula> any;
        for (std::size_t i = 0; i < n; ++i) any.push_back(in("x", MacroTable::p(i)));
        return forall1("x", implies(le("x", "e"), lor_all(std::move(any))));
    }

    Formula flush_exist()
    {
        std::vector<Formula> any;
        for (std::size_t k = 0; k < n; ++k) any.push_back(mt.fl(k, "x", "y"));
        return forall1("x", forall1("y", implies(arrow("x", "y"), lor_all(std::move(any)))));
    }

    Formula push_unique()
    {
        std::vector<Formula> parts;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<Formula> others;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) others.push_back(in("x", MacroTable::p(j)));
            parts.push_back(implies(in("x", MacroTable::p(i)), lnot(lor_all(std::move(others)))));
        }
        return forall1("x", land_all(std::move(parts)));
    }

    Formula flush_unique()
    {
        std::vector<Formula> parts;
        for (std::size_t k = 0; k < n; ++k) {
            std::vector<Formula> others;
            for (std::size_t j = 0; j < n; ++j)
                if (j != k) others.push_back(mt.fl(j, "x", "y"));
            parts.push_back(implies(mt.fl(k, "x", "y"), lnot(lor_all(std::move(others)))));
        }
        return forall1("x", forall1("y", land_all(std::move(parts))));
    }

    // The root chain 0 ~ e+1 is flushed into k.
    Formula root_flush(std::size_t k)
    {
        return exists1("_a", exists1("_b", land_all({first("_a"), mso::succ("_b", "e"), mt.fl(k, "_a", "_b")})));
    }

    std::vector<std::pair<std::string, Formula>> frame(std::size_t start, const std::vector<std::size_t>& finals)
    {
        std::vector<Formula> accept;
        for (std::size_t k : finals) accept.push_back(root_flush(k));
        // The empty word has no root chain; it is accepted from a final start.
        if (std::find(finals.begin(), finals.end(), start) != finals.end()) accept.push_back(first("e"));
        return {
            {"start", exists1("_a", land(first("_a"), in("_a", MacroTable::p(start))))},
            {"end", land(lnot(exists1("_c", exists1("_b", land(mso::succ("_b", "e"), lt("_b", "_c"))))),
                         exists1("_b", land(mso::succ("_b", "e"), char_at("#", "_b"))))},
            {"accept", lor_all(std::move(accept))},
        };
    }

    std::vector<std::pair<std::string, Formula>> rules()
    {
        return {
            {"push_unique", push_unique()}, {"push_exist", push_exist()}, {"push_bw1", push_bw(true)},
            {"flush_bwM", flush_bw_m()},    {"flush_bwF", flush_bw_f()},  {"flush_exist", flush_exist()},
            {"flush_unique", flush_unique()}, {"push_fw", push_fw()},     {"push_bw2", push_bw(false)},
            {"flush_fw", flush_fw()},       {"flush_bw", flush_bw()},
        };
    }
};

Formula close(Formula body, std::size_t n)
{
    Formula f = exists1("e", std::move(body));
    for (std::size_t k = n; k-- > 0;) f = exists2(MacroTable::f(k), f);
    for (std::size_t k = n; k-- > 0;) f = exists2(MacroTable::m(k), f);
    for (std::size_t k = n; k-- > 0;) f = exists2(MacroTable::p(k), f);
    return f;
}

FloydAutomaton prepare(const FloydAutomaton& a)
{
    if (!is_deterministic(a) || a.initial.size() != 1)
        throw Error("expected a deterministic automaton with one initial state; determinize it first");
    return reindex_initial_first(a);
}

} // namespace

EncodedSentence fa_to_mso(const FloydAutomaton& input)
{
    EncodedSentence out;
    out.automaton = prepare(input);
    out.num_states = out.automaton.num_states();
    Encoder enc(out.automaton);
    std::vector<std::size_t> finals(out.automaton.final.begin(), out.automaton.final.end());
    out.conjuncts = enc.frame(0, finals);
    for (auto& r : enc.rules()) out.conjuncts.push_back(std::move(r));
    std::vector<Formula> parts;
    for (const auto& [name, f] : out.conjuncts) parts.push_back(f);
    // Left-nested so that evaluation tries the conjuncts in order.
    Formula body = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) body = land(body, parts[i]);
    out.body = body;
    out.sentence = close(body, out.num_states);
    out.macros = enc.mt.sites();
    return out;
}

Formula chain_sentence(const FloydAutomaton& input, std::size_t i, std::size_t k)
{
    FloydAutomaton a = prepare(input);
    Encoder enc(a);
    std::vector<Formula> parts{
        exists1("_a", land(first("_a"), in("_a", MacroTable::p(i)))),
        enc.root_flush(k),
    };
    for (auto& [name, f] : enc.rules()) parts.push_back(f);
    return close(land_all(std::move(parts)), a.num_states());
}

WitnessAssignment witness_assignment(const FloydAutomaton& input, const Word& s)
{
    const FloydAutomaton a = prepare(input);
    AcceptResult r = run(a, s);
    if (!r.accepted) throw Error("the automaton rejects the word; no witness exists");
    WitnessAssignment w;
    const std::size_t n = a.num_states();
    w.P.assign(n, {});
    w.M.assign(n, {});
    w.F.assign(n, {});
    w.e = s.size();
    w.P[r.trace->start.stack.front().state].insert(0);
    for (const auto& [move, conf] : r.trace->moves) {
        if (move.kind == MoveKind::Flush) {
            w.M[move.state].insert(move.arrow.left);
            w.F[move.state].insert(move.arrow.right - 1);
        } else {
            w.P[move.state].insert(conf.stack.back().src_pos);
        }
    }
    return w;
}

namespace {

struct Outer {
    std::vector<std::size_t> fo;
    std::vector<std::uint64_t> so;
};

Outer outer_of(const EncodedSentence& es, const Model& m, const WitnessAssignment& w)
{
    const std::size_t n = es.num_states;
    if (w.P.size() != n || w.M.size() != n || w.F.size() != n) throw Error("witness does not match the sentence's states");
    Outer o;
    o.fo.push_back(w.e);
    auto mask = [&](const std::set<std::size_t>& s) {
        std::uint64_t v = 0;
        for (std::size_t p : s) {
            if (p >= m.positions()) throw Error("witness position " + std::to_string(p) + " out of range");
            v |= std::uint64_t{1} << p;
        }
        return v;
    };
    for (const auto* group : {&w.P, &w.M, &w.F})
        for (const auto& s : *group) o.so.push_back(mask(s));
    return o;
}

} // namespace

bool check_witness(const EncodedSentence& es, const Word& s, const WitnessAssignment& w)
{
    const Model m(es.automaton.alphabet(), s);
    const Outer o = outer_of(es, m, w);
    if (o.fo[0] >= m.positions()) return false;
    return CompiledFormula(es.automaton.alphabet(), es.body, es.body_signature()).eval(m, o.fo, o.so);
}

std::vector<std::string> failed_conjuncts(const EncodedSentence& es, const Word& s, const WitnessAssignment& w)
{
    const Model m(es.automaton.alphabet(), s);
    const Outer o = outer_of(es, m, w);
    std::vector<std::string> out;
    const Signature sig = es.body_signature();
    for (const auto& [name, f] : es.conjuncts)
        if (!CompiledFormula(es.automaton.alphabet(), f, sig).eval(m, o.fo, o.so)) out.push_back(name);
    return out;
}

std::optional<WitnessAssignment> search_assignment(const EncodedSentence& es, const Word& s, SearchStats* stats)
{
    const OpAlphabet& alpha = es.automaton.alphabet();
    const Model m(alpha, s);
    const std::size_t n = es.num_states;
    const Signature sig = es.body_signature();
    SearchStats local;
    SearchStats& st = stats ? *stats : local;

    // Conjuncts grouped by the last set family they mention (P=0, M=1, F=2).
    std::vector<CompiledFormula> checks[3];
    for (const auto& [name, f] : es.conjuncts) {
        const Signature used = free_variables(f);
        int stage = 0;
        for (const auto& v : used.so) stage = std::max(stage, v[0] == 'P' ? 0 : v[0] == 'M' ? 1 : 2);
        checks[stage].emplace_back(alpha, f, sig);
    }

    std::vector<std::size_t> fo{s.size()};
    std::vector<std::uint64_t> so(3 * n, 0);
    auto passes = [&](int stage) {
        for (const auto& c : checks[stage])
            if (!c.eval(m, fo, so)) return false;
        return true;
    };

    std::set<std::size_t> sources, lefts;
    for (const ArrowPair& p : m.arrow_list()) {
        sources.insert(p.left);
        lefts.insert(p.right - 1);
    }
    const std::vector<std::size_t> src(sources.begin(), sources.end());
    const std::vector<std::size_t> lft(lefts.begin(), lefts.end());

    // Each listed position gets a subset of the states: 2^n choices.
    auto assign_subsets = [&](std::size_t base, const std::vector<std::size_t>& pos, std::uint64_t code) {
        for (std::size_t k = 0; k < n; ++k) so[base + k] = 0;
        for (std::size_t idx = 0; idx < pos.size(); ++idx) {
            const std::uint64_t states = (code >> (idx * n)) & ((std::uint64_t{1} << n) - 1);
            for (std::size_t k = 0; k < n; ++k)
                if ((states >> k) & 1u) so[base + k] |= std::uint64_t{1} << pos[idx];
        }
    };

    const std::size_t positions = s.size() + 1; // 0..e
    std::size_t p_total = 1;
    for (std::size_t i = 0; i < positions; ++i) p_total *= n;
    if (src.size() * n >= 63 || lft.size() * n >= 63) throw Error("word too long for the assignment search");
    const std::uint64_t m_total = std::uint64_t{1} << (src.size() * n);
    const std::uint64_t f_total = std::uint64_t{1} << (lft.size() * n);

    for (std::size_t pc = 0; pc < p_total; ++pc) {
        for (std::size_t k = 0; k < n; ++k) so[k] = 0;
        std::size_t code = pc;
        for (std::size_t p = 0; p < positions; ++p) {
            so[code % n] |= std::uint64_t{1} << p;
            code /= n;
        }
        if (!passes(0)) {
            ++st.pruned;
            continue;
        }
        for (std::uint64_t mc = 0; mc < m_total; ++mc) {
            assign_subsets(n, src, mc);
            if (!passes(1)) {
                ++st.pruned;
                continue;
            }
            for (std::uint64_t fc = 0; fc < f_total; ++fc) {
                assign_subsets(2 * n, lft, fc);
                ++st.assignments;
                if (!passes(2)) continue;
                WitnessAssignment w;
                w.e = s.size();
                for (auto* group : {&w.P, &w.M, &w.F}) group->assign(n, {});
                for (std::size_t k = 0; k < 3 * n; ++k) {
                    auto& target = k < n ? w.P[k] : k < 2 * n ? w.M[k - n] : w.F[k - 2 * n];
                    for (std::size_t p = 0; p < m.positions(); ++p)
                        if ((so[k] >> p) & 1u) target.insert(p);
                }
                return w;
            }
        }
    }
    return std::nullopt;
}

} // namespace floyd
