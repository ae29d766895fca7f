#include <doctest.h>

#include "fixtures.hh"
#include "floyd/combinators.hh"
#include "floyd/encode.hh"
#include "floyd/error.hh"
#include "floyd/harness.hh"
#include "floyd/supports.hh"
#include "oracles.hh"

using namespace floyd;
using namespace floyd::mso;

namespace {

using Sets = std::vector<std::set<std::size_t>>;

WitnessAssignment from_oracle(const oracle::Witness& w)
{
    return {w.P, w.M, w.F, w.e};
}

// Strips the binder prefix of a closed encoding.
Formula body_of(Formula f)
{
    while (f->kind == FormulaKind::ExistsSO || f->kind == FormulaKind::ExistsFO) f = f->left;
    return f;
}

Assignment outer(const WitnessAssignment& w)
{
    Assignment rho;
    rho.fo["e"] = w.e;
    for (std::size_t k = 0; k < w.P.size(); ++k) {
        rho.so[MacroTable::p(k)] = w.P[k];
        rho.so[MacroTable::m(k)] = w.M[k];
        rho.so[MacroTable::f(k)] = w.F[k];
    }
    return rho;
}

} // namespace

TEST_CASE("sentence shape")
{
    const EncodedSentence es = fa_to_mso(fixture::example1());
    CHECK(es.num_states == 2);
    CHECK(free_variables(es.sentence).empty());
    std::size_t so = 0, fo = 0;
    Formula f = es.sentence;
    for (; f->kind == FormulaKind::ExistsSO; f = f->left) ++so;
    for (; f->kind == FormulaKind::ExistsFO; f = f->left) ++fo;
    CHECK(so == 6);
    CHECK(fo == 1);
    CHECK(same_formula(f, es.body));
    CHECK(es.conjuncts.size() == 14);
    CHECK_THROWS_AS(fa_to_mso(unite(fixture::example1(), fixture::example1())), Error);
}

TEST_CASE("macro expansions are shared")
{
    const FloydAutomaton a = fixture::example1();
    MacroTable mt(a);
    CHECK(mt.fl(1, "x", "y") == mt.fl(1, "x", "y"));
    CHECK(mt.tree("x", "z", "w", "y") == mt.tree("x", "z", "w", "y"));
    CHECK(mt.sites().count("fl1(x,y)") == 1);
    CHECK(mt.sites().at("fl1(x,y)").uses == 2);
}

TEST_CASE("precedence macro matches the matrix")
{
    const auto alpha = fixture::fig1();
    const FloydAutomaton a = fixture::example1();
    MacroTable mt(a);
    for (PrecRel rel : {PrecRel::Yields, PrecRel::Equal, PrecRel::Takes}) {
        const Formula f = mt.prec(rel, "x", "y");
        for_each_compatible(*alpha, 3, [&](const Word& s) {
            const Model m(*alpha, s);
            for (std::size_t x = 0; x < m.positions(); ++x)
                for (std::size_t y = 0; y < m.positions(); ++y) {
                    Assignment rho;
                    rho.fo = {{"x", x}, {"y", y}};
                    CHECK(eval(*alpha, s, f, rho) == (alpha->prec(m.symbol_at(x), m.symbol_at(y)) == rel));
                }
        });
    }
}

TEST_CASE("every arrow has exactly one tree decomposition")
{
    const auto alpha = fixture::fig1();
    const FloydAutomaton a = fixture::example1();
    MacroTable mt(a);
    const Formula tree = mt.tree("x", "z", "w", "y");
    for_each_compatible(*alpha, 5, [&](const Word& s) {
        if (s.empty()) return;
        const Model m(*alpha, s);
        for (const ArrowPair& p : arrows(*alpha, s)) {
            std::size_t found = 0, z0 = 0, w0 = 0;
            for (std::size_t z = p.left + 1; z < p.right; ++z)
                for (std::size_t w = z; w < p.right; ++w) {
                    Assignment rho;
                    rho.fo = {{"x", p.left}, {"z", z}, {"w", w}, {"y", p.right}};
                    if (eval(*alpha, s, tree, rho)) {
                        ++found;
                        z0 = z;
                        w0 = w;
                    }
                }
            CHECK(found == 1);
            // For a simple chain the body spans x+1..y-1.
            bool simple = true;
            for (const ArrowPair& q : arrows(*alpha, s))
                simple = simple && !(q.left >= p.left && q.right <= p.right && q != p);
            if (simple) {
                CHECK(z0 == p.left + 1);
                CHECK(w0 == p.right - 1);
            }
        }
    });
}

TEST_CASE("witness examples")
{
    const auto alpha = fixture::fig1();
    const FloydAutomaton a = fixture::example1();
    const WitnessAssignment w = witness_assignment(a, parse_word(*alpha, "hnd rst"));
    CHECK(w.P == Sets{{0}, {1, 2}});
    CHECK(w.M == Sets{{0}, {}});
    CHECK(w.F == Sets{{2}, {}});
    CHECK(w.e == 2);
    CHECK_THROWS_AS(witness_assignment(a, parse_word(*alpha, "call_a ret_a")), Error);
}

TEST_CASE("witnesses match the reference run and satisfy the sentence")
{
    const auto alpha = fixture::fig1();
    const FloydAutomaton a = fixture::example1();
    const EncodedSentence es = fa_to_mso(a);
    for_each_compatible(*alpha, 5, [&](const Word& s) {
        if (!accepts(a, s)) return;
        const WitnessAssignment w = witness_assignment(a, s);
        CHECK(w == from_oracle(oracle::witness_from_run(a, s)));
        INFO(format_word(*alpha, s));
        CHECK(failed_conjuncts(es, s, w).empty());
        std::size_t covered = 0;
        for (const auto& p : w.P) covered += p.size();
        CHECK(covered == s.size() + 1);
    });
}

TEST_CASE("mutated witnesses are rejected")
{
    const auto alpha = fixture::fig1();
    const FloydAutomaton a = fixture::example1();
    const EncodedSentence es = fa_to_mso(a);
    const Word s = parse_word(*alpha, fixture::kFig1Word);
    const WitnessAssignment w = witness_assignment(a, s);
    REQUIRE(check_witness(es, s, w));

    WitnessAssignment moved = w;
    moved.P[1].erase(5);
    moved.P[0].insert(5);
    CHECK(!check_witness(es, s, moved));

    WitnessAssignment no_m = w;
    no_m.M[1].clear();
    const auto failed = failed_conjuncts(es, s, no_m);
    CHECK(std::find(failed.begin(), failed.end(), "flush_exist") != failed.end());

    // A second membership for a position always breaks uniqueness.
    for (std::size_t p = 0; p <= w.e; ++p) {
        WitnessAssignment twice = w;
        for (std::size_t k = 0; k < 2; ++k) twice.P[k].insert(p);
        const auto f = failed_conjuncts(es, s, twice);
        CHECK(std::find(f.begin(), f.end(), "push_unique") != f.end());
    }
    for (const ArrowPair& arr : arrows(*alpha, s)) {
        WitnessAssignment twice = w;
        for (std::size_t k = 0; k < 2; ++k) {
            twice.M[k].insert(arr.left);
            twice.F[k].insert(arr.right - 1);
        }
        CHECK(!check_witness(es, s, twice));
    }
}

TEST_CASE("per-chain sentences")
{
    const auto alpha = fixture::fig1();
    const FloydAutomaton a = fixture::example1();
    const Word s = parse_word(*alpha, fixture::kFig1Word);
    const WitnessAssignment w = witness_assignment(a, s);
    const Formula to_q0 = chain_sentence(a, 0, 0);
    const Formula to_q1 = chain_sentence(a, 0, 1);
    CHECK(free_variables(to_q0).empty());
    CHECK(eval(*alpha, s, body_of(to_q0), outer(w)));
    CHECK(!eval(*alpha, s, body_of(to_q1), outer(w)));
}

TEST_CASE("full search agrees with acceptance and supports")
{
    const auto alpha = fixture::fig1();
    std::vector<FloydAutomaton> cases{fixture::example1(), max_automaton(alpha)};
    for (const FloydAutomaton& a : cases) {
        const EncodedSentence es = fa_to_mso(a);
        for_each_compatible(*alpha, 3, [&](const Word& s) {
            const auto found = search_assignment(es, s);
            INFO(format_word(*alpha, s));
            CHECK(found.has_value() == accepts(a, s));
            if (!found) return;
            CHECK(check_witness(es, s, *found));
            bool support = false;
            for (const Support& sup : supports(a, s))
                support = support || (a.initial.count(sup.entry) && a.is_final(sup.exit));
            CHECK(support);
        });
    }
    const EncodedSentence es = fa_to_mso(fixture::example1());
    CHECK(!search_assignment(es, parse_word(*alpha, "call_a ret_a")).has_value());
}

TEST_CASE("nondeterministic input is determinized by the caller")
{
    const FloydAutomaton a = fixture::example1();
    const FloydAutomaton d = determinize(unite(a, a));
    const EncodedSentence es = fa_to_mso(d);
    const auto alpha = fixture::fig1();
    for_each_compatible(*alpha, 5, [&](const Word& s) {
        if (accepts(d, s)) CHECK(check_witness(es, s, witness_assignment(d, s)));
    });
}
