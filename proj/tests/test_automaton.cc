#include <doctest.h>

#include <random>

#include "fixtures.hh"
#include "floyd/combinators.hh"
#include "floyd/fsa.hh"
#include "floyd/harness.hh"
#include "floyd/logic.hh"
#include "floyd/supports.hh"
#include "oracles.hh"

using namespace floyd;

namespace {

Configuration config(const OpAlphabet& a, std::vector<std::pair<std::string, State>> items, bool marked_top)
{
    Configuration c = initial_configuration(items.front().second);
    for (std::size_t i = 1; i < items.size(); ++i)
        c.stack.push_back({a.symbol(items[i].first), marked_top || i + 1 < items.size(), items[i].second, i});
    return c;
}

FloydAutomaton random_automaton(const AlphabetPtr& alpha, std::mt19937& rng, std::size_t states)
{
    FloydAutomaton a(alpha, states);
    std::bernoulli_distribution push(0.35), flush(0.3), coin(0.5);
    for (State q = 0; q < states; ++q) {
        if (q == 0 || coin(rng)) a.initial.insert(q);
        if (coin(rng)) a.final.insert(q);
        for (Symbol c = 0; c < alpha->size(); ++c)
            for (State p = 0; p < states; ++p)
                if (push(rng)) a.add_push(q, c, p);
        for (State r = 0; r < states; ++r)
            for (State p = 0; p < states; ++p)
                if (flush(rng)) a.add_flush(q, r, p);
    }
    return a;
}

// Each predicate receives the word and its membership in the operands.
void check_language(const FloydAutomaton& out, const std::vector<FloydAutomaton>& in, std::size_t bound,
                    const std::function<bool(const std::vector<bool>&)>& expect)
{
    for_each_compatible(out.alphabet(), bound, [&](const Word& w) {
        std::vector<bool> m;
        for (const auto& a : in) m.push_back(oracle::accepts(a, w));
        INFO(format_word(out.alphabet(), w));
        CHECK(oracle::accepts(out, w) == expect(m));
    });
}

bool same(const std::vector<bool>& m) { return m[0]; }

} // namespace

TEST_CASE("single steps from the figure 1 run")
{
    const auto alpha = fixture::fig1();
    const FloydAutomaton a = fixture::example1();
    const Word s = parse_word(*alpha, fixture::kFig1Word);

    Configuration c = config(*alpha, {{"#", 0}, {"hnd", 1}, {"call_a", 1}}, true);
    c.cursor = 2;
    const StepResult r = step(a, c, s);
    REQUIRE(r.status == StepStatus::Moved);
    REQUIRE(r.successors.size() == 1);
    CHECK(r.successors[0].first.kind == MoveKind::Flush);
    const auto& after = r.successors[0].second.stack;
    REQUIRE(after.size() == 2);
    CHECK(after.back().symbol == alpha->symbol("hnd"));
    CHECK(after.back().state == 1);

    CHECK(step(a, initial_configuration(0), {}).status == StepStatus::Halted);
    CHECK(step(a, initial_configuration(0), {}).successors.empty());
    const StepResult dead = step(a, initial_configuration(0), parse_word(*alpha, "ret_a"));
    CHECK(dead.status == StepStatus::UndefinedPrecedence);
    CHECK(dead.successors.empty());
}

TEST_CASE("membership examples")
{
    const auto alpha = fixture::fig1();
    const FloydAutomaton a = fixture::example1();
    CHECK(accepts(a, parse_word(*alpha, fixture::kFig1Word)));
    CHECK(!accepts(a, parse_word(*alpha, "call_a ret_a")));
    CHECK(accepts(a, {}));
    const FloydAutomaton max = max_automaton(alpha);
    CHECK(accepts(max, parse_word(*alpha, "call_a ret_a")));
    CHECK(!accepts(max, parse_word(*alpha, "ret_a")));
    CHECK(is_deterministic(a));
    CHECK(is_deterministic(max));
    CHECK(!is_deterministic(unite(a, a)));
}

TEST_CASE("engine agrees with the reference interpreter")
{
    const auto alpha = fixture::fig1();
    std::mt19937 rng(7);
    std::vector<FloydAutomaton> cases{fixture::example1(), max_automaton(alpha)};
    for (int i = 0; i < 6; ++i) cases.push_back(random_automaton(alpha, rng, 3));
    for (const auto& a : cases) {
        for (const Word& w : oracle::all_words(*alpha, 5)) {
            const AcceptResult r = run(a, w);
            REQUIRE(r.accepted == oracle::accepts(a, w));
            if (r.accepted) {
                CHECK(is_compatible(*alpha, w));
                REQUIRE(r.trace);
                CHECK(r.trace->moves.size() <= 2 * w.size() + 1);
            }
            if (is_deterministic(a) && a.initial.size() == 1) CHECK(r.explored_paths <= 1);
        }
    }
}

TEST_CASE("supports summarize acceptance")
{
    const auto alpha = fixture::fig1();
    std::mt19937 rng(11);
    std::vector<FloydAutomaton> cases{fixture::example1()};
    for (int i = 0; i < 4; ++i) cases.push_back(random_automaton(alpha, rng, 3));
    for (const auto& a : cases) {
        for_each_compatible(*alpha, 5, [&](const Word& w) {
            bool summary = false;
            for (const Support& sup : supports(a, w))
                summary = summary || (a.initial.count(sup.entry) && a.is_final(sup.exit));
            CHECK(summary == accepts(a, w));
        });
    }
    const auto fig = supports(fixture::example1(), parse_word(*alpha, fixture::kFig1Word));
    bool root = false;
    for (const Support& sup : fig) root = root || (sup.entry == 0 && sup.exit == 0 && sup.body.size() == 4);
    CHECK(root);
}

TEST_CASE("determinize preserves the language")
{
    const auto alpha = fixture::fig1();
    const FloydAutomaton a = fixture::example1();
    check_language(determinize(unite(a, a)), {a}, 5, same);
    std::mt19937 rng(3);
    for (int i = 0; i < 8; ++i) {
        const FloydAutomaton r = random_automaton(alpha, rng, 3);
        const FloydAutomaton d = determinize(r);
        CHECK(is_deterministic(d));
        CHECK(d.initial.size() <= 1);
        check_language(d, {r}, 5, same);
    }
}

TEST_CASE("complement partitions the compatible words")
{
    const auto alpha = fixture::fig1();
    const FloydAutomaton a = fixture::example1();
    const FloydAutomaton c = complement(a);
    CHECK(accepts(c, parse_word(*alpha, "call_a ret_a")));
    check_language(c, {a}, 5, [](const std::vector<bool>& m) { return !m[0]; });
    check_language(unite(a, c), {}, 5, [](const std::vector<bool>&) { return true; });
    std::mt19937 rng(5);
    for (int i = 0; i < 8; ++i) {
        const FloydAutomaton r = random_automaton(alpha, rng, 3);
        check_language(complement(r), {r}, 5, [](const std::vector<bool>& m) { return !m[0]; });
    }
}

TEST_CASE("union, intersection and their identities")
{
    const auto alpha = fixture::fig1();
    std::mt19937 rng(9);
    const FloydAutomaton a = fixture::example1();
    const FloydAutomaton e = empty_automaton(alpha);
    check_language(unite(a, a), {a}, 5, same);
    check_language(unite(a, e), {a}, 5, same);
    check_language(unite(e, a), {a}, 5, same);
    for (int i = 0; i < 6; ++i) {
        const FloydAutomaton x = random_automaton(alpha, rng, 3), y = random_automaton(alpha, rng, 2);
        check_language(unite(x, y), {x, y}, 5, [](const std::vector<bool>& m) { return m[0] || m[1]; });
        check_language(intersect(x, y), {x, y}, 5, [](const std::vector<bool>& m) { return m[0] && m[1]; });
    }
}

TEST_CASE("max automaton accepts exactly the compatible words")
{
    const auto alpha = fixture::fig1();
    const FloydAutomaton max = max_automaton(alpha);
    for (const Word& w : oracle::all_words(*alpha, 5)) CHECK(accepts(max, w) == is_compatible(*alpha, w));
}

TEST_CASE("reduction and minimization preserve the language")
{
    const auto alpha = fixture::fig1();
    std::mt19937 rng(13);
    for (int i = 0; i < 8; ++i) {
        const FloydAutomaton r = random_automaton(alpha, rng, 3);
        check_language(reduce(r), {r}, 5, same);
        const FloydAutomaton d = determinize(r);
        const FloydAutomaton m = minimize(d);
        CHECK(is_deterministic(m));
        CHECK(m.num_states() <= d.num_states() + 1);
        check_language(m, {r}, 5, same);
    }
}

TEST_CASE("lifted finite-state constraints")
{
    const auto alpha = fixture::fig1();
    const Symbol hnd = alpha->symbol("hnd");
    FiniteAutomaton has_hnd;
    has_hnd.num_states = 2;
    has_hnd.initial.insert(0);
    has_hnd.final.insert(1);
    for (Symbol c = 0; c < alpha->size(); ++c) {
        has_hnd.add(0, c, c == hnd ? 1 : 0);
        has_hnd.add(1, c, 1);
    }
    const FloydAutomaton lifted = lift_fsa(alpha, has_hnd);
    for_each_compatible(*alpha, 5, [&](const Word& w) {
        const bool contains = std::find(w.begin(), w.end(), hnd) != w.end();
        CHECK(accepts(lifted, w) == contains);
    });

    FiniteAutomaton none;
    none.num_states = 1;
    none.initial.insert(0);
    const FloydAutomaton empty = lift_fsa(alpha, none);
    for_each_compatible(*alpha, 4, [&](const Word& w) { CHECK(!accepts(empty, w)); });
}

TEST_CASE("projection of a constantly empty component")
{
    const auto alpha = fixture::fig1();
    const AlphabetPtr lifted = lift_alphabet(alpha, {"X"}, false);
    const FloydAutomaton a = fixture::example1();
    // Copy of A reading only symbols whose X bit is 0.
    FloydAutomaton wide(lifted, a.num_states());
    wide.initial = a.initial;
    wide.final = a.final;
    for (State q = 0; q < a.num_states(); ++q)
        for (Symbol c = 0; c < alpha->size(); ++c)
            for (State p : a.push_targets(q, c)) wide.add_push(q, lifted_symbol(*lifted, c, 0), p);
    for (const auto& [key, targets] : a.flush_entries())
        for (State p : targets) wide.add_flush(key.first, key.second, p);
    const FloydAutomaton projected = project(wide, alpha->size() + 1);
    check_language(projected, {a}, 4, same);

    const FloydAutomaton gone = project(empty_automaton(lifted), alpha->size() + 1);
    for_each_compatible(*alpha, 4, [&](const Word& w) { CHECK(!accepts(gone, w)); });
    CHECK_THROWS(project(wide, alpha->size()));
}

namespace {

FiniteAutomaton random_fsa(std::mt19937& rng, std::size_t states, std::size_t symbols)
{
    FiniteAutomaton a;
    a.num_states = states;
    std::bernoulli_distribution coin(0.35);
    for (State q = 0; q < states; ++q) {
        if (coin(rng)) a.initial.insert(q);
        if (coin(rng)) a.final.insert(q);
        for (Symbol c = 0; c < symbols; ++c)
            for (State p = 0; p < states; ++p)
                if (coin(rng)) a.add(q, c, p);
    }
    return a;
}

bool fsa_accepts(const FiniteAutomaton& a, const std::vector<Symbol>& w)
{
    StateSet cur = a.initial;
    for (Symbol c : w) {
        StateSet next;
        for (State q : cur) {
            auto it = a.delta.find({q, c});
            if (it != a.delta.end()) next.insert(it->second.begin(), it->second.end());
        }
        cur = std::move(next);
    }
    for (State q : cur)
        if (a.final.count(q)) return true;
    return false;
}

template <class F>
void for_each_string(std::size_t symbols, std::size_t maxlen, F&& f)
{
    std::vector<Symbol> w;
    auto rec = [&](auto&& self) -> void {
        f(w);
        if (w.size() == maxlen) return;
        for (Symbol c = 0; c < symbols; ++c) {
            w.push_back(c);
            self(self);
            w.pop_back();
        }
    };
    rec(rec);
}

} // namespace

TEST_CASE("plain finite automaton operations")
{
    constexpr std::size_t k = 3;
    std::mt19937 rng(17);
    for (int i = 0; i < 25; ++i) {
        const FiniteAutomaton x = random_fsa(rng, 4, k), y = random_fsa(rng, 3, k);
        const FiniteAutomaton d = fsa_determinize(x, k), m = fsa_minimize(x, k), c = fsa_complement(x, k);
        const FiniteAutomaton meet = fsa_intersect(x, y, k), join = fsa_unite(x, y);
        CHECK(fsa_is_deterministic(d));
        CHECK(fsa_is_deterministic(m));
        CHECK(m.num_states <= std::max<std::size_t>(d.num_states, 1));
        CHECK(fsa_minimize(m, k).num_states == m.num_states);
        for_each_string(k, 5, [&](const std::vector<Symbol>& w) {
            const bool in = fsa_accepts(x, w);
            CHECK(fsa_accepts(d, w) == in);
            CHECK(fsa_accepts(m, w) == in);
            CHECK(fsa_accepts(c, w) != in);
            CHECK(fsa_accepts(meet, w) == (in && fsa_accepts(y, w)));
            CHECK(fsa_accepts(join, w) == (in || fsa_accepts(y, w)));
        });
    }
}

TEST_CASE("symbol maps on plain finite automata")
{
    std::mt19937 rng(19);
    // Symbols 0..3 of the wide alphabet read as 0,1,0,1 of the narrow one.
    const std::vector<Symbol> fold{0, 1, 0, 1};
    for (int i = 0; i < 15; ++i) {
        const FiniteAutomaton narrow = random_fsa(rng, 3, 2), wide = random_fsa(rng, 3, 4);
        const FiniteAutomaton back = fsa_pullback(narrow, fold), fwd = fsa_pushforward(wide, fold);
        for_each_string(4, 4, [&](const std::vector<Symbol>& w) {
            std::vector<Symbol> image;
            for (Symbol c : w) image.push_back(fold[c]);
            CHECK(fsa_accepts(back, w) == fsa_accepts(narrow, image));
        });
        // A narrow word is accepted after pushforward iff some preimage is.
        for_each_string(2, 4, [&](const std::vector<Symbol>& v) {
            bool any = false;
            for_each_string(4, v.size(), [&](const std::vector<Symbol>& w) {
                if (w.size() != v.size()) return;
                for (std::size_t j = 0; j < w.size(); ++j)
                    if (fold[w[j]] != v[j]) return;
                any = any || fsa_accepts(wide, w);
            });
            CHECK(fsa_accepts(fwd, v) == any);
        });
    }
}
