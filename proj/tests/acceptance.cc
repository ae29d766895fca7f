// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

#include "cli.hh"
#include "fixtures.hh"
#include "floyd/combinators.hh"
#include "floyd/encode.hh"
#include "floyd/harness.hh"
#include "floyd/logic.hh"
#include "oracles.hh"

using namespace floyd;
using namespace floyd::mso;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body)
{
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("criterion %2d: %s  %s: %s (%.2f s)\n", id, o.pass ? "PASS" : "FAIL", title.c_str(), o.detail.c_str(),
                secs);
    std::fflush(stdout);
}

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::pair<int, std::string> cli(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str()};
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

// Runs `fn` in a child process with a wall-clock deadline and an address
// space cap. Returns the child's exit code, or -1 on timeout or crash.
int run_bounded(const std::function<int()>& fn, unsigned seconds, std::size_t bytes, std::string& why)
{
    std::fflush(stdout);
    const pid_t pid = fork();
    if (pid == 0) {
        rlimit lim{bytes, bytes};
        setrlimit(RLIMIT_AS, &lim);
        int code = 3;
        try {
            code = fn();
        } catch (const std::exception& e) {
            std::fprintf(stderr, "%s\n", e.what());
        }
        std::fflush(nullptr);
        _exit(code);
    }
    const auto t0 = Clock::now();
    int status = 0;
    while (waitpid(pid, &status, WNOHANG) == 0) {
        if (since(t0) > seconds) {
            kill(pid, SIGKILL);
            waitpid(pid, &status, 0);
            why = "no result within " + std::to_string(seconds) + " s";
            return -1;
        }
        usleep(100000);
    }
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    why = "terminated by signal " + std::to_string(WTERMSIG(status)) + " (memory cap " +
          std::to_string(bytes >> 30) + " GiB)";
    return -1;
}

const std::vector<std::string> kFig1Labels{"mark", "mark", "flush", "push",  "flush", "mark", "mark",
                                           "push", "mark", "flush", "flush", "push",  "flush"};

} // namespace

int main()
{
    const AlphabetPtr alpha = fixture::fig1();
    const FloydAutomaton ex1 = fixture::example1();
    const Formula ex3 = fixture::example3();
    const Formula ex4 = fixture::example4();
    const std::string opm = fixture::path("fig1.opm");

    report(1, "figure 1 run", [&]() -> Outcome {
        const auto t0 = Clock::now();
        auto [code, out] = cli({"fa", "run", "--fa", fixture::path("example1.fa"), "--input", fixture::kFig1Word,
                                "--trace"});
        const double secs = since(t0);
        const auto ls = lines(out);
        std::vector<std::string> labels;
        for (std::size_t i = 1; i + 1 < ls.size(); ++i) labels.push_back(ls[i].substr(0, ls[i].find(' ')));
        const bool final_ok = ls.size() >= 2 && ls[ls.size() - 2].ends_with("| [# q0] | #");
        const bool ok = code == 0 && labels == kFig1Labels && final_ok && ls.back() == "accept" && secs < 1.0;
        return {ok, std::to_string(labels.size()) + " moves, final configuration " +
                        (final_ok ? "<# q0, #>" : "wrong")};
    });

    report(2, "arrow set", [&]() -> Outcome {
        auto [code, out] = cli({"parse", "--opm", opm, "--input", fixture::kFig1Word, "--arrows"});
        const std::string want = "{(1,3), (0,4), (6,8), (4,8), (0,9)}\n";
        return {code == 0 && out == want, out.substr(0, out.size() - 1)};
    });

    report(3, "parse tree", [&]() -> Outcome {
        auto [code, out] = cli({"parse", "--opm", opm, "--input", fixture::kFig1Word, "--tree", "sexp"});
        const std::string want = "((hnd (call_a) rst) hnd (call_a ret_a (call_b)) rst)\n";
        return {code == 0 && out == want, out.substr(0, out.size() - 1)};
    });

    report(4, "example 3 sentence vs example 1 automaton", [&]() -> Outcome {
        const auto t0 = Clock::now();
        const EquivVerdict v = equiv(alpha, ex1, ex3, 6);
        const bool ok = v.equivalent && since(t0) < 300;
        return {ok, std::to_string(v.checked) + " compatible words up to length 6, " +
                        std::to_string(v.accepted_left) + " accepted"};
    });

    report(5, "example 4 restriction", [&]() -> Outcome {
        const Formula both = land(ex3, ex4);
        const auto narrow = sentence_language_bounded(*alpha, both, 6);
        const auto wide = sentence_language_bounded(*alpha, ex3, 6);
        bool subset = true;
        for (const Word& w : narrow) subset = subset && std::find(wide.begin(), wide.end(), w) != wide.end();
        const Word probe = parse_word(*alpha, "hnd call_b hnd rst rst");
        const bool split = eval(*alpha, probe, ex3) && !eval(*alpha, probe, both);
        return {subset && narrow.size() < wide.size() && split,
                std::to_string(narrow.size()) + " of " + std::to_string(wide.size()) + " words kept; probe " +
                    (split ? "separates" : "does not separate")};
    });

    report(6, "sentence to automaton", [&]() -> Outcome {
        // Figure 2 arrow automaton in isolation.
        const AlphabetPtr lifted = formula_alphabet(alpha, {"x", "y"});
        const FloydAutomaton arrow_fa = arrow_automaton(lifted, 0, 1);
        const NormalFormula atom = normalize_open(arrow("x", "y"));
        std::size_t checked = 0, wrong = 0;
        for_each_compatible(*alpha, 2, [&](const Word& s) {
            const std::uint64_t per = std::uint64_t{1} << (s.size() + 2);
            for (std::uint64_t x = 0; x < per; ++x)
                for (std::uint64_t y = 0; y < per; ++y) {
                    const bool expected = eval_normalized(*alpha, Model(*alpha, s), atom, {{"x", x}, {"y", y}});
                    ++checked;
                    wrong += oracle::accepts(arrow_fa, oracle::lifted_word(*lifted, s, {x, y})) != expected;
                }
        });
        std::string detail = "arrow atom " + std::to_string(checked - wrong) + "/" + std::to_string(checked) +
                             " lifted words of length <= 4; ";

        const auto out = std::filesystem::temp_directory_path() / "floyd-acceptance-example3.fa";
        std::filesystem::remove(out);
        std::string why;
        const int code = run_bounded(
            [&] {
                return cli({"mso", "compile", "--opm", opm, "--formula", fixture::path("example3.mso"), "-o",
                            out.string()})
                    .first;
            },
            600, std::size_t{8} << 30, why);
        if (code != 0) return {false, detail + "compile failed: " + (why.empty() ? "exit " + std::to_string(code) : why)};
        const FloydAutomaton compiled = load_fa(out);
        const EquivVerdict v = equiv(alpha, compiled, ex1, 4);
        detail += "compiled " + std::to_string(compiled.num_states()) + " states, " +
                  (v.equivalent ? "equivalent" : "inequivalent") + " up to length 4";
        return {wrong == 0 && v.equivalent, detail};
    });

    report(7, "automaton to sentence, soundness", [&]() -> Outcome {
        const EncodedSentence es = fa_to_mso(ex1);
        std::size_t accepted = 0, passed = 0;
        for_each_compatible(*alpha, 6, [&](const Word& s) {
            if (!accepts(ex1, s)) return;
            ++accepted;
            passed += check_witness(es, s, witness_assignment(ex1, s));
        });
        return {accepted > 0 && passed == accepted,
                std::to_string(passed) + "/" + std::to_string(accepted) + " accepted words up to length 6"};
    });

    report(8, "automaton to sentence, completeness", [&]() -> Outcome {
        const auto t0 = Clock::now();
        const EncodedSentence es = fa_to_mso(ex1);
        std::size_t words = 0, agree = 0;
        SearchStats stats;
        for_each_compatible(*alpha, 3, [&](const Word& s) {
            ++words;
            agree += search_assignment(es, s, &stats).has_value() == accepts(ex1, s);
        });
        return {agree == words && since(t0) < 300,
                std::to_string(agree) + "/" + std::to_string(words) + " words up to length 3, " +
                    std::to_string(stats.assignments) + " assignments tried"};
    });

    report(9, "combinator properties", [&]() -> Outcome {
        const auto t0 = Clock::now();
        const FloydAutomaton twice = unite(ex1, ex1);
        const FloydAutomaton det = determinize(twice);
        const FloydAutomaton comp = complement(ex1);
        const FloydAutomaton empty = empty_automaton(alpha);
        const FloydAutomaton with_empty = unite(ex1, empty);
        const FloydAutomaton max = max_automaton(alpha);
        std::size_t words = 0, bad = 0;
        for (const Word& s : oracle::all_words(*alpha, 5)) {
            const bool compatible = is_compatible(*alpha, s);
            bad += accepts(max, s) != compatible;
            if (!compatible) continue;
            ++words;
            const bool in = oracle::accepts(ex1, s);
            bad += oracle::accepts(det, s) != in;
            bad += oracle::accepts(comp, s) == in;
            bad += oracle::accepts(twice, s) != in;
            bad += oracle::accepts(with_empty, s) != in;
        }
        return {bad == 0 && since(t0) < 300,
                std::to_string(words) + " compatible words up to length 5, " + std::to_string(bad) + " violations"};
    });

    report(10, "witness on the figure 1 string", [&]() -> Outcome {
        const Word s = parse_word(*alpha, fixture::kFig1Word);
        const WitnessAssignment w = witness_assignment(ex1, s);
        const oracle::Witness derived = oracle::witness_from_run(ex1, s);
        using Sets = std::vector<std::set<std::size_t>>;
        const WitnessAssignment listed{Sets{{0}, {1, 2, 3, 4, 5, 6, 7, 8}}, Sets{{0}, {1, 4, 6}}, Sets{{3, 8}, {2, 7}}, 8};
        const bool same_derived = w.P == derived.P && w.M == derived.M && w.F == derived.F && w.e == derived.e;
        return {w == listed && same_derived,
                std::string(w == listed ? "matches the listed sets" : "differs from the listed sets") + ", " +
                    (same_derived ? "matches" : "differs from") + " the reference run"};
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
