#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hh"
#include "fixtures.hh"
#include "floyd/harness.hh"

using namespace floyd;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result cli(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::filesystem::path scratch(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / "floyd-cli-tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_CASE("opm check")
{
    const Result r = cli({"opm", "check", fixture::path("fig1.opm")});
    CHECK(r.code == 0);
    CHECK(r.out == "well-formed: 6 symbols\n");

    const auto bad = scratch("bad.opm");
    std::ofstream(bad) << "alphabet: a\n# < a\na = a\na > #\n";
    const Result b = cli({"opm", "check", bad.string()});
    CHECK(b.code == 1);
    CHECK(!b.out.empty());
}

TEST_CASE("parse outputs")
{
    const std::string opm = fixture::path("fig1.opm");
    CHECK(cli({"parse", "--opm", opm, "--input", fixture::kFig1Word, "--arrows"}).out ==
          "{(1,3), (0,4), (6,8), (4,8), (0,9)}\n");
    CHECK(cli({"parse", "--opm", opm, "--input", fixture::kFig1Word, "--tree", "sexp"}).out ==
          "((hnd (call_a) rst) hnd (call_a ret_a (call_b)) rst)\n");
    const Result dot = cli({"parse", "--opm", opm, "--input", "hnd rst", "--tree", "dot"});
    CHECK(dot.out.find("digraph") != std::string::npos);
    const Result bad = cli({"parse", "--opm", opm, "--input", "ret_a"});
    CHECK(bad.code == 1);
    CHECK(bad.out == "incompatible\n");
    CHECK(cli({"parse", "--opm", opm, "--input", "jump"}).code == 2);
}

TEST_CASE("fa run with trace")
{
    const Result r = cli({"fa", "run", "--fa", fixture::path("example1.fa"), "--input", fixture::kFig1Word, "--trace"});
    CHECK(r.code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 15);
    std::vector<std::string> labels;
    for (std::size_t i = 1; i + 1 < ls.size(); ++i) labels.push_back(ls[i].substr(0, ls[i].find(' ')));
    CHECK(labels == std::vector<std::string>{"mark", "mark", "flush", "push", "flush", "mark", "mark", "push", "mark",
                                             "flush", "flush", "push", "flush"});
    CHECK(ls[13] == "flush | [# q0] | #");
    CHECK(ls[14] == "accept");
    CHECK(cli({"fa", "run", "--fa", fixture::path("example1.fa"), "--input", "call_a ret_a"}).code == 1);
}

TEST_CASE("automaton files round trip through the combinators")
{
    const std::string fa = fixture::path("example1.fa");
    const auto det = scratch("det.fa"), comp = scratch("comp.fa"), uni = scratch("union.fa");
    std::filesystem::copy_file(fixture::path("fig1.opm"), scratch("fig1.opm"),
                               std::filesystem::copy_options::overwrite_existing);
    REQUIRE(cli({"fa", "union", fa, fa, "-o", uni.string()}).code == 0);
    REQUIRE(cli({"fa", "det", uni.string(), "-o", det.string()}).code == 0);
    REQUIRE(cli({"fa", "complement", fa, "-o", comp.string()}).code == 0);
    const auto alpha = fixture::fig1();
    const FloydAutomaton a = fixture::example1(), d = load_fa(det), c = load_fa(comp);
    for_each_compatible(*alpha, 5, [&](const Word& w) {
        CHECK(accepts(d, w) == accepts(a, w));
        CHECK(accepts(c, w) != accepts(a, w));
    });
    const Result r = cli({"equiv", "--left", det.string(), "--right", fa, "--maxlen", "5"});
    CHECK(r.code == 0);
}

TEST_CASE("logic commands")
{
    const std::string opm = fixture::path("fig1.opm");
    const std::string ex3 = fixture::path("example3.mso");
    CHECK(cli({"mso", "eval", "--opm", opm, "--formula", ex3, "--input", fixture::kFig1Word}).out == "true\n");
    CHECK(cli({"mso", "eval", "--opm", opm, "--formula", ex3, "--input", "call_a ret_a"}).code == 1);

    const Result eq = cli({"equiv", "--left", fixture::path("example1.fa"), "--right", ex3, "--maxlen", "4"});
    CHECK(eq.code == 0);
    CHECK(eq.out.rfind("equivalent up to length 4", 0) == 0);
    const Result ne = cli({"equiv", "--left", fixture::path("example1.fa"), "--right", "max", "--maxlen", "2"});
    CHECK(ne.code == 1);
    CHECK(ne.out == "inequivalent: counterexample \"call_a ret_a\"\n");

    const auto enc = scratch("example1.mso");
    const Result to = cli({"fa", "to-mso", "--fa", fixture::path("example1.fa"), "-o", enc.string()});
    REQUIRE(to.code == 0);
    const Formula f = load_formula(enc);
    CHECK(free_variables(f).empty());
    CHECK(same_formula(f, fa_to_mso(fixture::example1()).sentence));
}

TEST_CASE("enumerate")
{
    const Result r = cli({"enumerate", "--opm", fixture::path("fig1.opm"), "--maxlen", "2"});
    CHECK(lines(r.out) == std::vector<std::string>{"", "call_a ret_a", "call_b ret_b", "hnd rst"});
}

TEST_CASE("usage errors")
{
    CHECK(cli({}).code == 2);
    CHECK(cli({"fa", "run", "--fa", "/nonexistent.fa", "--input", "hnd"}).code == 2);
    CHECK(cli({"parse", "--opm", fixture::path("fig1.opm")}).code == 2);
    CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("written automata read back with their language")
{
    // Duplicate names force the fallback numbering.
    FloydAutomaton a = fixture::example1();
    for (State q = 0; q < a.num_states(); ++q) a.set_state_name(q, "s");
    const auto path = scratch("renamed.fa");
    std::ofstream(path) << write_fa(a, "fig1.opm");
    std::filesystem::copy_file(fixture::path("fig1.opm"), scratch("fig1.opm"),
                               std::filesystem::copy_options::overwrite_existing);
    const FloydAutomaton b = load_fa(path);
    for_each_compatible(a.alphabet(), 5, [&](const Word& w) { CHECK(accepts(a, w) == accepts(b, w)); });
}
