#include "cli.hh"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <optional>

#include "floyd/combinators.hh"
#include "floyd/encode.hh"
#include "floyd/error.hh"
#include "floyd/eval.hh"
#include "floyd/harness.hh"
#include "floyd/io.hh"
#include "floyd/logic.hh"
#include "floyd/structure.hh"

namespace floyd {

namespace fs = std::filesystem;

namespace {

struct Options {
    std::string file, file2, opm, fa, formula, input, tree, output = "-", left, right;
    std::size_t maxlen = 0;
    bool arrows = false, trace = false;
};

// Reference to `opm` usable from a file written at `output`.
std::string opm_ref(const fs::path& opm, const std::string& output)
{
    if (output == "-") return opm.lexically_normal().string();
    const fs::path base = fs::absolute(fs::path(output)).parent_path();
    return fs::absolute(opm).lexically_normal().lexically_relative(base).string();
}

void emit(const std::string& text, const std::string& output, std::ostream& out)
{
    if (output == "-") {
        out << text;
        return;
    }
    std::ofstream f(output, std::ios::binary);
    if (!f) throw Error("cannot write '" + output + "'");
    f << text;
}

std::string word_text(const OpAlphabet& alpha, const Word& w)
{
    return "\"" + format_word(alpha, w) + "\"";
}

struct Side {
    std::optional<FloydAutomaton> fa;
    std::optional<Formula> formula;
};

// `arg` is an automaton file, a formula file (.mso) or `max`.
Side load_side(const std::string& arg)
{
    Side s;
    if (arg == "max") return s;
    if (fs::path(arg).extension() == ".mso") s.formula = load_formula(arg);
    else s.fa = load_fa(arg);
    return s;
}

int cmd_opm_check(const Options& o, std::ostream& out)
{
    const AlphabetPtr alpha = load_opm(o.file);
    const ValidationReport report = validate_alphabet(*alpha);
    if (report.empty()) {
        out << "well-formed: " << alpha->size() << " symbols\n";
        return 0;
    }
    for (const Issue& i : report) out << i.message << "\n";
    return 1;
}

int cmd_parse(const Options& o, std::ostream& out)
{
    const AlphabetPtr alpha = load_opm(o.opm);
    const Word w = parse_word(*alpha, o.input);
    if (!is_compatible(*alpha, w)) {
        out << "incompatible\n";
        return 1;
    }
    if (!o.arrows && o.tree.empty()) out << "compatible\n";
    if (o.arrows) {
        std::string line = "{";
        for (const ArrowPair& p : arrows(*alpha, w)) {
            if (line.size() > 1) line += ", ";
            line += "(" + std::to_string(p.left) + "," + std::to_string(p.right) + ")";
        }
        out << line << "}\n";
    }
    if (o.tree == "sexp") out << to_sexp(parse_tree(*alpha, w), *alpha) << "\n";
    else if (o.tree == "dot") out << to_dot(parse_tree(*alpha, w), *alpha);
    return 0;
}

int cmd_fa_run(const Options& o, std::ostream& out)
{
    const FloydAutomaton a = load_fa(o.fa);
    const Word w = parse_word(a.alphabet(), o.input);
    const AcceptResult r = run(a, w);
    if (o.trace && r.trace) out << format_trace(a, w, *r.trace);
    out << (r.accepted ? "accept" : "reject") << "\n";
    return r.accepted ? 0 : 1;
}

int cmd_fa_unary(const Options& o, std::ostream& out, FloydAutomaton (*op)(const FloydAutomaton&))
{
    const FloydAutomaton a = load_fa(o.file);
    emit(write_fa(op(a), opm_ref(fa_opm_path(o.file), o.output)), o.output, out);
    return 0;
}

int cmd_fa_union(const Options& o, std::ostream& out)
{
    const FloydAutomaton a = load_fa(o.file), b = load_fa(o.file2);
    emit(write_fa(unite(a, b), opm_ref(fa_opm_path(o.file), o.output)), o.output, out);
    return 0;
}

int cmd_fa_to_mso(const Options& o, std::ostream& out, std::ostream& err)
{
    FloydAutomaton a = load_fa(o.fa);
    if (!is_deterministic(a) || a.initial.size() != 1) {
        err << "note: automaton determinized before encoding\n";
        a = determinize(a);
    }
    emit(write_encoded(fa_to_mso(a)), o.output, out);
    return 0;
}

int cmd_mso_eval(const Options& o, std::ostream& out)
{
    const AlphabetPtr alpha = load_opm(o.opm);
    const Formula f = load_formula(o.formula);
    const bool v = eval(*alpha, parse_word(*alpha, o.input), f);
    out << (v ? "true" : "false") << "\n";
    return v ? 0 : 1;
}

int cmd_mso_compile(const Options& o, std::ostream& out, std::ostream& err)
{
    const AlphabetPtr alpha = load_opm(o.opm);
    CompileStats stats;
    const FloydAutomaton a = compile(alpha, load_formula(o.formula), {}, &stats);
    err << "compiled: " << a.num_states() << " states; widest alphabet " << stats.max_width
        << " components; largest intermediate " << stats.max_states << " states\n";
    emit(write_fa(a, opm_ref(o.opm, o.output)), o.output, out);
    return 0;
}

int cmd_equiv(const Options& o, std::ostream& out)
{
    Side l = load_side(o.left), r = load_side(o.right);
    AlphabetPtr alpha;
    if (l.fa) alpha = l.fa->alphabet_ptr();
    else if (r.fa) alpha = r.fa->alphabet_ptr();
    else if (!o.opm.empty()) alpha = load_opm(o.opm);
    else throw Error("no automaton side; pass --opm");
    auto side = [&](Side& s) -> LanguageSide {
        if (s.fa) return *s.fa;
        if (s.formula) return *s.formula;
        return max_automaton(alpha);
    };
    const EquivVerdict v = equiv(alpha, side(l), side(r), o.maxlen);
    if (v.equivalent) {
        out << "equivalent up to length " << v.bound << ": " << v.checked << " words, " << v.accepted_left
            << " accepted\n";
        return 0;
    }
    out << "inequivalent: counterexample " << word_text(*alpha, *v.counterexample) << "\n";
    return 1;
}

int cmd_enumerate(const Options& o, std::ostream& out)
{
    const AlphabetPtr alpha = load_opm(o.opm);
    for_each_compatible(*alpha, o.maxlen, [&](const Word& w) { out << format_word(*alpha, w) << "\n"; });
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Floyd automata and their logic", "floyd"};
    app.require_subcommand(1);
    Options o;

    auto* opm = app.add_subcommand("opm", "Precedence matrices")->require_subcommand(1);
    auto* opm_check = opm->add_subcommand("check", "Validate a matrix file");
    opm_check->add_option("FILE", o.file)->required();

    auto* parse = app.add_subcommand("parse", "Structure of a word under a matrix");
    parse->add_option("--opm", o.opm)->required();
    parse->add_option("--input", o.input)->required();
    parse->add_option("--tree", o.tree)->check(CLI::IsMember({"sexp", "dot"}));
    parse->add_flag("--arrows", o.arrows);

    auto* fa = app.add_subcommand("fa", "Automata")->require_subcommand(1);
    auto* fa_run = fa->add_subcommand("run", "Run an automaton on a word");
    fa_run->add_option("--fa", o.fa)->required();
    fa_run->add_option("--input", o.input)->required();
    fa_run->add_flag("--trace", o.trace);
    auto* fa_det = fa->add_subcommand("det", "Determinize");
    auto* fa_comp = fa->add_subcommand("complement", "Complement within the compatible words");
    for (auto* c : {fa_det, fa_comp}) {
        c->add_option("FILE", o.file)->required();
        c->add_option("-o", o.output);
    }
    auto* fa_union = fa->add_subcommand("union", "Union of two automata");
    fa_union->add_option("A", o.file)->required();
    fa_union->add_option("B", o.file2)->required();
    fa_union->add_option("-o", o.output);
    auto* fa_mso = fa->add_subcommand("to-mso", "Sentence describing the automaton's language");
    fa_mso->add_option("--fa", o.fa)->required();
    fa_mso->add_option("-o", o.output);

    auto* mso = app.add_subcommand("mso", "Formulas")->require_subcommand(1);
    auto* mso_eval = mso->add_subcommand("eval", "Evaluate a sentence on a word");
    auto* mso_compile = mso->add_subcommand("compile", "Compile a sentence into an automaton");
    for (auto* c : {mso_eval, mso_compile}) {
        c->add_option("--opm", o.opm)->required();
        c->add_option("--formula", o.formula)->required();
    }
    mso_eval->add_option("--input", o.input)->required();
    mso_compile->add_option("-o", o.output);

    auto* eq = app.add_subcommand("equiv", "Bounded language equivalence");
    eq->add_option("--left", o.left, "Automaton file, .mso sentence or 'max'")->required();
    eq->add_option("--right", o.right)->required();
    eq->add_option("--maxlen", o.maxlen)->required();
    eq->add_option("--opm", o.opm, "Alphabet when neither side is an automaton");

    auto* en = app.add_subcommand("enumerate", "List the compatible words, shortest first");
    en->add_option("--opm", o.opm)->required();
    en->add_option("--maxlen", o.maxlen)->required();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    try {
        if (*opm_check) return cmd_opm_check(o, out);
        if (*parse) return cmd_parse(o, out);
        if (*fa_run) return cmd_fa_run(o, out);
        if (*fa_det) return cmd_fa_unary(o, out, determinize);
        if (*fa_comp) return cmd_fa_unary(o, out, complement);
        if (*fa_union) return cmd_fa_union(o, out);
        if (*fa_mso) return cmd_fa_to_mso(o, out, err);
        if (*mso_eval) return cmd_mso_eval(o, out);
        if (*mso_compile) return cmd_mso_compile(o, out, err);
        if (*eq) return cmd_equiv(o, out);
        if (*en) return cmd_enumerate(o, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

} // namespace floyd
