#include "floyd/io.hh"

#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

#include "floyd/error.hh"
#include "floyd/structure.hh"

namespace floyd {

namespace {

std::string strip_comment(std::string_view line)
{
    const auto pct = line.find('%');
    std::string s(line.substr(0, pct));
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s)
{
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string t; in >> t;) out.push_back(t);
    return out;
}

[[noreturn]] void fail(std::size_t line, const std::string& what)
{
    throw SyntaxError("line " + std::to_string(line) + ": " + what);
}

// Splits "key: rest" and returns false if the line has no key.
bool keyed(const std::string& line, std::string& key, std::string& rest)
{
    const auto colon = line.find(':');
    if (colon == std::string::npos) return false;
    key = strip_comment(line.substr(0, colon));
    rest = strip_comment(line.substr(colon + 1));
    return is_identifier(key);
}

template <class Fn> void for_lines(std::string_view text, Fn fn)
{
    std::size_t no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++no;
        const std::string line = strip_comment(text.substr(start, end - start));
        if (!line.empty()) fn(no, line);
        start = end + 1;
    }
}

} // namespace

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

AlphabetPtr parse_opm(std::string_view text)
{
    std::shared_ptr<OpAlphabet> alpha;
    for_lines(text, [&](std::size_t no, const std::string& line) {
        std::string key, rest;
        if (keyed(line, key, rest)) {
            if (key != "alphabet") fail(no, "unknown key '" + key + "'");
            if (alpha) fail(no, "duplicate alphabet line");
            auto names = split(rest);
            for (const auto& n : names)
                if (!is_identifier(n)) fail(no, "bad symbol name '" + n + "'");
            try {
                alpha = std::make_shared<OpAlphabet>(std::move(names));
            } catch (const Error& e) {
                fail(no, e.what());
            }
            return;
        }
        if (!alpha) fail(no, "relation before the alphabet line");
        const auto t = split(line);
        if (t.size() != 3 || t[1].size() != 1) fail(no, "expected 'a REL b'");
        const auto rel = prec_from_char(t[1][0]);
        if (!rel) fail(no, "unknown relation '" + t[1] + "'");
        const auto a = alpha->find(t[0]), b = alpha->find(t[2]);
        if (!a) fail(no, "unknown symbol '" + t[0] + "'");
        if (!b) fail(no, "unknown symbol '" + t[2] + "'");
        if (const auto old = alpha->prec(*a, *b); old && *old != *rel)
            fail(no, "conflicting relation for " + t[0] + " " + t[2]);
        alpha->set(*a, *b, *rel);
    });
    if (!alpha) throw SyntaxError("missing alphabet line");
    return alpha;
}

std::string write_opm(const OpAlphabet& alpha)
{
    std::string out = "alphabet:";
    for (const auto& n : alpha.names()) out += " " + n;
    out += "\n";
    std::vector<Symbol> all;
    for (Symbol c = 0; c < alpha.size(); ++c) all.push_back(c);
    all.push_back(kSharp);
    for (Symbol a : all)
        for (Symbol b : all)
            if (auto r = alpha.prec(a, b); r && !(a == kSharp && b == kSharp))
                out += (a == kSharp ? std::string("#") : alpha.name(a)) + " " + to_char(*r) + " " +
                       (b == kSharp ? std::string("#") : alpha.name(b)) + "\n";
    return out;
}

AlphabetPtr load_opm(const std::filesystem::path& path)
{
    try {
        return parse_opm(read_file(path));
    } catch (const SyntaxError& e) {
        throw SyntaxError(path.string() + ": " + e.what());
    }
}

namespace {

FloydAutomaton parse_fa_body(std::string_view text, const AlphabetPtr& alpha)
{
    std::optional<FloydAutomaton> a;
    auto state = [&](std::size_t no, const std::string& name) {
        if (!a) fail(no, "transition or state set before the states line");
        auto q = a->find_state(name);
        if (!q) fail(no, "unknown state '" + name + "'");
        return *q;
    };
    for_lines(text, [&](std::size_t no, const std::string& line) {
        std::string key, rest;
        if (!keyed(line, key, rest)) fail(no, "expected 'key: ...'");
        const auto t = split(rest);
        if (key == "opm") return;
        if (key == "states") {
            if (a) fail(no, "duplicate states line");
            a.emplace(alpha, t.size());
            for (std::size_t i = 0; i < t.size(); ++i) {
                if (!is_identifier(t[i])) fail(no, "bad state name '" + t[i] + "'");
                if (a->find_state(t[i]) && *a->find_state(t[i]) < i) fail(no, "duplicate state '" + t[i] + "'");
                a->set_state_name(static_cast<State>(i), t[i]);
            }
        } else if (key == "initial" || key == "final") {
            for (const auto& n : t) (key == "initial" ? a->initial : a->final).insert(state(no, n));
        } else if (key == "push" || key == "flush") {
            if (t.size() != 4 || t[2] != "->") fail(no, "expected '" + key + ": q x -> p'");
            const State from = state(no, t[0]), to = state(no, t[3]);
            if (key == "push") {
                const auto c = alpha->find(t[1]);
                if (!c) fail(no, "unknown symbol '" + t[1] + "'");
                a->add_push(from, *c, to);
            } else {
                a->add_flush(from, state(no, t[1]), to);
            }
        } else {
            fail(no, "unknown key '" + key + "'");
        }
    });
    if (!a) throw SyntaxError("missing states line");
    return std::move(*a);
}

} // namespace

FloydAutomaton parse_fa(std::string_view text, const AlphabetPtr& alpha)
{
    return parse_fa_body(text, alpha);
}

namespace {

std::filesystem::path opm_of(const std::filesystem::path& path, const std::string& text)
{
    std::optional<std::string> ref;
    for_lines(text, [&](std::size_t, const std::string& line) {
        std::string key, rest;
        if (keyed(line, key, rest) && key == "opm") ref = rest;
    });
    if (!ref) throw SyntaxError(path.string() + ": missing opm line");
    std::filesystem::path opm(*ref);
    if (opm.is_relative()) opm = path.parent_path() / opm;
    return opm;
}

} // namespace

std::filesystem::path fa_opm_path(const std::filesystem::path& path)
{
    return opm_of(path, read_file(path));
}

FloydAutomaton load_fa(const std::filesystem::path& path)
{
    const std::string text = read_file(path);
    const AlphabetPtr alpha = load_opm(opm_of(path, text));
    try {
        return parse_fa_body(text, alpha);
    } catch (const SyntaxError& e) {
        throw SyntaxError(path.string() + ": " + e.what());
    }
}

std::string write_fa(const FloydAutomaton& a, const std::string& opm_ref)
{
    const OpAlphabet& alpha = a.alphabet();
    // Names that would not read back are replaced by q0, q1, ...
    std::set<std::string> seen;
    bool readable = true;
    for (State q = 0; q < a.num_states() && readable; ++q)
        readable = is_identifier(a.state_name(q)) && seen.insert(a.state_name(q)).second;
    auto name = [&](State q) { return readable ? a.state_name(q) : "q" + std::to_string(q); };

    std::string out = "opm: " + opm_ref + "\nstates:";
    for (State q = 0; q < a.num_states(); ++q) out += " " + name(q);
    out += "\ninitial:";
    for (State q : a.initial) out += " " + name(q);
    out += "\nfinal:";
    for (State q : a.final) out += " " + name(q);
    out += "\n";
    for (State q = 0; q < a.num_states(); ++q)
        for (Symbol c = 0; c < alpha.size(); ++c)
            for (State p : a.push_targets(q, c)) out += "push: " + name(q) + " " + alpha.name(c) + " -> " + name(p) + "\n";
    for (const auto& [key, targets] : a.flush_entries())
        for (State p : targets) out += "flush: " + name(key.first) + " " + name(key.second) + " -> " + name(p) + "\n";
    return out;
}

Formula load_formula(const std::filesystem::path& path)
{
    try {
        return parse_formula(read_file(path));
    } catch (const SyntaxError& e) {
        throw SyntaxError(path.string() + ": " + e.what());
    }
}

std::string write_encoded(const EncodedSentence& es)
{
    std::string out = "% states:";
    for (State q = 0; q < es.automaton.num_states(); ++q) out += " " + es.automaton.state_name(q);
    out += "\n% macro expansions (name(args): uses)\n";
    for (const auto& [key, site] : es.macros) out += "%   " + key + ": " + std::to_string(site.uses) + "\n";
    out += to_text(es.sentence) + "\n";
    return out;
}

} // namespace floyd
