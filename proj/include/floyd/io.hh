#ifndef FLOYD_IO_HH
#define FLOYD_IO_HH

#include <filesystem>
#include <string>
#include <string_view>

#include "floyd/automaton.hh"
#include "floyd/encode.hh"
#include "floyd/formula.hh"

namespace floyd {

// Alphabet files:
//   alphabet: a b c
//   a < b          (one relation per line; < = > for yields, equal, takes)
// Automaton files:
//   opm: path/to/file.opm   (relative to the automaton file)
//   states: q0 q1
//   initial: q0
//   final: q1
//   push: q0 a -> q1
//   flush: q1 q0 -> q0
// `%` starts a comment in both.

AlphabetPtr parse_opm(std::string_view text);
std::string write_opm(const OpAlphabet& alpha);
AlphabetPtr load_opm(const std::filesystem::path& path);

/// Parses an automaton over `alpha`, ignoring any `opm:` line.
FloydAutomaton parse_fa(std::string_view text, const AlphabetPtr& alpha);
/// Loads an automaton and the alphabet its `opm:` line names.
FloydAutomaton load_fa(const std::filesystem::path& path);
/// Path of the alphabet an automaton file refers to.
std::filesystem::path fa_opm_path(const std::filesystem::path& path);
/// `opm_ref` is written verbatim as the `opm:` line.
std::string write_fa(const FloydAutomaton& a, const std::string& opm_ref);

Formula load_formula(const std::filesystem::path& path);
/// The sentence, preceded by the expansion sites as comments.
std::string write_encoded(const EncodedSentence& es);

std::string read_file(const std::filesystem::path& path);

} // namespace floyd

#endif
