#ifndef FLOYD_STRUCTURE_HH
#define FLOYD_STRUCTURE_HH

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "floyd/alphabet.hh"

namespace floyd {

// Positions below are positions of `# s #`: 0 is the opening delimiter,
// token i (0-based) sits at i+1 and the closing delimiter at |s|+1.

enum class IssueKind { SharpConvention, EqualCycle };

struct Issue {
    IssueKind kind;
    std::string message;
    std::vector<Symbol> cycle; ///< EqualCycle only: c1 = c2 = ... = ck (= c1).
};

using ValidationReport = std::vector<Issue>;

/// Lists every violated alphabet invariant. Empty iff well-formed.
ValidationReport validate_alphabet(const OpAlphabet& alpha);

/// A pair x ⌢ y: positions x < y that are the two contexts of a chain.
struct ArrowPair {
    std::size_t left = 0;
    std::size_t right = 0;
    auto operator<=>(const ArrowPair&) const = default;
};

struct ParseTree {
    enum class Kind { Leaf, Internal };

    Kind kind = Kind::Leaf;
    Symbol symbol = kSharp;  ///< Leaf only.
    std::size_t position = 0; ///< Leaf only.
    ArrowPair span{};        ///< Internal only: the chain's context positions.
    std::vector<ParseTree> children;

    static ParseTree leaf(Symbol s, std::size_t pos);
    static ParseTree internal(ArrowPair span, std::vector<ParseTree> children);

    std::size_t internal_count() const;
    Word frontier() const;
};

/// Outcome of running the precedence-driven shift-reduce loop on a word.
struct Structure {
    bool compatible = false;
    std::vector<ArrowPair> arrows; ///< In reduction order.
    std::optional<ParseTree> tree;  ///< Absent for the empty word.
    // Failure diagnostics (compatible == false).
    std::size_t fail_position = 0;
    std::string fail_reason;
};

/// Runs the shift-reduce parse that the max-automaton performs. Never throws
/// for well-formed words; incompatibility is reported in the result.
Structure analyze(const OpAlphabet& alpha, const Word& word);

bool is_compatible(const OpAlphabet& alpha, const Word& word);

/// Arrow pairs of a compatible word, in reduction order. Throws StructureError
/// for incompatible words.
std::vector<ArrowPair> arrows(const OpAlphabet& alpha, const Word& word);

/// Throws StructureError for incompatible or empty words.
ParseTree parse_tree(const OpAlphabet& alpha, const Word& word);

std::string to_sexp(const ParseTree& tree, const OpAlphabet& alpha);
std::string to_dot(const ParseTree& tree, const OpAlphabet& alpha);

/// Splits whitespace-separated tokens and maps them to symbols.
Word parse_word(const OpAlphabet& alpha, std::string_view text);
std::string format_word(const OpAlphabet& alpha, const Word& word);

} // namespace floyd

#endif
