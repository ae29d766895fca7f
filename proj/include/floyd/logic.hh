#ifndef FLOYD_LOGIC_HH
#define FLOYD_LOGIC_HH

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "floyd/automaton.hh"
#include "floyd/eval.hh"
#include "floyd/formula.hh"

namespace floyd {

// Atoms over set variables. Their meaning for arbitrary sets is fixed here so
// that normalized formulas can be evaluated on their own:
//   Singleton(X)  |X| = 1
//   Letter(a, X)  every position of X carries a (# means 0 or |s|+1)
//   Subset(X, Y)  X is contained in Y
//   Le(X, Y)      some x in X and y in Y with x <= y
//   Succ(X, Y)    some x in X and y in Y with y = x + 1
//   Arrow(X, Y)   X = {x}, Y = {y} and x ~ y
//   True
enum class AtomKind { Singleton, Letter, Subset, Le, Succ, Arrow, True };

struct NormalNode;
using NormalFormula = std::shared_ptr<const NormalNode>;

/// Set-variable-only formula. Position variables of the source become set
/// variables of the same name constrained by Singleton.
struct NormalNode {
    enum class Kind { Atom, Not, Or, And, Exists };
    Kind kind = Kind::Atom;
    AtomKind atom = AtomKind::True;
    std::string symbol; ///< Letter only.
    std::string x;      ///< First set variable, or the bound variable of Exists.
    std::string y;
    NormalFormula left;
    NormalFormula right;
};

/// Translates a sentence. Throws if it has free variables.
NormalFormula normalize(const Formula& sentence);
/// Same translation for formulas with free variables; each free position
/// variable x becomes a free set variable x that is not constrained to be a
/// singleton.
NormalFormula normalize_open(const Formula& f);

std::string to_text(const NormalFormula& f);
/// Moves each quantifier inside the conjuncts that do not mention its
/// variable and pushes negation through `!` and `|`. Equivalent to the input.
NormalFormula miniscope(const NormalFormula& f);
/// Free set variables, sorted.
std::vector<std::string> free_sets(const NormalFormula& f);

/// Direct evaluation; `sets` maps the free variables to position masks.
bool eval_normalized(const OpAlphabet& alpha, const Model& m, const NormalFormula& f, const std::map<std::string, std::uint64_t>& sets);

/// Lifted alphabet over `base` with the given (sorted, distinct) variables
/// and end markers for the delimiter positions.
AlphabetPtr formula_alphabet(const AlphabetPtr& base, const std::vector<std::string>& vars);

enum class ArrowVariant {
    AsDrawn,   ///< The six-state figure, edge for edge.
    Corrected, ///< Adds the moves needed for chains nested right after x and for marks right after y.
};

/**
 * Automaton for X ~ Y over `lifted`, reading bit `i` for X and bit `j` for
 * Y (0-based variable indices of the lifting).
 */
FloydAutomaton arrow_automaton(const AlphabetPtr& lifted, std::size_t i, std::size_t j,
                               ArrowVariant variant = ArrowVariant::Corrected);

/// Automaton for one atom over `lifted`, whose variables must contain the
/// atom's variables.
FloydAutomaton atom_automaton(AtomKind kind, const AlphabetPtr& lifted, const std::string& x,
                              const std::string& y = {}, const std::string& symbol = {});

struct CompileOptions {
    /// Refuse when base symbols + live variables exceed this.
    std::size_t width_cap = 12;
    /// Called with every intermediate result, children first.
    std::function<void(const NormalFormula&, const FloydAutomaton&)> on_node;
};

struct CompileStats {
    std::size_t max_width = 0;
    std::size_t max_states = 0;
};

/// Automaton over `base` accepting the compatible words satisfying the
/// sentence.
FloydAutomaton compile(const AlphabetPtr& base, const Formula& sentence, const CompileOptions& options = {},
                       CompileStats* stats = nullptr);

/// Compiles a normalized formula; the result is over formula_alphabet(base,
/// free_sets(f)).
FloydAutomaton compile_normalized(const AlphabetPtr& base, const NormalFormula& f, const CompileOptions& options = {},
                                  CompileStats* stats = nullptr);

} // namespace floyd

#endif
