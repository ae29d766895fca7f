#ifndef FLOYD_FORMULA_HH
#define FLOYD_FORMULA_HH

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "floyd/alphabet.hh"

namespace floyd {

enum class FormulaKind : std::uint8_t {
    // Core.
    CharAt,   ///< symbol(x); symbol may be "#".
    In,       ///< x in X
    Le,       ///< x <= y
    Arrow,    ///< x ~ y
    Succ,     ///< x = y + 1
    Not,
    Or,
    ExistsFO,
    ExistsSO,
    // Sugar.
    True,
    False,
    And,
    Implies,
    ForallFO,
    ForallSO,
    Eq,       ///< x = y
    Lt,       ///< x < y
};

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

/**
 * Immutable formula node. Atoms use `x`/`y` for their variables (for In, `y`
 * is the set variable); quantifiers bind `x` over `left`; Not uses `left`;
 * binary connectives use `left` and `right`.
 */
struct FormulaNode {
    FormulaKind kind = FormulaKind::True;
    std::string symbol;
    std::string x;
    std::string y;
    Formula left;
    Formula right;
};

bool is_core(FormulaKind kind);
bool is_quantifier(FormulaKind kind);

/// Deep structural equality.
bool same_formula(const Formula& a, const Formula& b);
std::size_t formula_size(const Formula& f);

namespace mso {

Formula char_at(std::string symbol, std::string x);
Formula in(std::string x, std::string set);
Formula le(std::string x, std::string y);
Formula arrow(std::string x, std::string y);
/// x = y + 1
Formula succ(std::string x, std::string y);
Formula lnot(Formula f);
Formula lor(Formula a, Formula b);
Formula exists1(std::string x, Formula body);
Formula exists2(std::string set, Formula body);

Formula top();
Formula bottom();
Formula land(Formula a, Formula b);
Formula implies(Formula a, Formula b);
Formula forall1(std::string x, Formula body);
Formula forall2(std::string set, Formula body);
Formula eq(std::string x, std::string y);
Formula lt(std::string x, std::string y);

/// Balanced folds; the empty conjunction is top(), the empty disjunction bottom().
Formula land_all(std::vector<Formula> parts);
Formula lor_all(std::vector<Formula> parts);

/// Disjunction of a(x) & b(y) over the matrix entries (a, b) holding `rel`,
/// with # included except for the (#, #) entry.
Formula prec_rel(const OpAlphabet& alpha, PrecRel rel, const std::string& x, const std::string& y);

} // namespace mso

/// Rewrites sugar into the nine core kinds. Introduces variables named
/// `_d<k>` where a fresh position variable is needed.
Formula desugar(const Formula& f);

struct Signature {
    std::vector<std::string> fo;
    std::vector<std::string> so;
    bool empty() const { return fo.empty() && so.empty(); }
};

/// Free variables, in order of first occurrence.
Signature free_variables(const Formula& f);

/// Concrete syntax accepted by parse_formula (fully parenthesized).
std::string to_text(const Formula& f);

/// Parses the concrete syntax. FO variables start with a lowercase letter
/// or '_', SO variables with an uppercase letter.
Formula parse_formula(std::string_view text);

} // namespace floyd

#endif
