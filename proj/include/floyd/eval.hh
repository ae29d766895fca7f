#ifndef FLOYD_EVAL_HH
#define FLOYD_EVAL_HH

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "floyd/formula.hh"
#include "floyd/structure.hh"

namespace floyd {

/// Positions of `# s #` assigned to free variables.
struct Assignment {
    std::map<std::string, std::size_t> fo;
    std::map<std::string, std::set<std::size_t>> so;
};

/// Set quantifiers are refused on models with more positions than this.
inline constexpr std::size_t kSetQuantifierPositionCap = 12;

/**
 * A compatible word viewed as a structure over positions 0..|s|+1, with its
 * arrow relation precomputed.
 */
class Model {
public:
    Model(const OpAlphabet& alpha, const Word& s);

    std::size_t positions() const { return symbols_.size(); }
    std::size_t last() const { return symbols_.size() - 1; }
    /// kSharp at positions 0 and |s|+1.
    Symbol symbol_at(std::size_t p) const { return symbols_[p]; }
    bool arrow(std::size_t x, std::size_t y) const { return (arrows_[x] >> y) & 1u; }
    const std::vector<ArrowPair>& arrow_list() const { return arrow_list_; }

private:
    std::vector<Symbol> symbols_;
    std::vector<std::uint64_t> arrows_;
    std::vector<ArrowPair> arrow_list_;
};

/**
 * A formula with variables resolved to slots. Free variables take the
 * slots given by `free` (FO first, in order, then SO in order); bound
 * variables get slots after those.
 */
class CompiledFormula {
public:
    CompiledFormula(const OpAlphabet& alpha, const Formula& f, const Signature& free);

    /// `fo` and `so` hold the values of the free variables in signature
    /// order; sets are bit masks over positions.
    bool eval(const Model& m, std::span<const std::size_t> fo, std::span<const std::uint64_t> so) const;

    bool has_set_quantifier() const { return has_set_quantifier_; }

private:
    struct Node {
        FormulaKind kind;
        Symbol symbol = 0;
        std::uint32_t a = 0;
        std::uint32_t b = 0;
        std::int32_t left = -1;
        std::int32_t right = -1;
    };

    struct Frame;
    bool run(std::int32_t n, Frame& f) const;

    std::vector<Node> nodes_;
    std::int32_t root_ = -1;
    std::size_t fo_slots_ = 0;
    std::size_t so_slots_ = 0;
    std::size_t free_fo_ = 0;
    std::size_t free_so_ = 0;
    bool has_set_quantifier_ = false;
};

/// Direct satisfaction check. Throws for unbound variables, unknown symbols,
/// out-of-range positions or an incompatible word.
bool eval(const OpAlphabet& alpha, const Word& s, const Formula& f, const Assignment& rho = {});

/// Compatible words of length <= maxlen satisfying the closed formula, in
/// length-lexicographic order.
std::vector<Word> sentence_language_bounded(const OpAlphabet& alpha, const Formula& f, std::size_t maxlen);

} // namespace floyd

#endif
