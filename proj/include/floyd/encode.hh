#ifndef FLOYD_ENCODE_HH
#define FLOYD_ENCODE_HH

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "floyd/automaton.hh"
#include "floyd/eval.hh"
#include "floyd/formula.hh"

namespace floyd {

/**
 * Builders for the shorthand formulas describing runs of a deterministic
 * automaton with states q0..qN (q0 initial). Expansions are memoized by
 * (name, arguments), so asking twice returns the same subtree, and every
 * request is recorded as an expansion site.
 *
 * Bound variables introduced by expansions start with '_' and are chosen
 * so that they never capture arguments that don't.
 */
class MacroTable {
public:
    explicit MacroTable(const FloydAutomaton& a);

    std::size_t num_states() const { return n_; }
    static std::string p(std::size_t k) { return "P" + std::to_string(k); }
    static std::string m(std::size_t k) { return "M" + std::to_string(k); }
    static std::string f(std::size_t k) { return "F" + std::to_string(k); }

    /// x o y over the matrix entries holding `rel`.
    Formula prec(PrecRel rel, const std::string& x, const std::string& y);
    /// The chain x ~ y has first body position z and last body position w.
    Formula tree(const std::string& x, const std::string& z, const std::string& w, const std::string& y);
    /// y = x + 1 and x in P_k.
    Formula succ(std::size_t k, const std::string& x, const std::string& y);
    /// x ~ y, x in M_k and y - 1 in F_k.
    Formula next(std::size_t k, const std::string& x, const std::string& y);
    /// The chain x ~ y is flushed into state k.
    Formula fl(std::size_t k, const std::string& x, const std::string& y);
    Formula tree_ij(std::size_t i, std::size_t j, const std::string& x, const std::string& z, const std::string& w,
                    const std::string& y);
    /// y - 1 in X.
    Formula pred_in(const std::string& y, const std::string& set);

    struct Site {
        std::string name;
        std::vector<std::string> args;
        std::size_t uses = 0;
        Formula expansion;
    };
    /// Expansion sites keyed by `name(arg, ...)`.
    const std::map<std::string, Site>& sites() const { return sites_; }

private:
    Formula memo(const std::string& name, std::vector<std::string> args, const std::function<Formula()>& build);

    const FloydAutomaton& a_;
    std::size_t n_;
    std::map<std::string, Site> sites_;
};

struct EncodedSentence {
    /// Closed sentence: set binders P0..PN, M0..MN, F0..FN, then e, over body.
    Formula sentence;
    /// The body with P/M/F/e free.
    Formula body;
    /// The body's conjuncts, named, in the order they are conjoined.
    std::vector<std::pair<std::string, Formula>> conjuncts;
    std::size_t num_states = 0;
    /// Automaton the sentence describes, renumbered so that q0 is initial.
    FloydAutomaton automaton;
    std::map<std::string, MacroTable::Site> macros;

    /// e first, then P0..PN, M0..MN, F0..FN.
    Signature body_signature() const;
};

/// Throws unless `a` is deterministic with exactly one initial state.
EncodedSentence fa_to_mso(const FloydAutomaton& a);

/// Per-chain sentence: starts in q_i at position 0 and flushes the root
/// chain into q_k.
Formula chain_sentence(const FloydAutomaton& a, std::size_t i, std::size_t k);

struct WitnessAssignment {
    std::vector<std::set<std::size_t>> P, M, F;
    std::size_t e = 0;

    bool operator==(const WitnessAssignment&) const = default;
};

/// Position sets read off the accepting run of the deterministic automaton.
/// State numbering follows fa_to_mso. Throws if the word is rejected.
WitnessAssignment witness_assignment(const FloydAutomaton& a, const Word& s);

/// Truth of the body under the given outer assignment.
bool check_witness(const EncodedSentence& sentence, const Word& s, const WitnessAssignment& w);
/// Names of the conjuncts violated by the assignment.
std::vector<std::string> failed_conjuncts(const EncodedSentence& sentence, const Word& s, const WitnessAssignment& w);

struct SearchStats {
    std::size_t assignments = 0; ///< Complete outer assignments tried.
    std::size_t pruned = 0;      ///< Partial assignments cut early.
};

/**
 * Decides the full sentence on `s` by searching the outer assignment. Only
 * candidates the body cannot rule out for free are enumerated: e is |s|, each
 * position 0..e is in exactly one P set, the last position is in none, M sets
 * hold arrow sources and F sets hold positions just left of arrow targets.
 * Conjuncts are checked as soon as their sets are fixed. Returns a
 * satisfying assignment if one exists.
 */
std::optional<WitnessAssignment> search_assignment(const EncodedSentence& sentence, const Word& s,
                                                   SearchStats* stats = nullptr);

} // namespace floyd

#endif
