#ifndef FLOYD_HARNESS_HH
#define FLOYD_HARNESS_HH

#include <cstddef>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "floyd/automaton.hh"
#include "floyd/formula.hh"

namespace floyd {

/// Calls `fn` on every compatible word of length <= maxlen, shortest first,
/// then lexicographically by symbol index. The empty word comes first.
void for_each_compatible(const OpAlphabet& alpha, std::size_t maxlen, const std::function<void(const Word&)>& fn);
std::vector<Word> enumerate_compatible(const OpAlphabet& alpha, std::size_t maxlen);

/// One side of an equivalence check: an automaton or a sentence.
using LanguageSide = std::variant<FloydAutomaton, Formula>;

struct EquivVerdict {
    bool equivalent = true;
    std::optional<Word> counterexample; ///< Least word on which the sides differ.
    std::size_t bound = 0;
    std::size_t checked = 0;
    std::size_t accepted_left = 0;
    std::size_t accepted_right = 0;
};

/// Compares membership on every compatible word up to `maxlen` and stops
/// at the first difference. Sentences with set quantifiers are refused when
/// maxlen + 2 positions exceed the evaluation cap.
EquivVerdict equiv(const AlphabetPtr& alpha, const LanguageSide& left, const LanguageSide& right, std::size_t maxlen);

} // namespace floyd

#endif
