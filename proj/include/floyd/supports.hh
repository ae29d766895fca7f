#ifndef FLOYD_SUPPORTS_HH
#define FLOYD_SUPPORTS_HH

#include <memory>
#include <string>
#include <vector>

#include "floyd/automaton.hh"

namespace floyd {

/**
 * One way the automaton can traverse a chain: entry state on the left
 * context, then for each body symbol either the push/mark that consumed it
 * or a nested support for an inner chain, closed by the flush that writes
 * `exit` back onto the left context.
 */
struct Support {
    struct Element {
        enum class Kind { Symbol, Nested };
        Kind kind = Kind::Symbol;
        Symbol symbol = kSharp;   ///< Symbol only.
        std::size_t position = 0; ///< Symbol only.
        State state = 0;          ///< Symbol: state after consuming it; Nested: nested->exit.
        std::shared_ptr<const Support> nested;
    };

    ArrowPair chain{};
    State entry = 0;
    State exit = 0;
    std::vector<Element> body;
};

/**
 * Support summaries of `# s #` for every entry state, one witness per
 * (entry, exit) pair, sorted by that pair. For the empty word every state
 * q yields the trivial summary (q, q) with an empty body. Throws
 * StructureError for incompatible words.
 */
std::vector<Support> supports(const FloydAutomaton& a, const Word& s);

/// `q0 -hnd-> q1 [q1 -call_a-> q1 =q1=> q1] -rst-> q1 =q0=> q0`
std::string format_support(const FloydAutomaton& a, const Support& sup);

} // namespace floyd

#endif
