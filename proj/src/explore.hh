#ifndef FLOYD_SRC_EXPLORE_HH
#define FLOYD_SRC_EXPLORE_HH

#include <cstdint>
#include <functional>
#include <tuple>
#include <utility>
#include <vector>

#include "floyd/automaton.hh"

namespace floyd::detail {

enum PushKind : std::uint8_t { kPushOnly = 1, kMarkOnly = 2, kPushOrMark = 3 };

/// Successor functions of an automaton whose states are discovered on the
/// fly. State ids handed out by the callbacks must be dense, starting at 0.
struct ExploreHooks {
    std::function<void(State, Symbol, std::vector<std::pair<State, PushKind>>&)> push;
    std::function<void(State top, State below, std::vector<State>&)> flush;
};

struct Exploration {
    std::size_t num_states = 0;
    std::vector<std::tuple<State, Symbol, State>> pushes;
    std::vector<std::tuple<State, State, State>> flushes;
};

/**
 * Saturates the relation "anchor / top" over all stacks reachable from the
 * initial states. Each state is tracked together with the row class of the
 * symbol carrying it, so a symbol is pushed or marked exactly as the matrix
 * dictates; a hook's PushKind can only narrow that. Lookahead constraints on
 * reductions are ignored beyond requiring that the top row has some `>`.
 * Moves are only queried for stacks that can actually occur.
 */
Exploration explore(const std::vector<State>& initial, const OpAlphabet& alpha, const ExploreHooks& hooks);

} // namespace floyd::detail

#endif
