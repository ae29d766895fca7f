#ifndef FLOYD_COMBINATORS_HH
#define FLOYD_COMBINATORS_HH

#include <string_view>

#include "floyd/automaton.hh"

namespace floyd {

/// One state, initial and final, looping on every push and flush. Accepts
/// exactly the compatible strings.
FloydAutomaton max_automaton(AlphabetPtr alpha);

/// One non-final state and no transitions.
FloydAutomaton empty_automaton(AlphabetPtr alpha);

bool is_deterministic(const FloydAutomaton& a);

/// Keeps the states reachable on some stack and the flush entries whose
/// (top, below) pair can actually occur. Language is unchanged.
FloydAutomaton trim(const FloydAutomaton& a);

/**
 * Deterministic automaton with the same language.
 *
 * States are a row class of the precedence matrix (the class of the symbol
 * of the stack item carrying the state) plus a set of pairs (anchor,
 * current): `current` is a state the original automaton may hold on that
 * item and `anchor` the state it held on the item below the most recent
 * mark when that item was entered.
 */
FloydAutomaton determinize(const FloydAutomaton& a);

/// Accepts the compatible strings that `a` rejects.
FloydAutomaton complement(const FloydAutomaton& a);

/**
 * Merges bisimilar states: states with the same finality whose push
 * targets, flush targets as top and flush targets as the state below agree
 * up to the merge. Works for nondeterministic automata too; the language
 * is unchanged.
 */
FloydAutomaton reduce(const FloydAutomaton& a);

/**
 * Smaller deterministic automaton with the same language. The input is
 * completed with a sink, then states are merged while their moves agree on
 * every defined entry; entries for stacks that never occur impose nothing.
 */
FloydAutomaton minimize(const FloydAutomaton& a);

/// Disjoint union. Throws if the alphabets differ.
FloydAutomaton unite(const FloydAutomaton& a, const FloydAutomaton& b);

/// Synchronous product. Throws if the alphabets differ.
FloydAutomaton intersect(const FloydAutomaton& a, const FloydAutomaton& b);

/**
 * Erases one tuple component of a lifted alphabet. Components are numbered
 * from 1; 1..n stand for the base letters and n+k for the k-th variable, so
 * `component` must exceed n.
 */
FloydAutomaton project(const FloydAutomaton& a, std::size_t component);
FloydAutomaton project_var(const FloydAutomaton& a, std::string_view var);

/// Reinterprets `a` over `wider`, whose variables must include those of a's
/// alphabet; the extra components are unconstrained.
FloydAutomaton widen(const FloydAutomaton& a, AlphabetPtr wider);

/// Runs `fsa` on the consumed symbols and ignores structure on flushes.
FloydAutomaton lift_fsa(AlphabetPtr alpha, const FiniteAutomaton& fsa);

/**
 * Turns an automaton over a boundary-lifted alphabet with no variables
 * (strings `<| w |>`) into one over the base alphabet accepting the
 * corresponding w.
 */
FloydAutomaton strip_boundaries(const FloydAutomaton& a);

/// Renumbers states so that the single initial state is 0. Throws unless
/// there is exactly one initial state.
FloydAutomaton reindex_initial_first(const FloydAutomaton& a);

} // namespace floyd

#endif
