#ifndef FLOYD_FSA_HH
#define FLOYD_FSA_HH

#include <vector>

#include "floyd/automaton.hh"

namespace floyd {

// Plain finite automaton operations over symbols 0..symbols-1, used to keep
// structure-blind constraints small before they are lifted.

FiniteAutomaton fsa_intersect(const FiniteAutomaton& a, const FiniteAutomaton& b, std::size_t symbols);
FiniteAutomaton fsa_unite(const FiniteAutomaton& a, const FiniteAutomaton& b);

/// Subset construction keeping only reachable subsets; the empty subset is
/// dropped, so the result may be partial.
FiniteAutomaton fsa_determinize(const FiniteAutomaton& a, std::size_t symbols);

/// Accepts every string over the symbols that `a` rejects.
FiniteAutomaton fsa_complement(const FiniteAutomaton& a, std::size_t symbols);

/// Minimal deterministic automaton without dead or unreachable states.
FiniteAutomaton fsa_minimize(const FiniteAutomaton& a, std::size_t symbols);

/// Reads symbol c of the new alphabet as old symbol `old_of[c]`.
FiniteAutomaton fsa_pullback(const FiniteAutomaton& a, const std::vector<Symbol>& old_of);

/// Renames old symbol c to `new_of[c]`; merged symbols become nondeterministic.
FiniteAutomaton fsa_pushforward(const FiniteAutomaton& a, const std::vector<Symbol>& new_of);

bool fsa_is_deterministic(const FiniteAutomaton& a);

} // namespace floyd

#endif
