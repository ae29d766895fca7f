#ifndef FLOYD_AUTOMATON_HH
#define FLOYD_AUTOMATON_HH

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "floyd/alphabet.hh"
#include "floyd/structure.hh"

namespace floyd {

using State = std::uint32_t;
using StateSet = std::set<State>;

/**
 * Nondeterministic Floyd automaton.
 *
 * push_delta serves both push and mark moves; which one fires is decided by
 * the precedence between the stack top and the lookahead, not by the
 * automaton. flush_delta(q, p) is indexed by the top state q and the state p
 * of the item right below the topmost marked item.
 */
class FloydAutomaton {
public:
    FloydAutomaton() = default;
    FloydAutomaton(AlphabetPtr alphabet, std::size_t num_states);

    const AlphabetPtr& alphabet_ptr() const { return alphabet_; }
    const OpAlphabet& alphabet() const { return *alphabet_; }

    std::size_t num_states() const { return num_states_; }
    State add_state();
    void add_states(std::size_t count);

    const std::string& state_name(State q) const;
    void set_state_name(State q, std::string name);
    std::optional<State> find_state(std::string_view name) const;

    StateSet initial;
    StateSet final;

    void add_push(State from, Symbol a, State to);
    void add_flush(State top, State below, State to);

    std::span<const State> push_targets(State from, Symbol a) const;
    std::span<const State> flush_targets(State top, State below) const;

    /// All flush entries, sorted by (top, below).
    std::vector<std::pair<std::pair<State, State>, std::vector<State>>> flush_entries() const;
    std::size_t num_push_transitions() const;
    std::size_t num_flush_transitions() const;

    bool is_final(State q) const { return final.count(q) != 0; }

private:
    struct PairHash {
        std::size_t operator()(const std::pair<State, State>& p) const
        {
            return (static_cast<std::size_t>(p.first) << 32) ^ p.second;
        }
    };

    void check_state(State q) const;

    AlphabetPtr alphabet_;
    std::size_t num_states_ = 0;
    std::vector<std::string> names_;
    std::vector<std::vector<State>> push_; // indexed state * |symbols| + symbol
    std::unordered_map<std::pair<State, State>, std::vector<State>, PairHash> flush_;
};

/// Plain finite automaton over the symbols of an alphabet, used as the
/// carrier of structure-blind constraints (see lift_fsa).
struct FiniteAutomaton {
    std::size_t num_states = 0;
    StateSet initial;
    StateSet final;
    std::map<std::pair<State, Symbol>, StateSet> delta;

    void add(State from, Symbol a, State to) { delta[{from, a}].insert(to); }
};

struct StackItem {
    Symbol symbol = kSharp;
    bool marked = false;
    State state = 0;
    std::size_t src_pos = 0; ///< Position in `# s #` of the symbol.

    bool operator==(const StackItem&) const = default;
};

struct Configuration {
    std::vector<StackItem> stack; ///< Bottom first.
    std::size_t cursor = 0;        ///< Index of the next unread token.

    bool operator==(const Configuration&) const = default;
};

enum class MoveKind { Push, Mark, Flush };

struct Move {
    MoveKind kind = MoveKind::Push;
    State state = 0;
    std::size_t popped = 0; ///< Flush only.
    ArrowPair arrow{};       ///< Flush only: (position of the item below the mark, lookahead position).

    bool operator==(const Move&) const = default;
};

const char* to_string(MoveKind kind);

enum class StepStatus {
    Moved,
    Halted,              ///< Only `#` on the stack and nothing left to read.
    UndefinedPrecedence, ///< No relation between top and lookahead.
    NoMarkToFlush,       ///< Reduction demanded with no marked item (dead).
    NoTransition,        ///< Relation defined but the automaton has no move.
};

struct StepResult {
    StepStatus status = StepStatus::Halted;
    std::vector<std::pair<Move, Configuration>> successors;
};

Configuration initial_configuration(State q);

StepResult step(const FloydAutomaton& a, const Configuration& c, const Word& input);

struct RunTrace {
    Configuration start;
    std::vector<std::pair<Move, Configuration>> moves;
};

struct AcceptResult {
    bool accepted = false;
    std::optional<RunTrace> trace; ///< Witness of an accepting run.
    std::size_t explored_paths = 0; ///< Number of maximal computations visited.
};

/// Exhaustive depth-first search over the nondeterministic choices.
AcceptResult run(const FloydAutomaton& a, const Word& input);
bool accepts(const FloydAutomaton& a, const Word& input);

/// One line per move: `MOVE | stack | remaining`, preceded by the start line.
std::string format_trace(const FloydAutomaton& a, const Word& input, const RunTrace& trace);
std::string format_stack(const FloydAutomaton& a, const Configuration& c);

} // namespace floyd

#endif
