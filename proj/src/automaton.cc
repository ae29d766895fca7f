#include "floyd/automaton.hh"

#include <algorithm>

#include "floyd/error.hh"

namespace floyd {

FloydAutomaton::FloydAutomaton(AlphabetPtr alphabet, std::size_t num_states)
    : alphabet_(std::move(alphabet))
{
    if (!alphabet_) throw Error("automaton needs an alphabet");
    add_states(num_states);
}

State FloydAutomaton::add_state()
{
    add_states(1);
    return static_cast<State>(num_states_ - 1);
}

void FloydAutomaton::add_states(std::size_t count)
{
    for (std::size_t i = 0; i < count; ++i) names_.push_back("q" + std::to_string(num_states_ + i));
    num_states_ += count;
    push_.resize(num_states_ * alphabet_->size());
}

void FloydAutomaton::check_state(State q) const
{
    if (q >= num_states_) throw Error("state " + std::to_string(q) + " out of range");
}

const std::string& FloydAutomaton::state_name(State q) const
{
    check_state(q);
    return names_[q];
}

void FloydAutomaton::set_state_name(State q, std::string name)
{
    check_state(q);
    names_[q] = std::move(name);
}

std::optional<State> FloydAutomaton::find_state(std::string_view name) const
{
    for (State q = 0; q < num_states_; ++q)
        if (names_[q] == name) return q;
    return std::nullopt;
}

namespace {
void insert_sorted(std::vector<State>& v, State q)
{
    auto it = std::lower_bound(v.begin(), v.end(), q);
    if (it == v.end() || *it != q) v.insert(it, q);
}
} // namespace

void FloydAutomaton::add_push(State from, Symbol a, State to)
{
    check_state(from);
    check_state(to);
    if (a >= alphabet_->size()) throw Error("push on a symbol outside the alphabet");
    insert_sorted(push_[from * alphabet_->size() + a], to);
}

void FloydAutomaton::add_flush(State top, State below, State to)
{
    check_state(top);
    check_state(below);
    check_state(to);
    insert_sorted(flush_[{top, below}], to);
}

std::span<const State> FloydAutomaton::push_targets(State from, Symbol a) const
{
    if (from >= num_states_ || a >= alphabet_->size()) return {};
    const auto& v = push_[from * alphabet_->size() + a];
    return {v.data(), v.size()};
}

std::span<const State> FloydAutomaton::flush_targets(State top, State below) const
{
    auto it = flush_.find({top, below});
    if (it == flush_.end()) return {};
    return {it->second.data(), it->second.size()};
}

std::vector<std::pair<std::pair<State, State>, std::vector<State>>> FloydAutomaton::flush_entries() const
{
    std::vector<std::pair<std::pair<State, State>, std::vector<State>>> out(flush_.begin(), flush_.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t FloydAutomaton::num_push_transitions() const
{
    std::size_t n = 0;
    for (const auto& v : push_) n += v.size();
    return n;
}

std::size_t FloydAutomaton::num_flush_transitions() const
{
    std::size_t n = 0;
    for (const auto& [k, v] : flush_) n += v.size();
    return n;
}

const char* to_string(MoveKind kind)
{
    switch (kind) {
    case MoveKind::Push: return "push";
    case MoveKind::Mark: return "mark";
    case MoveKind::Flush: return "flush";
    }
    return "?";
}

Configuration initial_configuration(State q)
{
    return Configuration{{StackItem{kSharp, false, q, 0}}, 0};
}

StepResult step(const FloydAutomaton& a, const Configuration& c, const Word& input)
{
    StepResult out;
    const Symbol look = c.cursor < input.size() ? input[c.cursor] : kSharp;
    if (look == kSharp && c.stack.size() == 1) {
        out.status = StepStatus::Halted;
        return out;
    }
    const StackItem& top = c.stack.back();
    const auto rel = a.alphabet().prec(top.symbol, look);
    if (!rel) {
        out.status = StepStatus::UndefinedPrecedence;
        return out;
    }
    if (*rel == PrecRel::Takes) {
        std::size_t i = c.stack.size();
        while (i > 0 && !c.stack[i - 1].marked) --i;
        if (i == 0) {
            out.status = StepStatus::NoMarkToFlush;
            return out;
        }
        const std::size_t mark = i - 1;
        const StackItem& below = c.stack[mark - 1];
        const ArrowPair arrow{below.src_pos, c.cursor + 1};
        for (State q : a.flush_targets(top.state, below.state)) {
            Configuration next;
            next.stack.assign(c.stack.begin(), c.stack.begin() + static_cast<std::ptrdiff_t>(mark));
            next.stack.back().state = q;
            next.cursor = c.cursor;
            out.successors.push_back({Move{MoveKind::Flush, q, c.stack.size() - mark, arrow}, std::move(next)});
        }
    } else {
        const bool mark = *rel == PrecRel::Yields;
        for (State q : a.push_targets(top.state, look)) {
            Configuration next = c;
            next.stack.push_back(StackItem{look, mark, q, c.cursor + 1});
            next.cursor = c.cursor + 1;
            out.successors.push_back({Move{mark ? MoveKind::Mark : MoveKind::Push, q, 0, {}},
                                      std::move(next)});
        }
    }
    out.status = out.successors.empty() ? StepStatus::NoTransition : StepStatus::Moved;
    return out;
}

namespace {

struct Search {
    const FloydAutomaton& a;
    const Word& input;
    bool want_trace;
    std::vector<std::pair<Move, Configuration>> path;
    std::size_t leaves = 0;

    bool dfs(const Configuration& c)
    {
        StepResult r = step(a, c, input);
        if (r.status != StepStatus::Moved) {
            ++leaves;
            return r.status == StepStatus::Halted && a.is_final(c.stack.front().state);
        }
        for (auto& [move, next] : r.successors) {
            if (want_trace) path.emplace_back(move, next);
            if (dfs(next)) return true;
            if (want_trace) path.pop_back();
        }
        return false;
    }
};

} // namespace

AcceptResult run(const FloydAutomaton& a, const Word& input)
{
    AcceptResult out;
    Search search{a, input, true, {}, 0};
    for (State q : a.initial) {
        Configuration start = initial_configuration(q);
        search.path.clear();
        if (search.dfs(start)) {
            out.accepted = true;
            out.trace = RunTrace{std::move(start), std::move(search.path)};
            break;
        }
    }
    out.explored_paths = search.leaves;
    return out;
}

bool accepts(const FloydAutomaton& a, const Word& input)
{
    Search search{a, input, false, {}, 0};
    for (State q : a.initial)
        if (search.dfs(initial_configuration(q))) return true;
    return false;
}

std::string format_stack(const FloydAutomaton& a, const Configuration& c)
{
    std::string out;
    for (const StackItem& item : c.stack) {
        if (!out.empty()) out += ' ';
        out += '[';
        out += a.alphabet().name(item.symbol);
        if (item.marked) out += '\'';
        out += ' ';
        out += a.state_name(item.state);
        out += ']';
    }
    return out;
}

std::string format_trace(const FloydAutomaton& a, const Word& input, const RunTrace& trace)
{
    auto remaining = [&](std::size_t cursor) {
        std::string s;
        for (std::size_t i = cursor; i < input.size(); ++i) s += a.alphabet().name(input[i]) + ' ';
        return s + '#';
    };
    auto line = [&](const std::string& label, const Configuration& c) {
        std::string l = label;
        l.resize(5, ' ');
        return l + " | " + format_stack(a, c) + " | " + remaining(c.cursor) + '\n';
    };
    std::string out = line("", trace.start);
    for (const auto& [move, conf] : trace.moves) out += line(to_string(move.kind), conf);
    return out;
}

} // namespace floyd
