#include "floyd/harness.hh"

#include "floyd/error.hh"
#include "floyd/eval.hh"
#include "floyd/structure.hh"

namespace floyd {

namespace {

// Visits compatible words in length-lex order until `fn` returns false.
bool walk(const OpAlphabet& alpha, std::size_t maxlen, const std::function<bool(const Word&)>& fn)
{
    const std::size_t n = alpha.size();
    if (!fn({})) return false;
    if (n == 0) return true;
    for (std::size_t len = 1; len <= maxlen; ++len) {
        Word w(len, 0);
        while (true) {
            if (is_compatible(alpha, w) && !fn(w)) return false;
            std::size_t i = len;
            while (i > 0 && w[i - 1] + 1 == n) w[--i] = 0;
            if (i == 0) break;
            ++w[i - 1];
        }
    }
    return true;
}

} // namespace

void for_each_compatible(const OpAlphabet& alpha, std::size_t maxlen, const std::function<void(const Word&)>& fn)
{
    walk(alpha, maxlen, [&](const Word& w) {
        fn(w);
        return true;
    });
}

std::vector<Word> enumerate_compatible(const OpAlphabet& alpha, std::size_t maxlen)
{
    std::vector<Word> out;
    for_each_compatible(alpha, maxlen, [&](const Word& w) { out.push_back(w); });
    return out;
}

namespace {

class Member {
public:
    Member(const AlphabetPtr& alpha, const LanguageSide& side, std::size_t maxlen, const char* which)
    {
        if (const auto* a = std::get_if<FloydAutomaton>(&side)) {
            if (!a->alphabet().same_structure(*alpha))
                throw Error(std::string(which) + " automaton is over a different alphabet");
            fa_ = a;
            return;
        }
        const Formula& f = std::get<Formula>(side);
        if (!free_variables(f).empty()) throw Error(std::string(which) + " formula is not a sentence");
        formula_.emplace(*alpha, f, Signature{});
        if (formula_->has_set_quantifier() && maxlen + 2 > kSetQuantifierPositionCap)
            throw Error(std::string(which) + " sentence quantifies over sets; use a bound of at most " +
                        std::to_string(kSetQuantifierPositionCap - 2));
    }

    bool operator()(const OpAlphabet& alpha, const Word& w) const
    {
        if (fa_) return accepts(*fa_, w);
        return formula_->eval(Model(alpha, w), {}, {});
    }

private:
    const FloydAutomaton* fa_ = nullptr;
    std::optional<CompiledFormula> formula_;
};

} // namespace

EquivVerdict equiv(const AlphabetPtr& alpha, const LanguageSide& left, const LanguageSide& right, std::size_t maxlen)
{
    const Member l(alpha, left, maxlen, "left");
    const Member r(alpha, right, maxlen, "right");
    EquivVerdict v;
    v.bound = maxlen;
    walk(*alpha, maxlen, [&](const Word& w) {
        ++v.checked;
        const bool a = l(*alpha, w), b = r(*alpha, w);
        v.accepted_left += a;
        v.accepted_right += b;
        if (a == b) return true;
        v.equivalent = false;
        v.counterexample = w;
        return false;
    });
    return v;
}

} // namespace floyd
