#include "floyd/eval.hh"

#include <unordered_map>

#include "floyd/error.hh"
#include "floyd/harness.hh"

namespace floyd {

Model::Model(const OpAlphabet& alpha, const Word& s)
{
    if (s.size() + 2 > 64) throw Error("words longer than 62 symbols are not supported by the evaluator");
    Structure st = analyze(alpha, s);
    if (!st.compatible) throw StructureError("incompatible string: " + st.fail_reason, st.fail_position);
    symbols_.push_back(kSharp);
    symbols_.insert(symbols_.end(), s.begin(), s.end());
    symbols_.push_back(kSharp);
    arrows_.assign(symbols_.size(), 0);
    for (const ArrowPair& p : st.arrows) arrows_[p.left] |= std::uint64_t{1} << p.right;
    arrow_list_ = std::move(st.arrows);
}

struct CompiledFormula::Frame {
    const Model& m;
    std::vector<std::size_t> fo;
    std::vector<std::uint64_t> so;
};

CompiledFormula::CompiledFormula(const OpAlphabet& alpha, const Formula& f, const Signature& free)
    : free_fo_(free.fo.size()), free_so_(free.so.size())
{
    std::unordered_map<std::string, std::vector<std::uint32_t>> fo_scope, so_scope;
    for (std::size_t i = 0; i < free.fo.size(); ++i) fo_scope[free.fo[i]].push_back(static_cast<std::uint32_t>(i));
    for (std::size_t i = 0; i < free.so.size(); ++i) so_scope[free.so[i]].push_back(static_cast<std::uint32_t>(i));
    fo_slots_ = free.fo.size();
    so_slots_ = free.so.size();

    auto fo_slot = [&](const std::string& v) {
        auto it = fo_scope.find(v);
        if (it == fo_scope.end() || it->second.empty()) throw Error("unbound position variable '" + v + "'");
        return it->second.back();
    };
    auto so_slot = [&](const std::string& v) {
        auto it = so_scope.find(v);
        if (it == so_scope.end() || it->second.empty()) throw Error("unbound set variable '" + v + "'");
        return it->second.back();
    };

    auto build = [&](auto&& self, const Formula& g) -> std::int32_t {
        Node n{g->kind};
        switch (g->kind) {
        case FormulaKind::CharAt: {
            auto sym = alpha.find(g->symbol);
            if (!sym) throw Error("unknown symbol '" + g->symbol + "' in formula");
            n.symbol = *sym;
            n.a = fo_slot(g->x);
            break;
        }
        case FormulaKind::In:
            n.a = fo_slot(g->x);
            n.b = so_slot(g->y);
            break;
        case FormulaKind::Le:
        case FormulaKind::Arrow:
        case FormulaKind::Succ:
        case FormulaKind::Eq:
        case FormulaKind::Lt:
            n.a = fo_slot(g->x);
            n.b = fo_slot(g->y);
            break;
        case FormulaKind::True:
        case FormulaKind::False: break;
        case FormulaKind::Not: n.left = self(self, g->left); break;
        case FormulaKind::Or:
        case FormulaKind::And:
        case FormulaKind::Implies:
            n.left = self(self, g->left);
            n.right = self(self, g->right);
            break;
        case FormulaKind::ExistsFO:
        case FormulaKind::ForallFO: {
            n.a = static_cast<std::uint32_t>(fo_slots_++);
            auto& stack = fo_scope[g->x];
            stack.push_back(n.a);
            n.left = self(self, g->left);
            fo_scope[g->x].pop_back();
            break;
        }
        case FormulaKind::ExistsSO:
        case FormulaKind::ForallSO: {
            has_set_quantifier_ = true;
            n.a = static_cast<std::uint32_t>(so_slots_++);
            so_scope[g->x].push_back(n.a);
            n.left = self(self, g->left);
            so_scope[g->x].pop_back();
            break;
        }
        }
        nodes_.push_back(n);
        return static_cast<std::int32_t>(nodes_.size() - 1);
    };
    root_ = build(build, f);
}

bool CompiledFormula::run(std::int32_t idx, Frame& f) const
{
    const Node& n = nodes_[static_cast<std::size_t>(idx)];
    switch (n.kind) {
    case FormulaKind::CharAt: return f.m.symbol_at(f.fo[n.a]) == n.symbol;
    case FormulaKind::In: return (f.so[n.b] >> f.fo[n.a]) & 1u;
    case FormulaKind::Le: return f.fo[n.a] <= f.fo[n.b];
    case FormulaKind::Lt: return f.fo[n.a] < f.fo[n.b];
    case FormulaKind::Eq: return f.fo[n.a] == f.fo[n.b];
    case FormulaKind::Succ: return f.fo[n.a] == f.fo[n.b] + 1;
    case FormulaKind::Arrow: return f.m.arrow(f.fo[n.a], f.fo[n.b]);
    case FormulaKind::True: return true;
    case FormulaKind::False: return false;
    case FormulaKind::Not: return !run(n.left, f);
    case FormulaKind::Or: return run(n.left, f) || run(n.right, f);
    case FormulaKind::And: return run(n.left, f) && run(n.right, f);
    case FormulaKind::Implies: return !run(n.left, f) || run(n.right, f);
    case FormulaKind::ExistsFO:
    case FormulaKind::ForallFO: {
        const bool want = n.kind == FormulaKind::ExistsFO;
        for (std::size_t p = 0; p < f.m.positions(); ++p) {
            f.fo[n.a] = p;
            if (run(n.left, f) == want) return want;
        }
        return !want;
    }
    case FormulaKind::ExistsSO:
    case FormulaKind::ForallSO: {
        if (f.m.positions() > kSetQuantifierPositionCap)
            throw Error("set quantifier over " + std::to_string(f.m.positions()) + " positions exceeds the cap of " +
                        std::to_string(kSetQuantifierPositionCap) + "; use a smaller bound");
        const bool want = n.kind == FormulaKind::ExistsSO;
        const std::uint64_t end = std::uint64_t{1} << f.m.positions();
        for (std::uint64_t mask = 0; mask < end; ++mask) {
            f.so[n.a] = mask;
            if (run(n.left, f) == want) return want;
        }
        return !want;
    }
    }
    return false;
}

bool CompiledFormula::eval(const Model& m, std::span<const std::size_t> fo, std::span<const std::uint64_t> so) const
{
    if (fo.size() != free_fo_ || so.size() != free_so_) throw Error("assignment does not match the formula's free variables");
    Frame frame{m, std::vector<std::size_t>(fo_slots_, 0), std::vector<std::uint64_t>(so_slots_, 0)};
    for (std::size_t i = 0; i < fo.size(); ++i) {
        if (fo[i] >= m.positions()) throw Error("position " + std::to_string(fo[i]) + " out of range");
        frame.fo[i] = fo[i];
    }
    const std::uint64_t range = m.positions() >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m.positions()) - 1;
    for (std::size_t i = 0; i < so.size(); ++i) {
        if (so[i] & ~range) throw Error("set assignment contains a position out of range");
        frame.so[i] = so[i];
    }
    return run(root_, frame);
}

bool eval(const OpAlphabet& alpha, const Word& s, const Formula& f, const Assignment& rho)
{
    Signature free = free_variables(f);
    std::vector<std::size_t> fo;
    std::vector<std::uint64_t> so;
    for (const auto& v : free.fo) {
        auto it = rho.fo.find(v);
        if (it == rho.fo.end()) throw Error("unbound position variable '" + v + "'");
        fo.push_back(it->second);
    }
    for (const auto& v : free.so) {
        auto it = rho.so.find(v);
        if (it == rho.so.end()) throw Error("unbound set variable '" + v + "'");
        std::uint64_t mask = 0;
        for (std::size_t p : it->second) {
            if (p >= 64) throw Error("position " + std::to_string(p) + " out of range");
            mask |= std::uint64_t{1} << p;
        }
        so.push_back(mask);
    }
    const Model m(alpha, s);
    return CompiledFormula(alpha, f, free).eval(m, fo, so);
}

std::vector<Word> sentence_language_bounded(const OpAlphabet& alpha, const Formula& f, std::size_t maxlen)
{
    const Signature free = free_variables(f);
    if (!free.empty()) throw Error("formula is not a sentence");
    const CompiledFormula c(alpha, f, free);
    std::vector<Word> out;
    for_each_compatible(alpha, maxlen, [&](const Word& w) {
        if (c.eval(Model(alpha, w), {}, {})) out.push_back(w);
    });
    return out;
}

} // namespace floyd
