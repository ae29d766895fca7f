#include "floyd/alphabet.hh"

#include <map>

#include "floyd/error.hh"

namespace floyd {

char to_char(PrecRel rel)
{
    switch (rel) {
    case PrecRel::Yields: return '<';
    case PrecRel::Equal: return '=';
    case PrecRel::Takes: return '>';
    }
    return '?';
}

std::optional<PrecRel> prec_from_char(char c)
{
    switch (c) {
    case '<': return PrecRel::Yields;
    case '=': return PrecRel::Equal;
    case '>': return PrecRel::Takes;
    default: return std::nullopt;
    }
}

bool is_identifier(std::string_view s)
{
    if (s.empty()) return false;
    auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    if (!alpha(s.front())) return false;
    for (char c : s) {
        if (!alpha(c) && !digit(c)) return false;
    }
    return true;
}

std::size_t Lifting::letters() const
{
    return base->size() + (boundary ? 2 : 0);
}

Symbol Lifting::left_letter() const { return static_cast<Symbol>(base->size()); }
Symbol Lifting::right_letter() const { return static_cast<Symbol>(base->size() + 1); }

OpAlphabet::OpAlphabet(std::vector<std::string> symbols)
    : names_(std::move(symbols))
{
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == "#") throw Error("'#' is reserved and cannot be a symbol");
        if (!by_name_.emplace(names_[i], static_cast<Symbol>(i)).second) {
            throw Error("duplicate symbol '" + names_[i] + "'");
        }
    }
    const std::size_t k = names_.size() + 1;
    matrix_.assign(k * k, 0);
}

const std::string& OpAlphabet::name(Symbol s) const
{
    static const std::string sharp = "#";
    if (s == kSharp) return sharp;
    return names_.at(s);
}

std::optional<Symbol> OpAlphabet::find(std::string_view name) const
{
    if (name == "#") return kSharp;
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

Symbol OpAlphabet::symbol(std::string_view name) const
{
    if (auto s = find(name)) return *s;
    throw Error("unknown symbol '" + std::string(name) + "'");
}

std::size_t OpAlphabet::index(Symbol s) const
{
    if (s == kSharp) return names_.size();
    if (s >= names_.size()) throw Error("symbol index " + std::to_string(s) + " out of range");
    return s;
}

void OpAlphabet::set(Symbol a, Symbol b, PrecRel rel)
{
    matrix_[index(a) * (names_.size() + 1) + index(b)] = static_cast<std::uint8_t>(rel) + 1;
}

void OpAlphabet::unset(Symbol a, Symbol b)
{
    matrix_[index(a) * (names_.size() + 1) + index(b)] = 0;
}

std::optional<PrecRel> OpAlphabet::prec(Symbol a, Symbol b) const
{
    const std::uint8_t v = matrix_[index(a) * (names_.size() + 1) + index(b)];
    if (v == 0) return std::nullopt;
    return static_cast<PrecRel>(v - 1);
}

std::optional<PrecRel> OpAlphabet::prec(std::string_view a, std::string_view b) const
{
    return prec(symbol(a), symbol(b));
}

std::vector<std::uint32_t> OpAlphabet::row_classes() const
{
    const std::size_t k = names_.size() + 1;
    std::map<std::vector<std::uint8_t>, std::uint32_t> seen;
    std::vector<std::uint32_t> classes(k);
    for (std::size_t r = 0; r < k; ++r) {
        std::vector<std::uint8_t> row(matrix_.begin() + static_cast<std::ptrdiff_t>(r * k),
                                      matrix_.begin() + static_cast<std::ptrdiff_t>((r + 1) * k));
        auto [it, fresh] = seen.emplace(std::move(row), static_cast<std::uint32_t>(seen.size()));
        classes[r] = it->second;
    }
    return classes;
}

bool OpAlphabet::same_structure(const OpAlphabet& other) const
{
    if (names_ != other.names_ || matrix_ != other.matrix_) return false;
    const Lifting* a = lifting();
    const Lifting* b = other.lifting();
    if ((a == nullptr) != (b == nullptr)) return false;
    if (a != nullptr && (a->vars != b->vars || a->boundary != b->boundary)) return false;
    return true;
}

AlphabetPtr lift_alphabet(AlphabetPtr base, std::vector<std::string> vars, bool boundary)
{
    if (base->lifting() != nullptr) throw Error("cannot lift an already lifted alphabet");
    if (vars.size() > 20) throw Error("too many lifted components");
    const std::size_t n = base->size();
    const std::size_t letters = n + (boundary ? 2 : 0);
    const std::uint32_t span = 1u << vars.size();

    auto letter_name = [&](std::size_t l) -> std::string {
        if (l < n) return base->name(static_cast<Symbol>(l));
        return l == n ? "<|" : "|>";
    };
    std::vector<std::string> names;
    names.reserve(letters * span);
    for (std::size_t l = 0; l < letters; ++l) {
        for (std::uint32_t bits = 0; bits < span; ++bits) {
            std::string nm = letter_name(l);
            if (!vars.empty()) {
                nm += ':';
                for (std::size_t k = 0; k < vars.size(); ++k) nm += ((bits >> k) & 1u) ? '1' : '0';
            }
            names.push_back(std::move(nm));
        }
    }

    auto out = std::make_shared<OpAlphabet>(std::move(names));
    // Relation between two letters of the lifted alphabet (kSharp = outer #).
    auto letter_prec = [&](std::size_t a, std::size_t b) -> std::optional<PrecRel> {
        const bool a_sharp = a == SIZE_MAX;
        const bool b_sharp = b == SIZE_MAX;
        if (!boundary) {
            return base->prec(a_sharp ? kSharp : static_cast<Symbol>(a),
                              b_sharp ? kSharp : static_cast<Symbol>(b));
        }
        const bool a_left = a == n, a_right = a == n + 1;
        const bool b_left = b == n, b_right = b == n + 1;
        if (a_sharp) return b_left ? std::optional(PrecRel::Yields) : std::nullopt;
        if (b_sharp) return a_right ? std::optional(PrecRel::Takes) : std::nullopt;
        if (a_left && b_right) return PrecRel::Equal;
        if (a_right || b_left) return std::nullopt;
        if (a_left) return base->prec(kSharp, static_cast<Symbol>(b));
        if (b_right) return base->prec(static_cast<Symbol>(a), kSharp);
        return base->prec(static_cast<Symbol>(a), static_cast<Symbol>(b));
    };
    for (std::size_t la = 0; la <= letters; ++la) {
        const std::size_t a = la == letters ? SIZE_MAX : la;
        for (std::size_t lb = 0; lb <= letters; ++lb) {
            const std::size_t b = lb == letters ? SIZE_MAX : lb;
            auto rel = letter_prec(a, b);
            if (!rel) continue;
            const std::uint32_t a_count = a == SIZE_MAX ? 1 : span;
            const std::uint32_t b_count = b == SIZE_MAX ? 1 : span;
            for (std::uint32_t x = 0; x < a_count; ++x) {
                const Symbol sa = a == SIZE_MAX ? kSharp : static_cast<Symbol>(a * span + x);
                for (std::uint32_t y = 0; y < b_count; ++y) {
                    const Symbol sb = b == SIZE_MAX ? kSharp : static_cast<Symbol>(b * span + y);
                    out->set(sa, sb, *rel);
                }
            }
        }
    }
    out->set_lifting(Lifting{std::move(base), std::move(vars), boundary});
    return out;
}

namespace {
const Lifting& require_lifting(const OpAlphabet& alpha)
{
    const Lifting* l = alpha.lifting();
    if (l == nullptr) throw Error("alphabet is not lifted");
    return *l;
}
} // namespace

std::uint32_t lifted_letter(const OpAlphabet& alpha, Symbol s)
{
    return s >> require_lifting(alpha).width();
}

std::uint32_t lifted_bits(const OpAlphabet& alpha, Symbol s)
{
    return s & ((1u << require_lifting(alpha).width()) - 1u);
}

Symbol lifted_symbol(const OpAlphabet& alpha, std::uint32_t letter, std::uint32_t bits)
{
    return (letter << require_lifting(alpha).width()) | bits;
}

Symbol symb(const OpAlphabet& alpha, Symbol s)
{
    if (s == kSharp) return kSharp;
    const Lifting& l = require_lifting(alpha);
    const std::uint32_t letter = s >> l.width();
    if (letter >= l.base->size()) return kSharp;
    return letter;
}

} // namespace floyd
