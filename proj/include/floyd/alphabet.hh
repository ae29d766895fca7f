#ifndef FLOYD_ALPHABET_HH
#define FLOYD_ALPHABET_HH

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace floyd {

using Symbol = std::uint32_t;

/// The delimiter `#`. Never a member of the symbol set.
inline constexpr Symbol kSharp = std::numeric_limits<Symbol>::max();

/// Word over the terminal symbols, without the implied delimiters.
using Word = std::vector<Symbol>;

enum class PrecRel : std::uint8_t { Yields, Equal, Takes };

char to_char(PrecRel rel);
std::optional<PrecRel> prec_from_char(char c);

class OpAlphabet;

/**
 * Extra structure carried by an alphabet whose symbols are bit tuples.
 *
 * A lifted symbol is `letter * 2^m + bits`, where `bits` holds one bit per
 * set variable (bit k belongs to vars[k]). Letters 0..n-1 are the base
 * symbols. With `boundary` set, letters n and n+1 are the left and right
 * end markers: they stand for the delimiter positions 0 and |s|+1 so that
 * variables can contain those positions too.
 */
struct Lifting {
    std::shared_ptr<const OpAlphabet> base;
    std::vector<std::string> vars;
    bool boundary = false;

    std::size_t width() const { return vars.size(); }
    std::size_t letters() const;
    Symbol left_letter() const;
    Symbol right_letter() const;
};

/**
 * Operator precedence alphabet: a terminal set together with a partial
 * precedence matrix over (symbols + #)^2.
 *
 * The matrix is stored densely; `#` occupies the last row and column.
 */
class OpAlphabet {
public:
    OpAlphabet() = default;
    explicit OpAlphabet(std::vector<std::string> symbols);

    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(Symbol s) const;

    std::optional<Symbol> find(std::string_view name) const;
    /// Like find() but throws for unknown names. Accepts "#".
    Symbol symbol(std::string_view name) const;

    void set(Symbol a, Symbol b, PrecRel rel);
    void unset(Symbol a, Symbol b);
    std::optional<PrecRel> prec(Symbol a, Symbol b) const;
    std::optional<PrecRel> prec(std::string_view a, std::string_view b) const;

    /// Rows of the matrix grouped into classes of identical rows; index
    /// size() holds the class of `#`.
    std::vector<std::uint32_t> row_classes() const;

    const Lifting* lifting() const { return lifting_ ? &*lifting_ : nullptr; }
    void set_lifting(Lifting l) { lifting_ = std::move(l); }

    bool same_structure(const OpAlphabet& other) const;

private:
    std::size_t index(Symbol s) const;

    std::vector<std::string> names_;
    std::unordered_map<std::string, Symbol> by_name_;
    std::vector<std::uint8_t> matrix_;
    std::optional<Lifting> lifting_;
};

using AlphabetPtr = std::shared_ptr<const OpAlphabet>;

bool is_identifier(std::string_view s);

// Lifted alphabets.

/// Builds the tuple alphabet over `base` with one bit per variable. The
/// matrix between tuples is the base matrix between their letters.
AlphabetPtr lift_alphabet(AlphabetPtr base, std::vector<std::string> vars, bool boundary);

/// Letter index (0..letters-1) of a lifted symbol.
std::uint32_t lifted_letter(const OpAlphabet& alpha, Symbol s);
std::uint32_t lifted_bits(const OpAlphabet& alpha, Symbol s);
Symbol lifted_symbol(const OpAlphabet& alpha, std::uint32_t letter, std::uint32_t bits);
/// Base symbol encoded by a lifted symbol; boundary letters map to `#`.
Symbol symb(const OpAlphabet& alpha, Symbol s);

} // namespace floyd

#endif
