#ifndef FLOYD_ERROR_HH
#define FLOYD_ERROR_HH

#include <cstddef>
#include <stdexcept>
#include <string>

namespace floyd {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A string has no structure under the precedence matrix.
class StructureError : public Error {
public:
    StructureError(const std::string& what, std::size_t position)
        : Error(what), position_(position) {}

    /// Position in `# s #` where parsing got stuck.
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/// Malformed input text (alphabet, automaton or formula files, tokens).
class SyntaxError : public Error {
public:
    using Error::Error;
};

} // namespace floyd

#endif
