#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace isocert {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An input lies outside the mathematical domain of an operation (negative
/// cost argument, log of a nonpositive number, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A caller-supplied parameter violates a documented precondition.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// An object could not be built (non-integrable measure, unsolvable
/// normalization of an entropy, ...).
class ConstructionError : public Error {
public:
    using Error::Error;
};

/// Syntax error in a potential or entropy expression. `offset` is the byte
/// offset into the source text.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

} // namespace isocert
