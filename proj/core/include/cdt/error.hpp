#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cdt {

/// Malformed or inconsistent input: bad syntax, unknown names, schema violations.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Syntax error in the test or choice grammar, carrying the byte offset of the offending token.
class ParseError : public InputError {
public:
    ParseError(const std::string& what, std::size_t offset)
        : InputError(what + " at offset " + std::to_string(offset)), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// An operation was invoked on data that does not meet its preconditions
/// (e.g. synthesizing a representation for a relation that violates cancellation).
class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A configured resource bound (world count, ray count, brute-force guard) was exceeded.
class LimitExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a caller-supplied stop token is triggered during a long computation.
class Cancelled : public std::runtime_error {
public:
    Cancelled() : std::runtime_error("computation cancelled") {}
};

}  // namespace cdt
