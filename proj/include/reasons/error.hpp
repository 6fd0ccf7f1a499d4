#pragma once

#include <stdexcept>
#include <string>

namespace reasons {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent user input (files, literal lists, DSL text).
class InputError : public Error {
public:
    using Error::Error;
};

// Syntax error in DSL or circuit text, with a 1-based source position.
class ParseError : public InputError {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message)
        : InputError("line " + std::to_string(line) + ", column " + std::to_string(column) +
                     ": " + message),
          line_(line),
          column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

// An operation was called outside its domain (e.g. filtering by an instance
// that does not satisfy the circuit, or a non-monotone circuit handed to a
// monotone query).
class PreconditionError : public Error {
public:
    using Error::Error;
};

}  // namespace reasons
