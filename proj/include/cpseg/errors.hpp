#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cpseg {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class MissingVariance : public Error {
public:
    using Error::Error;
};

class NonPositiveWeight : public Error {
public:
    using Error::Error;
};

class InvalidTriplet : public Error {
public:
    using Error::Error;
};

class DegenerateRange : public Error {
public:
    using Error::Error;
};

class LengthMismatch : public Error {
public:
    using Error::Error;
};

class InvalidWindow : public Error {
public:
    using Error::Error;
};

/// Raised when a segment scorer cannot answer (transport failure, error reply, crash).
class ScorerFailure : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string &what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class SchemaError : public Error {
public:
    SchemaError(std::size_t line, std::string field, const std::string &what)
        : Error("line " + std::to_string(line) + ", field '" + field + "': " + what),
          line_(line), field_(std::move(field)) {}
    std::size_t line() const noexcept { return line_; }
    const std::string &field() const noexcept { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

} // namespace cpseg
