#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace biset {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed metric expression. `offset()` is the byte offset into the source.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, const std::string& message)
        : Error("syntax error at offset " + std::to_string(offset) + ": " + message),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Identifier that is neither a variable nor a known function.
class UnknownIdentifierError : public Error {
public:
    UnknownIdentifierError(std::size_t offset, const std::string& name)
        : Error("unknown identifier '" + name + "' at offset " + std::to_string(offset)),
          name_(name) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// A function was evaluated outside its real domain (ln of a non-positive value,
/// division by zero, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class TableTooSmallError : public Error {
public:
    using Error::Error;
};

/// Centered table is numerically zero: every column is constant, so the
/// 𝔐-coordinates cannot be identified.
class DegenerateTableError : public Error {
public:
    using Error::Error;
};

class MissingEntriesError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace biset
