#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fountain {

/// Base for every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller broke a precondition (wrong field, wrong scheme, bad dimensions).
class UsageError : public Error {
public:
    using Error::Error;
};

/// Mathematically undefined request, e.g. the inverse of zero.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A field or table could not be built from the given parameters.
class ConstructionError : public Error {
public:
    using Error::Error;
};

/// Invalid codec or distribution parameters.
class ParameterError : public Error {
public:
    using Error::Error;
};

class SingularMatrixError : public Error {
public:
    SingularMatrixError(std::size_t rank, std::size_t required)
        : Error("singular matrix: rank " + std::to_string(rank) + " of " + std::to_string(required)),
          rank_(rank), required_(required) {}

    std::size_t rank() const noexcept { return rank_; }
    std::size_t required() const noexcept { return required_; }

private:
    std::size_t rank_;
    std::size_t required_;
};

/// A decoder was handed fewer packets than it needs.
class InsufficientPacketsError : public Error {
public:
    InsufficientPacketsError(std::size_t have, std::size_t need)
        : Error("insufficient packets: have " + std::to_string(have) + ", need " + std::to_string(need)),
          have_(have), need_(need) {}

    std::size_t have() const noexcept { return have_; }
    std::size_t need() const noexcept { return need_; }

private:
    std::size_t have_;
    std::size_t need_;
};

/// Two packets carry the same coding row where distinct rows are required.
class DuplicatePacketError : public Error {
public:
    using Error::Error;
};

enum class ParseErrorKind {
    truncated,
    bad_magic,
    bad_version,
    unknown_scheme,
    bad_header,
};

const char* to_string(ParseErrorKind kind) noexcept;

class ParseError : public Error {
public:
    ParseError(ParseErrorKind kind, const std::string& detail)
        : Error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

    ParseErrorKind kind() const noexcept { return kind_; }

private:
    ParseErrorKind kind_;
};

}  // namespace fountain
