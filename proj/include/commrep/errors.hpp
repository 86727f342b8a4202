#pragma once

#include <stdexcept>
#include <string>

namespace commrep {

/// Base for every error this library raises on bad input.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed arguments: index out of range, dimension or field mismatch, zero vectors.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Refusals that are part of the mathematical contract rather than bugs in the
/// caller: a prime field too small for the grid argument, a commutation pattern
/// that is not the one asked for, an enumeration guard that would blow up.
class DomainRefusal : public Error {
public:
    DomainRefusal(std::string code, const std::string& what)
        : Error(what), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

class FieldTooSmall : public DomainRefusal {
public:
    explicit FieldTooSmall(const std::string& what) : DomainRefusal("field_too_small", what) {}
};

class PatternViolation : public DomainRefusal {
public:
    explicit PatternViolation(const std::string& what) : DomainRefusal("pattern_violation", what) {}
};

class GuardViolation : public DomainRefusal {
public:
    explicit GuardViolation(const std::string& what) : DomainRefusal("guard_violation", what) {}
};

/// JSON input that does not match a schema. The message starts with the JSON
/// pointer of the offending node.
class ParseError : public Error {
public:
    ParseError(std::string path, const std::string& what)
        : Error((path.empty() ? std::string("/") : path) + ": " + what), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace commrep
