#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace cpnconf {

// Input text that cannot be parsed: malformed JSON, bad expression syntax.
// `location` carries "file:line" or a token position when known.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& message, std::string location = {})
        : std::runtime_error(location.empty() ? message : location + ": " + message),
          location_(std::move(location)) {}

    const std::string& location() const noexcept { return location_; }

private:
    std::string location_;
};

// Structurally valid input that violates a schema rule (duplicate identifiers
// in one event, non-increasing sequence numbers, conflicting object colors).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A computed value left its declared domain: negative quantity in a
// natural-number position, non-positive price, division by zero.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Expression evaluation could not proceed at all (unbound variable,
// arithmetic over non-numeric operands).
class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Model and log disagree structurally, e.g. an object color that has no
// source place, or an activity the net does not know.
class MismatchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid run configuration: rates outside [0,1], a priority rule naming an
// attribute absent from the place schema.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace cpnconf
