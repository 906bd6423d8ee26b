#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace gf {

// Bad input: shape, index set, arity, malformed text.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Enumeration or factoring budget exceeded.
class ResourceError : public std::runtime_error {
public:
    ResourceError(const std::string& what, double predicted_log2 = -1.0)
        : std::runtime_error(what), predicted_log2_(predicted_log2) {}
    double predicted_log2() const { return predicted_log2_; }

private:
    double predicted_log2_;
};

// An operation was asked of an object that does not satisfy its axioms.
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// A computed object contradicts a structural prediction.
class ClassificationViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Arithmetic input is not an acceptable vector.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(const std::string& what, int entry, std::string rule)
        : std::invalid_argument(what), entry_(entry), rule_(std::move(rule)) {}
    int entry() const { return entry_; }
    const std::string& rule() const { return rule_; }

private:
    int entry_;
    std::string rule_;
};

}  // namespace gf
