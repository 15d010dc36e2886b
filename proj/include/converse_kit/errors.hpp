#pragma once

#include <stdexcept>
#include <string>

namespace converse_kit {

/// Input outside the mathematical domain of an operation (t < 1, q_min <= 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// P is not absolutely continuous with respect to Q.
class AbsoluteContinuityError : public DomainError {
public:
    using DomainError::DomainError;
};

/// The request is valid but exceeds what exhaustive computation supports.
class CapabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An application config violates one of its stated inequalities.
/// The message names the inequality.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A report or packing file could not be written or read.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace converse_kit
