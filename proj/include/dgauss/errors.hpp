#pragma once

#include <stdexcept>
#include <string>

namespace dgauss {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Evaluation requested at a pole of a meromorphic function.
class PoleError : public DomainError {
public:
    using DomainError::DomainError;
};

// A theorem hypothesis required by the operation does not hold.
class PreconditionError : public DomainError {
public:
    using DomainError::DomainError;
};

// Degenerate input, e.g. a single-point support or a one-vertex torus.
class DegenerateError : public DomainError {
public:
    using DomainError::DomainError;
};

// Malformed or inconsistent input data (graph files, pmf files).
class ValidationError : public DomainError {
public:
    using DomainError::DomainError;
};

// A size or iteration cap would be exceeded.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace dgauss
