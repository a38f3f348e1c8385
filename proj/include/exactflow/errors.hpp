#pragma once

#include <stdexcept>
#include <string>

namespace exactflow {

// Root of the library's exception hierarchy. Every operation reports contract
// violations by throwing one of the types below.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the real domain of an operation (nonpositive power base,
// rho <= 0, gamma == 1, non-finite values, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// A bracketed root search was given an interval without a sign change.
class BracketError : public Error {
public:
    using Error::Error;
};

// Division by a vanishing quantity: V = 0, W = 0, r = 0, zero denominator of
// a rational potential, stagnation point.
class SingularityError : public Error {
public:
    using Error::Error;
};

// The linear system defining reduced derivatives is singular (sonic
// degeneracy of a reduction).
class SingularSystemError : public SingularityError {
public:
    using SingularityError::SingularityError;
};

// A finite-difference stencil touched a point where the sampled field is not
// defined.
class StencilError : public Error {
public:
    using Error::Error;
};

// Invalid parameters or configuration for a solution family.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace exactflow
