#pragma once

#include <stdexcept>
#include <string>

namespace uqf {

// Base class for all errors raised by the library.  Everything derived from
// InputError maps to CLI exit code 2; UnresolvedFactorization maps to 3.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct InputError : Error {
    using Error::Error;
};

struct NotSquarefree : InputError {
    using InputError::InputError;
};
struct OutOfRange : InputError {
    using InputError::InputError;
};
struct MixedFields : InputError {
    using InputError::InputError;
};
struct ZeroElement : InputError {
    using InputError::InputError;
};
struct ZeroInput : InputError {
    using InputError::InputError;
};
struct NotTotallyPositive : InputError {
    using InputError::InputError;
};
struct PreconditionNotMet : InputError {
    using InputError::InputError;
};
struct FirstElementNotOne : InputError {
    using InputError::InputError;
};
struct NoGeneratorFound : InputError {
    using InputError::InputError;
};
struct PerfectSquare : InputError {
    using InputError::InputError;
};
struct Inadmissible : InputError {
    using InputError::InputError;
};
struct ParityViolation : InputError {
    using InputError::InputError;
};
struct EmptyWindow : InputError {
    using InputError::InputError;
};
struct NotSymmetric : InputError {
    using InputError::InputError;
};
struct NotTotallyPositiveDefinite : InputError {
    using InputError::InputError;
};
struct AlreadyRepresented : InputError {
    using InputError::InputError;
};
struct QueueInvalid : InputError {
    using InputError::InputError;
};
struct NonSquarefreeModulus : InputError {
    using InputError::InputError;
};
struct DegenerateInput : InputError {
    using InputError::InputError;
};

// Factorization effort was exhausted before squarefreeness (or a needed
// factorization) could be decided.  Deliberately *not* an InputError.
struct UnresolvedFactorization : Error {
    using Error::Error;
};

// Internal consistency failure (should never fire on valid inputs).
struct LogicError : Error {
    using Error::Error;
};

}  // namespace uqf
