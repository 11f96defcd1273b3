#pragma once

#include <stdexcept>
#include <string>

namespace worldsim {

// Base for everything thrown by the library. The CLI maps InputError -> exit 2
// and RuntimeFailure -> exit 3.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed inputs: files, expressions, model definitions, flag values.
class InputError : public Error {
public:
    using Error::Error;
};

// Numeric or execution failures discovered while running.
class RuntimeFailure : public Error {
public:
    using Error::Error;
};

class ParseError : public InputError {
public:
    using InputError::InputError;
};

class DuplicateNameError : public InputError {
public:
    using InputError::InputError;
};

class UnknownReferenceError : public InputError {
public:
    using InputError::InputError;
};

class AlgebraicLoopError : public InputError {
public:
    using InputError::InputError;
};

class UnknownParameterError : public InputError {
public:
    using InputError::InputError;
};

class OutOfRangeError : public InputError {
public:
    using InputError::InputError;
};

class BadLabelError : public InputError {
public:
    using InputError::InputError;
};

class MissingParameterError : public InputError {
public:
    using InputError::InputError;
};

class MissingOutputError : public InputError {
public:
    using InputError::InputError;
};

class MissingVariableError : public InputError {
public:
    using InputError::InputError;
};

class MissingMilestoneError : public InputError {
public:
    using InputError::InputError;
};

class DegenerateTargetError : public InputError {
public:
    using InputError::InputError;
};

class NonMonotoneAmbitionError : public InputError {
public:
    using InputError::InputError;
};

class EmptyGoalError : public InputError {
public:
    using InputError::InputError;
};

class DomainError : public InputError {
public:
    using InputError::InputError;
};

class NonFiniteValueError : public RuntimeFailure {
public:
    using RuntimeFailure::RuntimeFailure;
};

class NegativePopulationError : public RuntimeFailure {
public:
    using RuntimeFailure::RuntimeFailure;
};

class NegativeReservoirError : public RuntimeFailure {
public:
    using RuntimeFailure::RuntimeFailure;
};

class RealizationFailure : public RuntimeFailure {
public:
    using RuntimeFailure::RuntimeFailure;
};

class ObjectiveFailure : public RuntimeFailure {
public:
    using RuntimeFailure::RuntimeFailure;
};

class ZeroReferenceError : public RuntimeFailure {
public:
    using RuntimeFailure::RuntimeFailure;
};

} // namespace worldsim
