#pragma once

#include <stdexcept>
#include <string>

namespace phasesvd {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Operand shapes are incompatible (or a declared size does not match the data).
class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& what) : Error(what) {}
};

/// A value violates a domain requirement (non-finite entry, non-positive tolerance).
class ValueError : public Error {
public:
    explicit ValueError(const std::string& what) : Error(what) {}
};

/// Input matrix is not Hermitian within the requested tolerance.
class NotHermitianError : public Error {
public:
    explicit NotHermitianError(const std::string& what) : Error(what) {}
};

/// Iterative solver failed to reach the requested tolerance.
class ConvergenceError : public Error {
public:
    explicit ConvergenceError(const std::string& what) : Error(what) {}
};

/// The complex diagonal could not be solved consistently from the supplied bases.
class PhaseSolveError : public Error {
public:
    explicit PhaseSolveError(const std::string& what) : Error(what) {}
};

/// A phase convention was applied with inconsistent parameters.
class ConventionError : public Error {
public:
    explicit ConventionError(const std::string& what) : Error(what) {}
};

/// Malformed matrix/state document or complex literal.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(what) {}
};

} // namespace phasesvd
