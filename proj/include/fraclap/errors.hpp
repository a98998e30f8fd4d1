// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fraclap {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class DisconnectedError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class DimensionMismatch : public Error {
public:
    DimensionMismatch(const std::string& what, long expected, long got)
        : Error(what + ": expected length " + std::to_string(expected) + ", got " + std::to_string(got)) {}
};

class NumericalError : public Error {
public:
    using Error::Error;
};

class InvalidExponent : public Error {
public:
    using Error::Error;
};

class QuadratureError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class SingularSystem : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Iterates of the monotone scheme left the order interval; indicates a numerics bug.
class MonotonicityViolation : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// c = 0 minimisation converged to a point whose Lagrange multiplier is not positive.
class MultiplierSignError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// A solver route gave up; `trace` lists what was attempted.
class NotSolved : public Error {
public:
    NotSolved(const std::string& what, std::vector<std::string> trace = {})
        : Error(what), trace_(std::move(trace)) {}

    const std::vector<std::string>& trace() const noexcept { return trace_; }

private:
    std::vector<std::string> trace_;
};

class InfeasibleStart : public NotSolved {
public:
    using NotSolved::NotSolved;
};

/// The sign analysis proves the problem has no solution.
class CertifiedUnsolvable : public Error {
public:
    CertifiedUnsolvable(const std::string& what, std::vector<std::string> reasons)
        : Error(what), reasons_(std::move(reasons)) {}

    const std::vector<std::string>& reasons() const noexcept { return reasons_; }

private:
    std::vector<std::string> reasons_;
};

class NotAnUpperSolution : public Error {
public:
    using Error::Error;
};

class ThresholdIsMinusInfinity : public Error {
public:
    using Error::Error;
};

/// Problem data outside the regime an operation is defined for.
class InvalidProblem : public Error {
public:
    using Error::Error;
};

}  // namespace fraclap
