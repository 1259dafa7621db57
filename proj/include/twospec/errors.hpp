#pragma once

#include <stdexcept>
#include <string>

namespace twospec {

/// Failure categories. The numeric values double as CLI exit codes.
enum class ErrorCode : int {
    Usage = 1,
    Validation = 2,
    Numeric = 3,
    Degeneracy = 4,
    NonConvergence = 5,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Argument outside the admissible set (x outside [0,1], n = 0, N = 0, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(ErrorCode::Validation, what) {}
};

// Input object violates a documented precondition (unnormalized eigenfunction, grid mismatch).
class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& what) : Error(ErrorCode::Validation, what) {}
};

class AssemblyError : public Error {
public:
    explicit AssemblyError(const std::string& what) : Error(ErrorCode::Numeric, what) {}
};

class NumericError : public Error {
public:
    explicit NumericError(const std::string& what) : Error(ErrorCode::Numeric, what) {}
};

// Multiple eigenvalues where simple ones are required, or a singular Gram matrix.
class DegeneracyError : public Error {
public:
    explicit DegeneracyError(const std::string& what) : Error(ErrorCode::Degeneracy, what) {}
};

}  // namespace twospec
