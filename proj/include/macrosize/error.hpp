#pragma once

#include <stdexcept>
#include <string>

namespace macrosize {

// Base of everything the library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A physical precondition was violated (negative mass, q outside [0,1], ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Input dimensions or operator/state shapes do not fit together.
class DimensionError : public DomainError {
public:
    using DomainError::DomainError;
};

// Fock truncation lost more weight than allowed.
class TruncationError : public DomainError {
public:
    TruncationError(const std::string& what, double tail, int suggested_dim)
        : DomainError(what), tail_weight(tail), suggested_dim(suggested_dim) {}
    double tail_weight;
    int suggested_dim;
};

// Iterative numerics did not converge or produced an unacceptable residual.
class NumericalError : public Error {
public:
    using Error::Error;
};

// Malformed input file or configuration document.
class ParseError : public Error {
public:
    using Error::Error;
};

// Wigner-grid reconstruction does not reproduce its input.
class ReconstructionError : public Error {
public:
    ReconstructionError(const std::string& what, double residual)
        : Error(what), residual(residual) {}
    double residual;
};

}  // namespace macrosize
