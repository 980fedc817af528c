#pragma once

#include <stdexcept>
#include <string>

namespace oddloop {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of an operation (e.g. even L where odd is required).
class DomainError : public Error {
public:
    using Error::Error;
};

class DivisionByZero : public Error {
public:
    using Error::Error;
};

/// Exact polynomial division left a nonzero remainder.
class NonDivisible : public Error {
public:
    using Error::Error;
};

/// A size cap (state count, lattice width, dense storage) was exceeded.
class CapExceeded : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// An exact result expected to be rational carried a nonzero omega component.
class RationalityViolation : public Error {
public:
    using Error::Error;
};

/// Kernel of a linear system had unexpected dimension.
class RankAnomaly : public Error {
public:
    using Error::Error;
};

class ToleranceExceeded : public Error {
public:
    using Error::Error;
};

/// Evaluation point coincides with a pole of a rational expression.
class PoleError : public Error {
public:
    using Error::Error;
};

/// The dominant eigenvalue was found outside the sector it was assumed to lie in.
class SectorMismatch : public Error {
public:
    using Error::Error;
};

}  // namespace oddloop
