#pragma once

#include <stdexcept>
#include <string>

namespace bhc {

// Base class so callers can catch everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside the documented domain (lambda <= 0, eps outside (0,1), ...).
struct DomainError : Error {
    using Error::Error;
};

// Discretized (1 ∧ t) mass of a Levy measure exceeds the configured cap.
struct NonIntegrableMeasure : Error {
    using Error::Error;
};

// omega(lambda) fell below the positivity gate; 1/omega is not trustworthy.
struct NearZeroSymbol : Error {
    using Error::Error;
};

// Grid sample count per axis is not a power of two.
struct SizeError : Error {
    using Error::Error;
};

// A constant Bernstein function was passed where the Helmholtz theory
// requires a non-constant one.
struct ConstantSymbol : Error {
    using Error::Error;
};

// Field carries more than the tolerated energy fraction in the xi = 0 bin.
struct ZeroModeEnergy : Error {
    using Error::Error;
};

// No (box, lattice point) pair realizes the requested |xi|^2 within bounds.
struct LatticeUnreachable : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

// Multi-layer order k > 2 is not synthesized.
struct UnsupportedOrder : Error {
    using Error::Error;
};

// Spectrum of the generator has no eigenvalue 1.
struct NoUnitEigenvalue : Error {
    using Error::Error;
};

// Requested computation exceeds the configured node budget.
struct BudgetExceeded : Error {
    using Error::Error;
};

// Malformed input file or identifier string.
struct ParseError : Error {
    using Error::Error;
};

} // namespace bhc
