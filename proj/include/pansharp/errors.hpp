#pragma once

#include <stdexcept>
#include <string>

namespace ps {

// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shape / size mismatches between rasters or against an operation's contract.
struct DimensionError : Error {
    using Error::Error;
};

// Invalid scalar parameters (even kernel size, factor < 1, bad weights, ...).
struct ParameterError : Error {
    using Error::Error;
};

// Non-finite values or numerically degenerate inputs, with context.
struct NumericError : Error {
    using Error::Error;
};

// File format / filesystem problems.
struct IoError : Error {
    using Error::Error;
};

}  // namespace ps
