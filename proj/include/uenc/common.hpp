#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace uenc {

using cx = std::complex<double>;

// Numerical tolerances, fixed globally: state-level invariants get 1e-9,
// pure-algebra oracle comparisons get 1e-12 (double precision leaves ample
// headroom at the dimensions this library allows).
inline constexpr double kStateTol = 1e-9;
inline constexpr double kAlgebraTol = 1e-12;

// Hard cap on total Hilbert-space dimension of any single value.
inline constexpr long kDefaultDimCap = 4096;

// Thrown when a requested tensor/layout would exceed the dimension cap.
struct DimCapError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Thrown when garbled-circuit evaluation detects tampering (no row decrypts).
struct GarbleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown by the CLI layer for malformed experiment configs.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace uenc
