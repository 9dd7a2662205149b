#pragma once

#include <stdexcept>
#include <string>

namespace pitmanlab {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested operation is not supported by the distribution / configuration
// (e.g. second moment of a Cauchy, density of a lattice).
struct CapabilityError : Error {
    using Error::Error;
};

// Moment order out of range (negative, or beyond what a table holds).
struct OrderError : Error {
    using Error::Error;
};

// Input point outside the domain of the operation (off-lattice sample,
// score at a non-differentiable point).
struct DomainError : Error {
    using Error::Error;
};

// Posterior support is empty: the sample cannot have come from the model.
struct DegenerateError : Error {
    using Error::Error;
};

// Exact enumeration would exceed the configured guard.
struct SizeError : Error {
    using Error::Error;
};

// Mismatched dimensions / subset structure.
struct ShapeError : Error {
    using Error::Error;
};

// Numerically singular covariance matrix where an inverse is required.
struct SingularityError : Error {
    using Error::Error;
};

// Invalid experiment configuration; `pointer` is the JSON pointer of the
// offending field.
struct ConfigError : Error {
    explicit ConfigError(const std::string& json_pointer, const std::string& what)
        : Error(json_pointer + ": " + what), pointer(json_pointer) {}
    std::string pointer;
};

} // namespace pitmanlab
