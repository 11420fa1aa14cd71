#pragma once

#include <stdexcept>
#include <string>

namespace qcorr {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input document (syntax or shape), message carries the field path.
struct ParseError : Error {
    using Error::Error;
};

// Structural mismatch between operands (dimensions, layouts).
struct DimensionError : Error {
    using Error::Error;
};

// A model or input failed a semantic check it was required to satisfy.
struct ValidationError : Error {
    using Error::Error;
};

// Generic-element constructions kept failing verification after retries,
// or an iterate hit an unrecoverable numerical dead end.
struct DegeneracyError : Error {
    using Error::Error;
};

} // namespace qcorr
