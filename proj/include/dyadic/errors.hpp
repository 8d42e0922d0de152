#pragma once

#include <stdexcept>
#include <string>

namespace dyadic {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid argument value (negative mass, coefficient out of [-1,1], x outside [0,1), ...).
struct DomainError : Error {
    using Error::Error;
};

/// Mismatched depths/dimensions between operands.
struct ShapeError : Error {
    using Error::Error;
};

/// A measure that is not a valid positive measure (zero or negative total).
struct MeasureError : Error {
    using Error::Error;
};

/// Malformed input file; message carries file/line context where known.
struct ParseError : Error {
    using Error::Error;
};

/// Ingestion failure (point outside bounds, predicate evaluation failure, ...).
struct IngestError : Error {
    using Error::Error;
};

}  // namespace dyadic
