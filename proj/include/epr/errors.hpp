#pragma once

#include <stdexcept>

namespace epr {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed config file, unknown key, unparsable value.
struct ConfigError : Error {
    using Error::Error;
};

// Structurally valid input with out-of-range values.
struct ValidationError : Error {
    using Error::Error;
};

// Correlation requested from a tally with no definite coincidences.
struct EmptyTallyError : Error {
    using Error::Error;
};

// Curve fit attempted on a constant or otherwise unfittable curve.
struct DegenerateFitError : Error {
    using Error::Error;
};

// Output file could not be opened or written.
struct IoError : Error {
    using Error::Error;
};

}  // namespace epr
