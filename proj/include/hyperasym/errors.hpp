#pragma once

#include <stdexcept>
#include <string>

namespace hyperasym {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid user input: bad configuration, parameters out of range.
class InputError : public Error {
public:
    using Error::Error;
};

// Direction lies within delta of a Stokes direction.
class StokesDirectionError : public InputError {
public:
    using InputError::InputError;
};

// Evaluation hit a pole (of the datum or of the gamma function).
class SingularityError : public Error {
public:
    using Error::Error;
};

// Iterative numerics failed to reach the requested tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

// Contour construction failed (degenerate or non-enclosing geometry).
class GeometryError : public Error {
public:
    using Error::Error;
};

}  // namespace hyperasym
