#pragma once

#include <stdexcept>
#include <string>

namespace fmvol {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad argument to an operation (invalid vertex id, non-MCS input, ...).
struct ArgumentError : Error {
    using Error::Error;
};

// Malformed instance file or malformed literal.
struct ParseError : Error {
    using Error::Error;
};

// delta outside the admissible range for the chosen model.
struct PlanError : Error {
    using Error::Error;
};

// A configured cap was exceeded (dimension cap, basis cap, subset cap).
struct ResourceError : Error {
    using Error::Error;
};

// A runtime-checked mathematical invariant failed. Signals a bug.
struct InvariantError : Error {
    using Error::Error;
};

// Caller violated a geometric contract (e.g. unbounded polytope).
struct GeometryError : Error {
    using Error::Error;
};

} // namespace fmvol
