#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace colehopf {

// Base for everything thrown by this library. The CLI maps subclasses onto
// exit codes: ParseError/ConfigError -> 2, ValidationError -> 1, the
// numeric/domain pair -> 3.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad expression source text. `offset` is a 0-based byte position.
struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t at) : Error(msg), offset(at) {}
    std::size_t offset;
};

// Invalid run configuration: bad flags, out-of-range grid sizes, parameter
// combinations a routine cannot accept.
struct ConfigError : Error {
    using Error::Error;
};

// A mathematical gate failed: compatibility constraint violated, closed form
// does not satisfy its equation, residual above threshold.
struct ValidationError : Error {
    using Error::Error;
};

// Evaluation left a function's real domain: division by zero, log of a
// non-positive number, tangent pole, square root of a negative.
struct DomainError : Error {
    using Error::Error;
};

// Solver breakdown: step-size underflow, singular linear system, blow-up
// where a partial result is not acceptable.
struct NumericError : Error {
    using Error::Error;
};

} // namespace colehopf
