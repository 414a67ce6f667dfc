#pragma once

#include <stdexcept>
#include <string>

namespace aqopt {

// Input fails a documented precondition or invariant (bad schedule range,
// asymmetric coupling matrix, negative angle, ...).
struct ValidationError : std::invalid_argument {
    explicit ValidationError(const std::string& msg) : std::invalid_argument(msg) {}
};

// File could not be parsed at all (as opposed to parsing fine but failing
// validation).
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Two lowest eigenvalues coincide within the solver noise floor; spectral
// quantities relying on a unique ground state are meaningless there.
struct DegeneracyError : std::runtime_error {
    explicit DegeneracyError(const std::string& msg) : std::runtime_error(msg) {}
};

// Requested problem size exceeds the dense-operator memory budget.
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace aqopt
