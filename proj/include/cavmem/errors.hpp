// errors.hpp — Error types shared across the library.
//
// std::invalid_argument is used for plain precondition violations; the types
// here mark conditions a caller may want to branch on (the CLI maps them to
// the "physics infeasible" exit code).

#pragma once

#include <stdexcept>
#include <string>

namespace cavmem {

// Fock-space cutoff too small for the requested state.
struct CutoffError : std::runtime_error {
    int required_dim;
    CutoffError(const std::string& msg, int required)
        : std::runtime_error(msg), required_dim(required) {}
};

// Envelope grid too short: mass outside the grid exceeds the tolerance.
struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Impedance matching impossible: the matched-control formula exceeds full
// transparency (cos^2 theta > 1) somewhere the pulse carries weight.
struct UnmatchableError : std::runtime_error {
    double first_violation_time;
    UnmatchableError(const std::string& msg, double t)
        : std::runtime_error(msg), first_violation_time(t) {}
};

// Discretized-bath resolution guard (recurrence inside the window,
// insufficient bandwidth, ...).
struct BathGridError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fixed-step integrator called with a step size above the resolution bound.
struct StepSizeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cavmem
