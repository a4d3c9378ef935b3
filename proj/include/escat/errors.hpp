// errors.hpp — Exception types shared across the library

#pragma once

#include <stdexcept>
#include <string>

namespace escat {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed system description (missing levels, non-Hermitian couplings, ...)
struct InvalidSpec : Error {
    using Error::Error;
};

// Coincident points requested from a medium whose self-term diverges
struct SingularSelfTerm : Error {
    using Error::Error;
};

// Detuned non-Hermitian Hamiltonian is singular (exact zero-width dark resonance)
struct SingularAtFrequency : Error {
    using Error::Error;
};

// Decay matrix has a negative eigenvalue beyond tolerance
struct NotPositiveSemidefinite : Error {
    using Error::Error;
};

// Fixed-step integrator asked to take too large a step
struct StepTooLarge : Error {
    using Error::Error;
};

// Full-space oracle dimension overflow
struct TooLarge : Error {
    using Error::Error;
};

// Steady-state solve did not converge
struct NoSteadyState : Error {
    using Error::Error;
};

// Configuration schema violation, carries the JSON path of the offending field
struct SchemaError : Error {
    std::string path;
    SchemaError(std::string p, const std::string& reason)
        : Error(p + ": " + reason), path(std::move(p)) {}
};

} // namespace escat
