#pragma once
#include <stdexcept>
#include <string>

namespace rtbp {

// Base for everything thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument outside a mathematical domain (Lambert branch, conic denominator).
struct DomainError : Error {
    using Error::Error;
};

// Iteration failed to reach tolerance within the cap.
struct ConvergenceError : Error {
    using Error::Error;
};

// Malformed or inconsistent scenario input.
struct ConfigError : Error {
    using Error::Error;
};

// The method's solvability conditions do not hold (B <= 0 and friends).
struct SolvabilityError : Error {
    using Error::Error;
};

// A closed form produced an unphysical value (nonpositive radius).
struct ApproximationBreakdown : Error {
    using Error::Error;
};

// Vanishing denominator in a geometric elimination.
struct SingularityError : Error {
    using Error::Error;
};

// f1 = f2 = 0, the angle solve is indeterminate.
struct DegenerateError : Error {
    using Error::Error;
};

// thetadot0 = 0, the conic orbit equation is undefined.
struct DegenerateOrbitError : Error {
    using Error::Error;
};

// Bodies closer than the configured minimum separation.
struct CollisionError : Error {
    using Error::Error;
};

// Integrator exceeded its step budget.
struct StepLimitError : Error {
    using Error::Error;
};

} // namespace rtbp
