#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lagrmc {

// Root of the library's typed error hierarchy. Everything thrown on purpose
// derives from this, so callers can separate engine failures from plain
// std::exception bugs.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---- geometry ----

// outward_normal was asked for a point that is not within the boundary band.
class NotOnBoundary : public Error {
public:
    using Error::Error;
};

// first_exit_time was given a start point beyond the exterior tolerance band.
class StartsOutside : public Error {
public:
    using Error::Error;
};

// ---- drift ----

// exact_drift only supports product densities with Gaussian or uniform-box
// velocity marginals; anything else lands here.
class UnsupportedDensity : public Error {
public:
    using Error::Error;
};

// ---- simulator ----

// A particle reflected more than max_reflections_per_step times inside one
// step: the step size is too large for the geometry. Carries the particle and
// the time at which the cap was hit.
class ReflectionCapExceeded : public Error {
public:
    ReflectionCapExceeded(std::string msg, std::uint64_t particle_id, double time)
        : Error(std::move(msg)), particle_id(particle_id), time(time) {}

    std::uint64_t particle_id;
    double time;
};

// Initial-law margin exceeds the inradius: no interior point is that deep.
class InfeasibleMargin : public Error {
public:
    using Error::Error;
};

// pathwise_identity_check needs a run that stored its kick bookkeeping.
class MissingIncrements : public Error {
public:
    using Error::Error;
};

// A particle ended a step outside the domain beyond the repairable band.
// Indicates an internal logic error, never expected in normal operation.
class ContainmentViolation : public Error {
public:
    using Error::Error;
};

// ---- diagnostics ----

class EmptySample : public Error {
public:
    using Error::Error;
};

// A diagnostic was asked to run outside the regime where its analytic
// prediction is valid (e.g. hit-rate prediction with a nonzero kernel).
class WrongRegime : public Error {
public:
    using Error::Error;
};

// ---- half-space passage-time oracle ----

class NonpositiveArgument : public Error {
public:
    using Error::Error;
};

class NonpositiveElapsed : public Error {
public:
    using Error::Error;
};

// ---- config / io ----

// Syntax error in a config file; 1-based line and column.
class ParseError : public Error {
public:
    ParseError(std::string msg, int line, int col)
        : Error(std::move(msg)), line(line), col(col) {}

    int line;
    int col;
};

// One semantic problem with a parsed config: which field, which constraint.
struct ValidationIssue {
    std::string field;
    std::string constraint;

    std::string to_string() const { return field + ": " + constraint; }
};

// Carries *all* validation problems found, not just the first.
class ValidationError : public Error {
public:
    ValidationError(std::string msg, std::vector<ValidationIssue> issues)
        : Error(std::move(msg)), issues(std::move(issues)) {}

    std::vector<ValidationIssue> issues;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace lagrmc
