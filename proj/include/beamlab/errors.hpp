#pragma once

#include <stdexcept>
#include <string>

namespace beamlab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ----------------------------------------------------------------------------
// Input problems. The CLI maps these to exit code 2.
// ----------------------------------------------------------------------------

/// A field violates its constraint. `field()` carries the key path, e.g. "beam.length".
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// An argument lies outside the domain of an operation (position off the span, v < 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A load variant the solver cannot handle (e.g. a moving load passed to a static solve).
class InvalidLoadError : public Error {
public:
    using Error::Error;
};

/// Malformed scenario text. Carries the 1-based line and column when known.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(what), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

// ----------------------------------------------------------------------------
// Solver failures. The CLI maps these to exit code 3.
// ----------------------------------------------------------------------------

class SolverError : public Error {
public:
    using Error::Error;
};

class RankDeficiencyError : public SolverError {
public:
    using SolverError::SolverError;
};

class FactorizationError : public SolverError {
public:
    using SolverError::SolverError;
};

class InsufficientRootsError : public SolverError {
public:
    InsufficientRootsError(const std::string& what, std::size_t found)
        : SolverError(what), found_(found) {}

    std::size_t found() const noexcept { return found_; }

private:
    std::size_t found_;
};

class DegenerateModeError : public SolverError {
public:
    using SolverError::SolverError;
};

class IterationError : public SolverError {
public:
    IterationError(const std::string& what, double residual)
        : SolverError(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class NonConvergenceError : public SolverError {
public:
    NonConvergenceError(const std::string& what, double frequency_hz)
        : SolverError(what), frequency_hz_(frequency_hz) {}

    double frequency_hz() const noexcept { return frequency_hz_; }

private:
    double frequency_hz_;
};

/// Scenario-level wrapper so callers see which scenario a solver error came from.
class ScenarioError : public SolverError {
public:
    ScenarioError(std::string scenario, const std::string& what)
        : SolverError(scenario + ": " + what), scenario_(std::move(scenario)) {}

    const std::string& scenario() const noexcept { return scenario_; }

private:
    std::string scenario_;
};

}  // namespace beamlab
