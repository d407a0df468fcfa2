#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "beamlab/beam.hpp"
#include "beamlab/dynamics.hpp"
#include "beamlab/material.hpp"
#include "beamlab/modal.hpp"

namespace beamlab {

inline constexpr const char* kSchemaVersion = "beamlab/1";
inline constexpr const char* kSolverVersion = "beamlab 1.0.0";

enum class SolverKind { Static, QuasiStatic, Modal, Dynamic, Sweep, Nonlinear };

std::string to_string(SolverKind kind);
SolverKind solver_from_string(const std::string& name);  // throws ValidationError("solver", ...)

struct TimeSpec {
    double start = 0.0;
    double end = 0.0;
    double dt = 0.0;

    bool operator==(const TimeSpec&) const = default;
};

struct SweepSpec {
    double f_min = 0.0;  // [Hz]
    double f_max = 0.0;  // [Hz]
    std::size_t f_count = 0;
    std::size_t settle_periods = 100;
    std::size_t measure_periods = 5;

    /// Evenly spaced, both ends included.
    std::vector<double> frequencies() const;

    bool operator==(const SweepSpec&) const = default;
};

struct Scenario {
    std::string name;
    SolverKind solver = SolverKind::Static;
    BeamSpec beam;
    BoundarySpec bc;
    /// Supports used by the modal solver only (`bc.modal_only`).
    std::optional<BoundarySpec> modal_bc;
    std::vector<LoadCase> loads;
    std::size_t nodes = 201;
    /// For sweeps only dt is used, as an upper bound on the step.
    std::optional<TimeSpec> time;
    double gamma = 0.5;
    double beta = 0.25;
    double zeta1 = 0.02;
    std::optional<RambergOsgood> material;
    std::optional<SweepSpec> sweep;
    std::vector<double> probes;  // [m]
    std::size_t stride = 1;

    /// Key paths filled with defaults while parsing or building a preset.
    std::vector<std::string> applied_defaults;

    /// Solver-specific checks on top of the per-field ones. Throws ValidationError.
    void validate() const;

    const BoundarySpec& modal_boundary() const { return modal_bc ? *modal_bc : bc; }
    IntegratorConfig integrator() const;

    /// Equality ignores applied_defaults.
    bool operator==(const Scenario& other) const;
};

/// Parses and validates a scenario document. Unknown keys are rejected with their key path.
/// Throws ParseError (malformed JSON, with line and column) or ValidationError.
Scenario parse_scenario(std::string_view text);

/// Canonical JSON form; parse_scenario(to_json(s).dump()) == s.
nlohmann::json to_json(const Scenario& s);

std::vector<std::string> preset_names();

/// Throws ValidationError("preset", ...) listing the valid names.
Scenario preset(const std::string& name);

// ============================================================================
// Execution
// ============================================================================

/// Rectangular numeric table written as one CSV file.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct ResultSet {
    Scenario scenario;
    std::optional<TimeSeriesResult> series;  // static runs hold one frame at t = start
    std::vector<ModeSolution> modes;
    std::vector<SweepPoint> sweep;
    std::vector<DeflectionPair> curve;
    /// Further tables by file name, e.g. "mode_shapes.csv".
    std::map<std::string, Table> tables;
    nlohmann::json provenance;

    /// Throws DomainError naming the first non-finite value.
    void check() const;
};

struct RunOptions {
    std::size_t modes = 3;
    std::size_t threads = 1;
    std::optional<std::size_t> stride;  // overrides scenario.stride
};

/// Deterministic: no clock, no randomness, independent of `threads`.
/// Solver failures are rethrown as ScenarioError carrying the scenario name.
ResultSet run_scenario(const Scenario& s, const RunOptions& opts = {});

// ============================================================================
// Output
// ============================================================================

/// Shortest decimal string that parses back to the same double.
std::string format_number(double v);

std::string to_csv(const Table& table);
Table frames_table(const TimeSeriesResult& series);
Table probes_table(const TimeSeriesResult& series);

/// Writes frames.csv, probes.csv, modes.csv, sweep.csv, extra tables and provenance.json
/// (whichever apply) into `dir`, creating it. Returns the file names written.
std::vector<std::string> write_csv(const ResultSet& r, const std::string& dir);

}  // namespace beamlab
