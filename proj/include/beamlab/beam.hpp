#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace beamlab {

// ============================================================================
// Beam geometry and material
// ============================================================================

/// Uniform rectangular beam. SI units throughout.
struct BeamSpec {
    double length = 0.0;           // L  [m]
    double width = 0.0;            // b  [m]
    double height = 0.0;           // h  [m]
    double elastic_modulus = 0.0;  // E  [Pa]
    double density = 0.0;          // rho [kg/m^3]

    /// Throws ValidationError naming the first non-positive (or non-finite) field.
    void validate() const;

    bool operator==(const BeamSpec&) const = default;
};

/// Sectional quantities derived from a BeamSpec.
struct SectionProperties {
    double second_moment = 0.0;    // I = b h^3 / 12   [m^4]
    double area = 0.0;             // A = b h          [m^2]
    double flexural_rigidity = 0.0;// EI               [N m^2]
    double mass_per_length = 0.0;  // rho A            [kg/m]
    double wave_coefficient = 0.0; // a = sqrt(EI / rho A)  [m^2/s]
};

SectionProperties derive_section(const BeamSpec& beam);

// ============================================================================
// Boundary conditions
// ============================================================================

enum class EndKind { Pinned, Free, Clamped, Spring };

struct EndCondition {
    EndKind kind = EndKind::Pinned;
    double stiffness = 0.0;  // [N/m], Spring only

    static EndCondition pinned() { return {EndKind::Pinned, 0.0}; }
    static EndCondition free() { return {EndKind::Free, 0.0}; }
    static EndCondition clamped() { return {EndKind::Clamped, 0.0}; }
    static EndCondition spring(double k) { return {EndKind::Spring, k}; }

    /// True when the end pins the deflection to zero (pinned or clamped).
    bool fixes_deflection() const { return kind == EndKind::Pinned || kind == EndKind::Clamped; }

    bool operator==(const EndCondition&) const = default;
};

struct BoundarySpec {
    EndCondition left;
    EndCondition right;

    void validate() const;

    /// False when the supports leave a rigid-body mode (free-free, pinned-free, spring-free, ...).
    bool restrains_rigid_body() const;

    static BoundarySpec pinned_pinned() { return {EndCondition::pinned(), EndCondition::pinned()}; }
    static BoundarySpec clamped_free() { return {EndCondition::clamped(), EndCondition::free()}; }

    bool operator==(const BoundarySpec&) const = default;
};

std::string to_string(EndKind kind);
EndKind end_kind_from_string(const std::string& name);  // throws ValidationError("bc", ...)

// ============================================================================
// Loads
// ============================================================================

/// Uniformly distributed load over the whole span.
struct Udl {
    double q = 0.0;  // [N/m]
    bool operator==(const Udl&) const = default;
};

/// Stationary concentrated load.
struct PointLoad {
    double P = 0.0;         // [N]
    double position = 0.0;  // a [m]
    bool operator==(const PointLoad&) const = default;
};

/// Concentrated load travelling at constant speed: x_p(t) = x0 + v t.
struct MovingPointLoad {
    double P = 0.0;   // [N]
    double v = 0.0;   // [m/s]
    double x0 = 0.0;  // [m]

    double position_at(double t) const { return x0 + v * t; }
    bool operator==(const MovingPointLoad&) const = default;
};

/// Stationary load with magnitude P0 sin(2 pi f t).
struct HarmonicPointLoad {
    double P0 = 0.0;        // [N]
    double f = 0.0;         // [Hz]
    double position = 0.0;  // [m]

    double magnitude_at(double t) const;
    bool operator==(const HarmonicPointLoad&) const = default;
};

using LoadCase = std::variant<Udl, PointLoad, MovingPointLoad, HarmonicPointLoad>;

/// Checks finiteness, positions in [0, L], v >= 0, f > 0. `field` prefixes error messages.
void validate_load(const LoadCase& load, double length, const std::string& field = "load");

bool is_time_dependent(const LoadCase& load);
std::string describe(const LoadCase& load);

// ============================================================================
// Grids
// ============================================================================

/// Uniform node grid on [0, L].
class SpatialGrid {
public:
    SpatialGrid(double length, std::size_t node_count);

    std::size_t node_count() const { return node_count_; }
    double length() const { return length_; }
    double spacing() const { return spacing_; }

    /// Node position; the last node is exactly L.
    double position(std::size_t i) const;
    std::vector<double> positions() const;

    /// Index of the node nearest to x (x clamped to the span).
    std::size_t nearest_node(double x) const;

    bool operator==(const SpatialGrid&) const = default;

private:
    double length_;
    std::size_t node_count_;
    double spacing_;
};

class TimeGrid {
public:
    TimeGrid(double t_start, double t_end, double dt);

    double start() const { return start_; }
    double end() const { return end_; }
    double dt() const { return dt_; }

    /// round((t_end - t_start) / dt)
    std::size_t step_count() const { return steps_; }
    double time(std::size_t k) const { return start_ + static_cast<double>(k) * dt_; }

    bool operator==(const TimeGrid&) const = default;

private:
    double start_;
    double end_;
    double dt_;
    std::size_t steps_;
};

// ============================================================================
// Results
// ============================================================================

struct ResultMetadata {
    std::vector<double> node_positions;  // column coordinates of `frames`
    BeamSpec beam;
    std::string load;
    std::string solver;
};

/// Sampled deflection field. Row k of `frames` is the field at `times[k]`.
struct TimeSeriesResult {
    std::vector<double> times;
    Eigen::MatrixXd frames;                          // time x node [m]
    std::map<std::size_t, std::vector<double>> probes;  // node index -> history
    ResultMetadata metadata;

    /// Throws SolverError when rows and times disagree or a value is not finite.
    void check() const;

    /// Adds probe histories for the nodes nearest to the given positions.
    void attach_probes(const std::vector<double>& positions);
};

/// Static deflection profile on a grid.
struct StaticProfile {
    SpatialGrid grid;
    Eigen::VectorXd deflection;

    double at_node(std::size_t i) const { return deflection(static_cast<Eigen::Index>(i)); }
};

}  // namespace beamlab
