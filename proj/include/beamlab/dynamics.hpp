#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "beamlab/beam.hpp"

namespace beamlab {

using SparseMatrix = Eigen::SparseMatrix<double>;

// ============================================================================
// System description
// ============================================================================

/// M u'' + C u' + K u = F(t).
struct MdofSystem {
    SparseMatrix mass;       // [kg], symmetric positive definite
    SparseMatrix damping;    // [N s/m], symmetric
    SparseMatrix stiffness;  // [N/m], symmetric positive semidefinite
    std::vector<std::string> labels;

    /// Beam systems only: node index of each DOF (constrained nodes are absent).
    std::vector<std::size_t> node_of_dof;
    std::size_t node_count = 0;

    /// Set when the supports leave a rigid-body mode.
    std::optional<std::string> rank_warning;

    Eigen::Index size() const { return mass.rows(); }
    bool undamped() const;
};

/// Newmark parameters. gamma = 1/2, beta = 1/4 is the average-acceleration rule.
struct IntegratorConfig {
    double gamma = 0.5;
    double beta = 0.25;
    double dt = 1e-3;  // [s]

    void validate() const;
};

struct DynamicState {
    Eigen::VectorXd u;
    Eigen::VectorXd v;
    Eigen::VectorXd a;
    double t = 0.0;
};

/// C = alpha_m M + beta_k K.
struct RayleighCoeffs {
    double alpha_m = 0.0;  // [1/s]
    double beta_k = 0.0;   // [s]
};

/// Coefficients giving damping ratio zeta at both omega1 and omega2.
RayleighCoeffs fit_rayleigh(double zeta, double omega1, double omega2);

MdofSystem sdof_system(double m, double c, double k);

/// Two uncoupled axes (x, y) with identical m, c, k.
MdofSystem bridge_2d_system(double m, double c, double k);

// ============================================================================
// Newmark integration
// ============================================================================

/// Factorized effective matrix M + gamma dt C + beta dt^2 K, reusable across steps.
/// Keeps a reference to `sys`, which must outlive the stepper.
class NewmarkStepper {
public:
    NewmarkStepper(const MdofSystem& sys, const IntegratorConfig& cfg);

    /// Advances one step to t + dt with the external force at t + dt.
    DynamicState step(const DynamicState& state, const Eigen::VectorXd& f_next) const;

private:
    const MdofSystem* sys_;
    IntegratorConfig cfg_;
    Eigen::SimplicialLDLT<SparseMatrix> solver_;
};

/// Single step; factorizes the effective matrix on every call. Throws FactorizationError.
DynamicState newmark_step(const MdofSystem& sys, const DynamicState& state,
                          const Eigen::VectorXd& f_next, const IntegratorConfig& cfg);

/// Solves M a0 = F(0) - C v0 - K u0.
Eigen::VectorXd initial_acceleration(const MdofSystem& sys, const Eigen::VectorXd& f0,
                                     const Eigen::VectorXd& u0, const Eigen::VectorXd& v0);

using ForceSchedule = std::function<Eigen::VectorXd(double t)>;

/// Time integration over `tgrid`, sampling every `stride` steps (the final step is always kept).
/// Frames hold DOF displacements; `velocities` (same layout) is filled when requested.
/// Uses tgrid.dt() as the step; cfg.dt is ignored here.
TimeSeriesResult integrate(const MdofSystem& sys, const ForceSchedule& force,
                           const Eigen::VectorXd& u0, const Eigen::VectorXd& v0,
                           const TimeGrid& tgrid, const IntegratorConfig& cfg,
                           std::size_t stride = 1, Eigen::MatrixXd* velocities = nullptr);

// ============================================================================
// Beam discretization
// ============================================================================

/// Lumped nodal masses (rho A dx, half at end nodes) for all N nodes.
Eigen::VectorXd lumped_masses(const BeamSpec& beam, std::size_t node_count);

/// Finite-difference MDOF model of the beam: lumped M, K from the bending operator,
/// Rayleigh C. Constrained nodes are eliminated.
MdofSystem discretize_beam(const BeamSpec& beam, const BoundarySpec& bc, std::size_t node_count,
                           const RayleighCoeffs& damping = {});

/// Ascending generalized eigenfrequencies omega of (K, M) [rad/s]; rigid-body modes come out ~0.
Eigen::VectorXd generalized_frequencies(const MdofSystem& sys);

/// Rayleigh coefficients for a beam model so that the first two flexible modes carry zeta.
RayleighCoeffs rayleigh_for_beam(const BeamSpec& beam, const BoundarySpec& bc,
                                 std::size_t node_count, double zeta);

/// Nodal force vector (full grid) of a moving point load at time t.
Eigen::VectorXd moving_load_force(double P, double v, double x0, const SpatialGrid& grid, double t);

/// Nodal force vector (full grid) of all loads at time t; static loads act at every t.
Eigen::VectorXd beam_load_vector(const std::vector<LoadCase>& loads, const SpatialGrid& grid, double t);

/// Restricts a full-grid vector to the DOFs of a beam system.
Eigen::VectorXd to_dofs(const MdofSystem& sys, const Eigen::VectorXd& nodal);

/// Integrates a beam from rest under `loads` and expands frames back to all N nodes.
TimeSeriesResult simulate_beam(const BeamSpec& beam, const MdofSystem& sys,
                               const std::vector<LoadCase>& loads, const TimeGrid& tgrid,
                               const IntegratorConfig& cfg, std::size_t stride = 1);

// ============================================================================
// Resonance sweep
// ============================================================================

struct SweepPoint {
    double frequency_hz = 0.0;
    double steady_amplitude = 0.0;  // max |midspan w| over the measurement window [m]
};

struct SweepOptions {
    std::size_t settle_periods = 100;
    std::size_t measure_periods = 5;
    std::size_t min_steps_per_period = 32;
    double zeta1 = 0.02;
    /// Measured peak may exceed the peak of the preceding window by at most this factor.
    double growth_tolerance = 1.05;
    std::size_t threads = 1;
};

/// Harmonic point load P0 sin(2 pi f t) at xload for each f; reports the steady midspan
/// amplitude, ascending in f. The step for frequency f is the largest dt' <= cfg.dt that divides the period
/// into at least `min_steps_per_period` equal steps.
/// Throws NonConvergenceError(f) when the response is still growing.
std::vector<SweepPoint> frequency_sweep(const BeamSpec& beam, const BoundarySpec& bc,
                                        std::size_t node_count, double P0, double xload,
                                        const std::vector<double>& freqs,
                                        const IntegratorConfig& cfg, const SweepOptions& opts);

}  // namespace beamlab
