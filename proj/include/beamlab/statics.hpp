#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Sparse>

#include "beamlab/beam.hpp"

namespace beamlab {

// ============================================================================
// Closed-form static deflections (positive w in the load direction)
// ============================================================================

/// Simply supported beam under a uniform load q.
double ss_udl_deflection(double x, double q, const BeamSpec& beam);

/// Simply supported beam under a point load P at a.
double ss_point_deflection(double x, double P, double a, const BeamSpec& beam);

/// Cantilever clamped at x = 0, free at x = L, point load P at a.
double cantilever_point_deflection(double x, double P, double a, const BeamSpec& beam);

// ============================================================================
// Finite-difference bending operator
// ============================================================================

/// EI w'''' discretized with the five-point stencil on a uniform grid and
/// assembled in nodal-force form (K w = F, F in newtons).
///
/// End treatment follows the ghost-node rules:
///   pinned   w = 0, w'' = 0
///   clamped  w = 0, w' = 0
///   free     w'' = 0, w''' = 0
///   spring   w'' = 0, EI w''' balances k w
/// with boundary rows carrying half-cell weight, which keeps K symmetric.
/// Nodes with w = 0 are eliminated; `free_nodes` maps each DOF to its node.
struct BendingOperator {
    SpatialGrid grid;
    Eigen::SparseMatrix<double> stiffness;
    std::vector<std::size_t> free_nodes;
    bool rank_deficient = false;  // supports leave a rigid-body mode
};

BendingOperator assemble_bending_operator(const BeamSpec& beam, const BoundarySpec& bc,
                                          std::size_t node_count);

/// Adds P to the two nodes bracketing x with linear weights. No-op if x is off the span.
void add_point_force(Eigen::VectorXd& nodal, const SpatialGrid& grid, double P, double x);

/// Nodal forces (full grid) for time-independent loads. Throws InvalidLoadError otherwise.
Eigen::VectorXd static_nodal_forces(const std::vector<LoadCase>& loads, const SpatialGrid& grid);

/// Solves K w = F for time-independent loads.
/// Throws RankDeficiencyError when the supports leave a rigid-body mode.
StaticProfile static_fd_solve(const BeamSpec& beam, const BoundarySpec& bc,
                              const std::vector<LoadCase>& loads, std::size_t node_count);

/// Superposed closed-form profile when one exists for the support/load combination
/// (pinned-pinned with udl/point loads, clamped-free with point loads).
std::optional<StaticProfile> closed_form_profile(const BeamSpec& beam, const BoundarySpec& bc,
                                                 const std::vector<LoadCase>& loads,
                                                 std::size_t node_count);

// ============================================================================
// Quasi-static responses on a simply supported beam
// ============================================================================

/// Each frame is the static point-load profile at x_p(t) = x0 + v t; zero once the
/// load is off the span.
TimeSeriesResult quasi_static_moving(const BeamSpec& beam, double P, double v, double x0,
                                     const TimeGrid& tgrid, std::size_t node_count);

/// Each frame is the static point-load profile for P0 sin(2 pi f t) at xload.
TimeSeriesResult quasi_static_sinusoidal(const BeamSpec& beam, double P0, double f, double xload,
                                         const TimeGrid& tgrid, std::size_t node_count);

}  // namespace beamlab
