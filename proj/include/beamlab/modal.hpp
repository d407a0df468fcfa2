#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "beamlab/beam.hpp"

namespace beamlab {

/// One free-vibration mode of a uniform Euler-Bernoulli beam.
///
/// phi(x) = c1 sin(beta x) + c2 cos(beta x) + c3 sinh(beta x) + c4 cosh(beta x),
/// scaled so that max |phi| over the sampling grid is 1. The temporal factor
/// q(t) = c5 sin(omega t) + c6 cos(omega t) is carried for completeness; its
/// constants come from initial conditions and play no part in the frequency solve.
struct ModeSolution {
    double beta = 0.0;          // [1/m]
    double omega = 0.0;         // [rad/s]
    double frequency_hz = 0.0;  // [Hz]
    std::array<double, 4> coefficients{};
    double c5 = 0.0;
    double c6 = 1.0;
    BoundarySpec bc;
};

/// Boundary residual rows applied to the four coefficients of phi.
/// Per end: pinned {phi, phi''}, clamped {phi, phi'}, free {phi'', phi'''},
/// spring {phi'', EI phi''' + k phi at x = 0, EI phi''' - k phi at x = L}.
Eigen::Matrix4d characteristic_matrix(double beta, const BeamSpec& beam, const BoundarySpec& bc);

/// Row-scaled determinant whose zeros are the admissible beta.
///
/// Evaluated in the bounded basis {sin, cos, e^{-beta x}, e^{-beta (L - x)}}, which spans the
/// same space as {sin, cos, sinh, cosh}; the two determinants differ by the factor
/// -e^{beta L} / 2 (and positive row scales), so roots and sign changes coincide while the
/// bounded form stays well conditioned for large beta L.
double characteristic_det(double beta, const BeamSpec& beam, const BoundarySpec& bc);

/// First `n_roots` positive roots of characteristic_det, ascending.
/// Scans from 0.1/L in steps of `scan_step` (0 selects 0.05/L) and bisects each sign change
/// to |d beta| L < 1e-10. Throws InsufficientRootsError when fewer are found below
/// beta L = 4 pi n_roots + 10.
std::vector<double> find_beta_roots(const BeamSpec& beam, const BoundarySpec& bc,
                                    std::size_t n_roots, double scan_step = 0.0);

struct NaturalFrequency {
    double omega = 0.0;         // [rad/s]
    double frequency_hz = 0.0;  // [Hz]
};

/// omega = beta^2 sqrt(EI / rho A), f = omega / 2 pi.
std::vector<NaturalFrequency> natural_frequencies(const std::vector<double>& betas,
                                                  const BeamSpec& beam);

/// Mode coefficients for a root beta (null vector of the characteristic matrix).
/// Throws DegenerateModeError for a repeated root.
ModeSolution solve_mode(double beta, const BeamSpec& beam, const BoundarySpec& bc,
                        const SpatialGrid& grid);

/// phi sampled on the grid, max |phi| = 1, largest-magnitude sample positive.
StaticProfile mode_shape(double beta, const BeamSpec& beam, const BoundarySpec& bc,
                         const SpatialGrid& grid);

/// Convenience: roots, frequencies and coefficients of the first `n_modes` modes.
std::vector<ModeSolution> modal_analysis(const BeamSpec& beam, const BoundarySpec& bc,
                                         std::size_t n_modes, std::size_t node_count = 201);

}  // namespace beamlab
