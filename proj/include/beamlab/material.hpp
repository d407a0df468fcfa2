#pragma once

#include <cstddef>
#include <vector>

#include "beamlab/beam.hpp"

namespace beamlab {

/// Ramberg-Osgood law sigma = E eps + alpha E eps^n, extended as an odd function for eps < 0.
struct RambergOsgood {
    double E = 0.0;      // initial modulus [Pa]
    double alpha = 0.0;  // hardening coefficient
    double n = 3.0;      // hardening exponent, > 1

    void validate() const;

    bool operator==(const RambergOsgood&) const = default;
};

double stress(const RambergOsgood& mat, double strain);

/// d sigma / d eps = E + alpha E n |eps|^(n-1).
double tangent_modulus(const RambergOsgood& mat, double strain);

/// Inverse of stress(), by bisection. Round-trips to ~1e-15 relative.
double strain_at_stress(const RambergOsgood& mat, double sigma);

struct NonlinearDeflection {
    StaticProfile profile;
    std::size_t iterations = 0;
    double residual = 0.0;  // final max relative change of the effective modulus
};

/// Cantilever (clamped at 0, free at L) under a point load P at a, with a per-point effective
/// modulus iterated to a fixed point.
///
/// Each sweep takes the extreme-fibre strain eps = |M| (h/2) / (E_eff I), inverts the
/// constitutive law at the stress E eps to get eps_hat, and sets E_eff = E eps_hat / eps.
/// At the fixed point eps = s/E + alpha (s/E)^n with s the section stress, so the section
/// softens as the load grows and alpha = 0 recovers the linear solution exactly. Curvature
/// M / (E_eff I) is integrated twice from the clamp, exactly for piecewise-linear curvature,
/// with the load point added to the integration nodes.
///
/// Throws IterationError when max relative change of E_eff stays above `tol` after `max_iter`.
NonlinearDeflection nonlinear_cantilever_deflection(double P, double a, const BeamSpec& beam,
                                                    const RambergOsgood& mat, double tol = 1e-8,
                                                    std::size_t max_iter = 200,
                                                    std::size_t node_count = 201);

struct DeflectionPair {
    double P = 0.0;      // [N]
    double w_lin = 0.0;  // tip deflection, linear elastic [m]
    double w_nl = 0.0;   // tip deflection, nonlinear [m]
};

/// Tip deflections for each P (ascending).
std::vector<DeflectionPair> linear_vs_nonlinear_curve(const std::vector<double>& P_values, double a,
                                                      const BeamSpec& beam, const RambergOsgood& mat,
                                                      double tol = 1e-8, std::size_t max_iter = 200);

}  // namespace beamlab
