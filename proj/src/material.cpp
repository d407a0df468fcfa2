#include "beamlab/material.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "beamlab/errors.hpp"
#include "beamlab/statics.hpp"

namespace beamlab {

void RambergOsgood::validate() const {
    if (!std::isfinite(E) || E <= 0.0) throw ValidationError("material.E", "must be finite and > 0");
    if (!std::isfinite(alpha) || alpha < 0.0) throw ValidationError("material.alpha", "must be >= 0");
    if (!std::isfinite(n) || n <= 1.0) throw ValidationError("material.n", "must be > 1");
}

double stress(const RambergOsgood& mat, double strain) {
    const double e = std::abs(strain);
    const double s = mat.E * e + mat.alpha * mat.E * std::pow(e, mat.n);
    return std::copysign(s, strain);
}

double tangent_modulus(const RambergOsgood& mat, double strain) {
    const double e = std::abs(strain);
    return mat.E + mat.alpha * mat.E * mat.n * std::pow(e, mat.n - 1.0);
}

double strain_at_stress(const RambergOsgood& mat, double sigma) {
    if (!std::isfinite(sigma)) throw DomainError("stress must be finite");
    const double target = std::abs(sigma);
    if (target == 0.0) return 0.0;
    // stress(eps) >= E eps, so the root lies in [0, target / E].
    double lo = 0.0, hi = target / mat.E;
    for (int it = 0; it < 2000 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (stress(mat, mid) < target ? lo : hi) = mid;
    }
    return std::copysign(0.5 * (lo + hi), sigma);
}

NonlinearDeflection nonlinear_cantilever_deflection(double P, double a, const BeamSpec& beam,
                                                    const RambergOsgood& mat, double tol,
                                                    std::size_t max_iter, std::size_t node_count) {
    const auto section = derive_section(beam);
    mat.validate();
    if (!std::isfinite(P) || P < 0.0) throw DomainError("load P must be >= 0");
    if (!std::isfinite(a) || a <= 0.0 || a > beam.length) throw DomainError("load position a must lie in (0, L]");
    if (!(tol > 0.0)) throw DomainError("tolerance must be > 0");

    const SpatialGrid grid(beam.length, node_count);
    std::vector<double> xs = grid.positions();
    const bool load_on_node = std::any_of(xs.begin(), xs.end(), [a](double x) { return x == a; });
    if (!load_on_node) xs.insert(std::upper_bound(xs.begin(), xs.end(), a), a);

    const double c = 0.5 * beam.height;
    const double I = section.second_moment;
    std::vector<double> moment(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) moment[j] = xs[j] < a ? P * (a - xs[j]) : 0.0;

    std::vector<double> modulus(xs.size(), mat.E);
    NonlinearDeflection out{{grid, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(node_count))}, 0, 0.0};
    bool converged = false;
    while (out.iterations < max_iter) {
        ++out.iterations;
        double change = 0.0;
        for (std::size_t j = 0; j < xs.size(); ++j) {
            const double strain = std::abs(moment[j]) * c / (modulus[j] * I);
            const double updated = strain > 0.0 ? mat.E * strain_at_stress(mat, mat.E * strain) / strain : mat.E;
            change = std::max(change, std::abs(updated - modulus[j]) / modulus[j]);
            modulus[j] = updated;
        }
        out.residual = change;
        if (change < tol) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw IterationError("effective-modulus iteration did not converge in " + std::to_string(max_iter) +
                                 " iterations (residual " + std::to_string(out.residual) + ")",
                             out.residual);
    }

    // w'' = kappa with w(0) = w'(0) = 0; exact for kappa linear on each segment.
    std::size_t node = 0;
    double w = 0.0, slope = 0.0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        if (j > 0) {
            const double h = xs[j] - xs[j - 1];
            const double k0 = moment[j - 1] / (modulus[j - 1] * I);
            const double k1 = moment[j] / (modulus[j] * I);
            w += h * slope + h * h * (2.0 * k0 + k1) / 6.0;
            slope += 0.5 * h * (k0 + k1);
        }
        if (node < node_count && xs[j] == grid.position(node)) {
            out.profile.deflection(static_cast<Eigen::Index>(node++)) = w;
        }
    }
    return out;
}

std::vector<DeflectionPair> linear_vs_nonlinear_curve(const std::vector<double>& P_values, double a,
                                                      const BeamSpec& beam, const RambergOsgood& mat,
                                                      double tol, std::size_t max_iter) {
    if (!std::is_sorted(P_values.begin(), P_values.end())) throw DomainError("P values must be ascending");
    std::vector<DeflectionPair> curve;
    curve.reserve(P_values.size());
    for (double P : P_values) {
        const auto nl = nonlinear_cantilever_deflection(P, a, beam, mat, tol, max_iter);
        const double tip = nl.profile.deflection(nl.profile.deflection.size() - 1);
        curve.push_back({P, cantilever_point_deflection(beam.length, P, a, beam), tip});
    }
    return curve;
}

}  // namespace beamlab
