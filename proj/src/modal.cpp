#include "beamlab/modal.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "beamlab/errors.hpp"

namespace beamlab {

namespace {

using Row = Eigen::RowVector4d;

// Derivative of order d (0..3) of {sin, cos, sinh, cosh}(beta x).
Row hyperbolic_basis(double beta, double x, int d) {
    const double s = std::sin(beta * x), c = std::cos(beta * x);
    const double sh = std::sinh(beta * x), ch = std::cosh(beta * x);
    const double scale = std::pow(beta, d);
    switch (d) {
        case 0: return Row(s, c, sh, ch);
        case 1: return scale * Row(c, -s, ch, sh);
        case 2: return scale * Row(-s, -c, sh, ch);
        default: return scale * Row(-c, s, ch, sh);
    }
}

// Derivative of order d of {sin, cos, e^{-beta x}, e^{-beta (L - x)}}.
Row bounded_basis(double beta, double L, double x, int d) {
    const double s = std::sin(beta * x), c = std::cos(beta * x);
    const double decay = std::exp(-beta * x), grow = std::exp(-beta * (L - x));
    Row trig;
    switch (d) {
        case 0: trig << s, c, 0, 0; break;
        case 1: trig << c, -s, 0, 0; break;
        case 2: trig << -s, -c, 0, 0; break;
        default: trig << -c, s, 0, 0; break;
    }
    const double sign = (d % 2 == 0) ? 1.0 : -1.0;
    trig(2) = sign * decay;
    trig(3) = grow;
    return std::pow(beta, d) * trig;
}

template <class Basis>
Eigen::Matrix4d boundary_rows(const BeamSpec& beam, const BoundarySpec& bc, Basis basis) {
    const double EI = derive_section(beam).flexural_rigidity;
    const double L = beam.length;
    Eigen::Matrix4d m;
    auto fill = [&](const EndCondition& end, double x, double outward, int first_row) {
        switch (end.kind) {
            case EndKind::Pinned:
                m.row(first_row) = basis(x, 0);
                m.row(first_row + 1) = basis(x, 2);
                break;
            case EndKind::Clamped:
                m.row(first_row) = basis(x, 0);
                m.row(first_row + 1) = basis(x, 1);
                break;
            case EndKind::Free:
                m.row(first_row) = basis(x, 2);
                m.row(first_row + 1) = basis(x, 3);
                break;
            case EndKind::Spring:
                // Shear balances the spring reaction: -n EI phi''' + k phi = 0 with n the
                // outward normal (-1 at x = 0, +1 at x = L).
                m.row(first_row) = basis(x, 2);
                m.row(first_row + 1) = -outward * EI * basis(x, 3) + end.stiffness * basis(x, 0);
                break;
        }
    };
    fill(bc.left, 0.0, -1.0, 0);
    fill(bc.right, L, 1.0, 2);
    return m;
}

Eigen::Matrix4d bounded_matrix(double beta, const BeamSpec& beam, const BoundarySpec& bc) {
    const double L = beam.length;
    Eigen::Matrix4d m = boundary_rows(beam, bc,
                                      [&](double x, int d) { return bounded_basis(beta, L, x, d); });
    for (int r = 0; r < 4; ++r) {
        const double peak = m.row(r).cwiseAbs().maxCoeff();
        if (peak > 0.0) m.row(r) /= peak;
    }
    return m;
}

void require_positive_beta(double beta) {
    if (!std::isfinite(beta) || beta <= 0.0) throw DomainError("beta must be finite and > 0");
}

}  // namespace

Eigen::Matrix4d characteristic_matrix(double beta, const BeamSpec& beam, const BoundarySpec& bc) {
    require_positive_beta(beta);
    bc.validate();
    return boundary_rows(beam, bc, [&](double x, int d) { return hyperbolic_basis(beta, x, d); });
}

double characteristic_det(double beta, const BeamSpec& beam, const BoundarySpec& bc) {
    require_positive_beta(beta);
    bc.validate();
    return bounded_matrix(beta, beam, bc).partialPivLu().determinant();
}

std::vector<double> find_beta_roots(const BeamSpec& beam, const BoundarySpec& bc,
                                    std::size_t n_roots, double scan_step) {
    beam.validate();
    bc.validate();
    if (n_roots == 0) throw DomainError("n_roots must be >= 1");
    const double L = beam.length;
    if (scan_step == 0.0) scan_step = 0.05 / L;
    if (!std::isfinite(scan_step) || scan_step <= 0.0) throw DomainError("scan_step must be > 0");

    const double beta_min = 0.1 / L;
    const double beta_max = (4.0 * std::numbers::pi * static_cast<double>(n_roots) + 10.0) / L;
    auto det = [&](double b) { return characteristic_det(b, beam, bc); };

    std::vector<double> roots;
    double lo = beta_min;
    double f_lo = det(lo);
    while (roots.size() < n_roots && lo < beta_max) {
        const double hi = std::min(lo + scan_step, beta_max);
        const double f_hi = det(hi);
        if (f_lo == 0.0 && lo > beta_min) {
            roots.push_back(lo);
        } else if (f_lo * f_hi < 0.0) {
            double a = lo, b = hi, fa = f_lo;
            for (int it = 0; it < 200 && (b - a) * L >= 1e-12; ++it) {
                const double mid = 0.5 * (a + b);
                const double fm = det(mid);
                if (fm == 0.0) {
                    a = b = mid;
                    break;
                }
                if ((fa < 0.0) == (fm < 0.0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            const double root = 0.5 * (a + b);
            // A genuine zero is many orders below the bracket values; a jump would not be.
            const double bracket = std::max(std::abs(f_lo), std::abs(f_hi));
            if (std::abs(det(root)) <= 1e-6 * bracket) roots.push_back(root);
        }
        lo = hi;
        f_lo = f_hi;
    }
    if (roots.size() < n_roots) {
        throw InsufficientRootsError("found " + std::to_string(roots.size()) + " of " +
                                         std::to_string(n_roots) + " roots below beta L = " +
                                         std::to_string(beta_max * L),
                                     roots.size());
    }
    return roots;
}

std::vector<NaturalFrequency> natural_frequencies(const std::vector<double>& betas,
                                                  const BeamSpec& beam) {
    const double a = derive_section(beam).wave_coefficient;
    std::vector<NaturalFrequency> out;
    out.reserve(betas.size());
    for (double beta : betas) {
        const double omega = beta * beta * a;
        out.push_back({omega, omega / (2.0 * std::numbers::pi)});
    }
    return out;
}

namespace {

struct BoundedMode {
    Eigen::Vector4d d;  // coefficients in the bounded basis
    ModeSolution mode;
};

BoundedMode solve_bounded(double beta, const BeamSpec& beam, const BoundarySpec& bc,
                          const SpatialGrid& grid) {
    require_positive_beta(beta);
    bc.validate();
    const double L = beam.length;
    const Eigen::Matrix4d m = bounded_matrix(beta, beam, bc);
    Eigen::JacobiSVD<Eigen::Matrix4d> svd(m, Eigen::ComputeFullV);
    const Eigen::Vector4d sv = svd.singularValues();
    if (sv(3) > 1e-6 * sv(0)) {
        throw DomainError("beta = " + std::to_string(beta) + " is not a root of the characteristic equation");
    }
    if (sv(2) <= 1e-8 * sv(0)) {
        throw DegenerateModeError("repeated root at beta = " + std::to_string(beta));
    }
    Eigen::Vector4d d = svd.matrixV().col(3);

    // Normalize on the grid so that the largest-magnitude sample is +1.
    double peak = 0.0;
    for (std::size_t i = 0; i < grid.node_count(); ++i) {
        const double v = bounded_basis(beta, L, grid.position(i), 0).dot(d);
        if (std::abs(v) > std::abs(peak)) peak = v;
    }
    d /= peak;
    if ((m * d).cwiseAbs().maxCoeff() > 1e-6) {
        throw DomainError("boundary residual too large at beta = " + std::to_string(beta));
    }

    // e^{-beta x} = cosh - sinh, e^{-beta (L - x)} = e^{-beta L} (cosh + sinh).
    const double tail = std::exp(-beta * L);
    BoundedMode out{d, {}};
    auto& mode = out.mode;
    mode.beta = beta;
    const auto f = natural_frequencies({beta}, beam).front();
    mode.omega = f.omega;
    mode.frequency_hz = f.frequency_hz;
    mode.coefficients = {d(0), d(1), -d(2) + d(3) * tail, d(2) + d(3) * tail};
    mode.bc = bc;
    return out;
}

}  // namespace

ModeSolution solve_mode(double beta, const BeamSpec& beam, const BoundarySpec& bc,
                        const SpatialGrid& grid) {
    return solve_bounded(beta, beam, bc, grid).mode;
}

StaticProfile mode_shape(double beta, const BeamSpec& beam, const BoundarySpec& bc,
                         const SpatialGrid& grid) {
    // Sampled in the bounded basis; the sinh/cosh coefficients lose digits near x = L.
    const auto solved = solve_bounded(beta, beam, bc, grid);
    StaticProfile shape{grid, Eigen::VectorXd(static_cast<Eigen::Index>(grid.node_count()))};
    for (std::size_t i = 0; i < grid.node_count(); ++i) {
        shape.deflection(static_cast<Eigen::Index>(i)) =
            bounded_basis(beta, beam.length, grid.position(i), 0).dot(solved.d);
    }
    return shape;
}

std::vector<ModeSolution> modal_analysis(const BeamSpec& beam, const BoundarySpec& bc,
                                         std::size_t n_modes, std::size_t node_count) {
    const SpatialGrid grid(beam.length, node_count);
    std::vector<ModeSolution> modes;
    for (double beta : find_beta_roots(beam, bc, n_modes)) {
        modes.push_back(solve_mode(beta, beam, bc, grid));
    }
    return modes;
}

}  // namespace beamlab
