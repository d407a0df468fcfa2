#include "beamlab/statics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SparseCholesky>

#include "beamlab/errors.hpp"

namespace beamlab {

namespace {

void require_on_span(double x, double length, const char* name) {
    if (!std::isfinite(x) || x < 0.0 || x > length) {
        throw DomainError(std::string(name) + " = " + std::to_string(x) + " lies outside [0, L]");
    }
}

using Triplets = std::vector<Eigen::Triplet<double>>;

// Adds scale * d d^T for a stencil d given as (node, coefficient) pairs.
void add_outer(Triplets& t, std::initializer_list<std::pair<std::size_t, double>> d, double scale) {
    for (const auto& [i, ci] : d) {
        for (const auto& [j, cj] : d) {
            t.emplace_back(static_cast<int>(i), static_cast<int>(j), scale * ci * cj);
        }
    }
}

}  // namespace

double ss_udl_deflection(double x, double q, const BeamSpec& beam) {
    const auto s = derive_section(beam);
    const double L = beam.length;
    require_on_span(x, L, "x");
    return q * x * (L * L * L - 2.0 * L * x * x + x * x * x) / (24.0 * s.flexural_rigidity);
}

double ss_point_deflection(double x, double P, double a, const BeamSpec& beam) {
    const auto s = derive_section(beam);
    const double L = beam.length;
    require_on_span(x, L, "x");
    require_on_span(a, L, "a");
    if (x <= a) {
        const double b = L - a;
        return P * b * x * (L * L - b * b - x * x) / (6.0 * L * s.flexural_rigidity);
    }
    const double xr = L - x;
    return P * a * xr * (L * L - a * a - xr * xr) / (6.0 * L * s.flexural_rigidity);
}

double cantilever_point_deflection(double x, double P, double a, const BeamSpec& beam) {
    const auto s = derive_section(beam);
    require_on_span(x, beam.length, "x");
    require_on_span(a, beam.length, "a");
    if (a <= 0.0) throw DomainError("a must be > 0 for a cantilever point load");
    if (x <= a) return P * x * x * (3.0 * a - x) / (6.0 * s.flexural_rigidity);
    return P * a * a * (3.0 * x - a) / (6.0 * s.flexural_rigidity);
}

// ----------------------------------------------------------------------------

BendingOperator assemble_bending_operator(const BeamSpec& beam, const BoundarySpec& bc,
                                          std::size_t node_count) {
    const auto s = derive_section(beam);
    bc.validate();
    SpatialGrid grid(beam.length, node_count);
    const std::size_t n = node_count;
    const double dx = grid.spacing();
    const double scale = s.flexural_rigidity / (dx * dx * dx);

    // Curvature energy: one second-difference stencil per interior node with
    // weight dx. A clamped end adds the half-weight end-node curvature
    // evaluated with the reflected ghost node w_{-1} = w_1.
    Triplets t;
    t.reserve(9 * n + 8);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        add_outer(t, {{i - 1, 1.0}, {i, -2.0}, {i + 1, 1.0}}, scale);
    }
    if (bc.left.kind == EndKind::Clamped) add_outer(t, {{0, -1.0}, {1, 1.0}}, 2.0 * scale);
    if (bc.right.kind == EndKind::Clamped) add_outer(t, {{n - 1, -1.0}, {n - 2, 1.0}}, 2.0 * scale);
    if (bc.left.kind == EndKind::Spring) t.emplace_back(0, 0, bc.left.stiffness);
    if (bc.right.kind == EndKind::Spring) {
        t.emplace_back(static_cast<int>(n - 1), static_cast<int>(n - 1), bc.right.stiffness);
    }

    Eigen::SparseMatrix<double> full(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    full.setFromTriplets(t.begin(), t.end());

    BendingOperator op{grid, {}, {}, !bc.restrains_rigid_body()};
    std::vector<int> dof_of_node(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const bool fixed = (i == 0 && bc.left.fixes_deflection()) ||
                           (i + 1 == n && bc.right.fixes_deflection());
        if (!fixed) {
            dof_of_node[i] = static_cast<int>(op.free_nodes.size());
            op.free_nodes.push_back(i);
        }
    }

    Triplets reduced;
    reduced.reserve(static_cast<std::size_t>(full.nonZeros()));
    for (int col = 0; col < full.outerSize(); ++col) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(full, col); it; ++it) {
            const int r = dof_of_node[static_cast<std::size_t>(it.row())];
            const int c = dof_of_node[static_cast<std::size_t>(it.col())];
            if (r >= 0 && c >= 0) reduced.emplace_back(r, c, it.value());
        }
    }
    const auto m = static_cast<Eigen::Index>(op.free_nodes.size());
    op.stiffness.resize(m, m);
    op.stiffness.setFromTriplets(reduced.begin(), reduced.end());
    return op;
}

void add_point_force(Eigen::VectorXd& nodal, const SpatialGrid& grid, double P, double x) {
    const double L = grid.length();
    if (!(x >= 0.0 && x <= L)) return;
    const double xi = x / grid.spacing();
    auto left = static_cast<std::size_t>(std::floor(xi));
    if (left + 1 >= grid.node_count()) left = grid.node_count() - 2;
    const double w_right = std::clamp(xi - static_cast<double>(left), 0.0, 1.0);
    nodal(static_cast<Eigen::Index>(left)) += P * (1.0 - w_right);
    nodal(static_cast<Eigen::Index>(left + 1)) += P * w_right;
}

Eigen::VectorXd static_nodal_forces(const std::vector<LoadCase>& loads, const SpatialGrid& grid) {
    const auto n = static_cast<Eigen::Index>(grid.node_count());
    Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
    for (const auto& load : loads) {
        if (const auto* u = std::get_if<Udl>(&load)) {
            const double cell = u->q * grid.spacing();
            f.array() += cell;
            f(0) -= 0.5 * cell;
            f(n - 1) -= 0.5 * cell;
        } else if (const auto* p = std::get_if<PointLoad>(&load)) {
            add_point_force(f, grid, p->P, p->position);
        } else {
            throw InvalidLoadError("static solve does not accept time-dependent load " + describe(load));
        }
    }
    return f;
}

StaticProfile static_fd_solve(const BeamSpec& beam, const BoundarySpec& bc,
                              const std::vector<LoadCase>& loads, std::size_t node_count) {
    for (const auto& load : loads) {
        if (is_time_dependent(load)) {
            throw InvalidLoadError("static solve does not accept time-dependent load " + describe(load));
        }
        validate_load(load, beam.length);
    }
    const auto op = assemble_bending_operator(beam, bc, node_count);
    if (op.rank_deficient) {
        throw RankDeficiencyError("stiffness is singular: supports " + to_string(bc.left.kind) + "-" +
                                  to_string(bc.right.kind) + " leave a rigid-body mode");
    }
    const Eigen::VectorXd nodal = static_nodal_forces(loads, op.grid);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(op.free_nodes.size()));
    for (std::size_t d = 0; d < op.free_nodes.size(); ++d) {
        rhs(static_cast<Eigen::Index>(d)) = nodal(static_cast<Eigen::Index>(op.free_nodes[d]));
    }

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(op.stiffness);
    if (solver.info() != Eigen::Success) throw RankDeficiencyError("stiffness factorization failed");
    const Eigen::VectorXd w_free = solver.solve(rhs);
    if (solver.info() != Eigen::Success || !w_free.allFinite()) {
        throw RankDeficiencyError("stiffness solve failed");
    }

    StaticProfile profile{op.grid, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(node_count))};
    for (std::size_t d = 0; d < op.free_nodes.size(); ++d) {
        profile.deflection(static_cast<Eigen::Index>(op.free_nodes[d])) = w_free(static_cast<Eigen::Index>(d));
    }
    return profile;
}

std::optional<StaticProfile> closed_form_profile(const BeamSpec& beam, const BoundarySpec& bc,
                                                 const std::vector<LoadCase>& loads,
                                                 std::size_t node_count) {
    const bool simply_supported = bc == BoundarySpec::pinned_pinned();
    const bool cantilever = bc == BoundarySpec::clamped_free();
    if (!simply_supported && !cantilever) return std::nullopt;

    SpatialGrid grid(beam.length, node_count);
    StaticProfile profile{grid, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(node_count))};
    for (const auto& load : loads) {
        for (std::size_t i = 0; i < node_count; ++i) {
            const double x = grid.position(i);
            double w = 0.0;
            if (const auto* u = std::get_if<Udl>(&load); u && simply_supported) {
                w = ss_udl_deflection(x, u->q, beam);
            } else if (const auto* p = std::get_if<PointLoad>(&load)) {
                if (simply_supported) {
                    w = ss_point_deflection(x, p->P, p->position, beam);
                } else if (p->position > 0.0) {
                    w = cantilever_point_deflection(x, p->P, p->position, beam);
                }
            } else {
                return std::nullopt;
            }
            profile.deflection(static_cast<Eigen::Index>(i)) += w;
        }
    }
    return profile;
}

// ----------------------------------------------------------------------------

namespace {

TimeSeriesResult make_series(const BeamSpec& beam, const TimeGrid& tgrid, const SpatialGrid& grid,
                             std::string load, std::string solver) {
    TimeSeriesResult r;
    const std::size_t steps = tgrid.step_count() + 1;
    r.times.resize(steps);
    for (std::size_t k = 0; k < steps; ++k) r.times[k] = tgrid.time(k);
    r.frames = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(steps),
                                     static_cast<Eigen::Index>(grid.node_count()));
    r.metadata = {grid.positions(), beam, std::move(load), std::move(solver)};
    return r;
}

}  // namespace

TimeSeriesResult quasi_static_moving(const BeamSpec& beam, double P, double v, double x0,
                                     const TimeGrid& tgrid, std::size_t node_count) {
    beam.validate();
    if (!std::isfinite(v) || v < 0.0) throw DomainError("load speed v must be >= 0");
    if (!std::isfinite(P)) throw DomainError("load magnitude P must be finite");
    require_on_span(x0, beam.length, "x0");

    SpatialGrid grid(beam.length, node_count);
    const auto xs = grid.positions();
    auto r = make_series(beam, tgrid, grid, describe(MovingPointLoad{P, v, x0}), "quasi_static_moving");
    for (std::size_t k = 0; k < r.times.size(); ++k) {
        const double xp = x0 + v * r.times[k];
        if (xp < 0.0 || xp > beam.length) continue;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            r.frames(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) =
                ss_point_deflection(xs[i], P, xp, beam);
        }
    }
    return r;
}

TimeSeriesResult quasi_static_sinusoidal(const BeamSpec& beam, double P0, double f, double xload,
                                         const TimeGrid& tgrid, std::size_t node_count) {
    beam.validate();
    if (!std::isfinite(f) || f <= 0.0) throw DomainError("load frequency f must be > 0");
    if (!std::isfinite(P0)) throw DomainError("load amplitude P0 must be finite");
    require_on_span(xload, beam.length, "xload");

    SpatialGrid grid(beam.length, node_count);
    const auto xs = grid.positions();
    Eigen::RowVectorXd unit(static_cast<Eigen::Index>(xs.size()));
    for (std::size_t i = 0; i < xs.size(); ++i) {
        unit(static_cast<Eigen::Index>(i)) = ss_point_deflection(xs[i], 1.0, xload, beam);
    }
    const HarmonicPointLoad load{P0, f, xload};
    auto r = make_series(beam, tgrid, grid, describe(load), "quasi_static_sinusoidal");
    for (std::size_t k = 0; k < r.times.size(); ++k) {
        r.frames.row(static_cast<Eigen::Index>(k)) = load.magnitude_at(r.times[k]) * unit;
    }
    return r;
}

}  // namespace beamlab
