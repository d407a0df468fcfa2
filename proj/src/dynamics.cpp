#include "beamlab/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <string>
#include <thread>

#include <Eigen/Eigenvalues>

#include "beamlab/errors.hpp"
#include "beamlab/statics.hpp"

namespace beamlab {

namespace {

SparseMatrix diagonal(const Eigen::VectorXd& d) {
    SparseMatrix m(d.size(), d.size());
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(static_cast<std::size_t>(d.size()));
    for (Eigen::Index i = 0; i < d.size(); ++i) t.emplace_back(static_cast<int>(i), static_cast<int>(i), d(i));
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

void require_mck(double m, double c, double k) {
    if (!std::isfinite(m) || m <= 0.0) throw DomainError("mass m must be > 0");
    if (!std::isfinite(c) || c < 0.0) throw DomainError("damping c must be >= 0");
    if (!std::isfinite(k) || k < 0.0) throw DomainError("stiffness k must be >= 0");
}

// Rigid-body modes left by the supports.
int rigid_mode_count(const BoundarySpec& bc) {
    if (bc.restrains_rigid_body()) return 0;
    auto holds = [](const EndCondition& e) { return e.kind == EndKind::Pinned || e.kind == EndKind::Spring; };
    return 2 - static_cast<int>(holds(bc.left)) - static_cast<int>(holds(bc.right));
}

}  // namespace

bool MdofSystem::undamped() const {
    for (int k = 0; k < damping.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(damping, k); it; ++it) {
            if (it.value() != 0.0) return false;
        }
    }
    return true;
}

void IntegratorConfig::validate() const {
    if (!std::isfinite(gamma) || gamma < 0.0) throw ValidationError("integrator.gamma", "must be >= 0");
    if (!std::isfinite(beta) || beta < 0.0) throw ValidationError("integrator.beta", "must be >= 0");
    if (!std::isfinite(dt) || dt <= 0.0) throw ValidationError("time.dt", "must be > 0");
}

RayleighCoeffs fit_rayleigh(double zeta, double omega1, double omega2) {
    if (!std::isfinite(zeta) || zeta < 0.0) throw DomainError("damping ratio must be >= 0");
    if (!(omega1 > 0.0) || !(omega2 > 0.0)) throw DomainError("Rayleigh fit needs positive frequencies");
    const double sum = omega1 + omega2;
    return {2.0 * zeta * omega1 * omega2 / sum, 2.0 * zeta / sum};
}

MdofSystem sdof_system(double m, double c, double k) {
    require_mck(m, c, k);
    MdofSystem sys;
    sys.mass = diagonal(Eigen::VectorXd::Constant(1, m));
    sys.damping = diagonal(Eigen::VectorXd::Constant(1, c));
    sys.stiffness = diagonal(Eigen::VectorXd::Constant(1, k));
    sys.labels = {"u"};
    return sys;
}

MdofSystem bridge_2d_system(double m, double c, double k) {
    require_mck(m, c, k);
    MdofSystem sys;
    sys.mass = diagonal(Eigen::VectorXd::Constant(2, m));
    sys.damping = diagonal(Eigen::VectorXd::Constant(2, c));
    sys.stiffness = diagonal(Eigen::VectorXd::Constant(2, k));
    sys.labels = {"x", "y"};
    return sys;
}

// ----------------------------------------------------------------------------

NewmarkStepper::NewmarkStepper(const MdofSystem& sys, const IntegratorConfig& cfg)
    : sys_(&sys), cfg_(cfg) {
    cfg.validate();
    const double dt = cfg.dt;
    const SparseMatrix effective = sys.mass + (cfg.gamma * dt) * sys.damping +
                                   (cfg.beta * dt * dt) * sys.stiffness;
    solver_.compute(effective);
    if (solver_.info() != Eigen::Success) {
        throw FactorizationError("effective matrix M + gamma dt C + beta dt^2 K is singular");
    }
    const auto& d = solver_.vectorD();
    if ((d.array() <= 0.0).any() || !d.allFinite()) {
        throw FactorizationError("effective matrix M + gamma dt C + beta dt^2 K is not positive definite");
    }
}

DynamicState NewmarkStepper::step(const DynamicState& s, const Eigen::VectorXd& f_next) const {
    const double dt = cfg_.dt;
    const Eigen::VectorXd u_pred = s.u + dt * s.v + (0.5 * dt * dt * (1.0 - 2.0 * cfg_.beta)) * s.a;
    const Eigen::VectorXd v_pred = s.v + (dt * (1.0 - cfg_.gamma)) * s.a;
    const Eigen::VectorXd rhs = f_next - sys_->damping * v_pred - sys_->stiffness * u_pred;

    DynamicState next;
    next.a = solver_.solve(rhs);
    next.u = u_pred + (cfg_.beta * dt * dt) * next.a;
    next.v = v_pred + (cfg_.gamma * dt) * next.a;
    next.t = s.t + dt;
    return next;
}

DynamicState newmark_step(const MdofSystem& sys, const DynamicState& state,
                          const Eigen::VectorXd& f_next, const IntegratorConfig& cfg) {
    return NewmarkStepper(sys, cfg).step(state, f_next);
}

Eigen::VectorXd initial_acceleration(const MdofSystem& sys, const Eigen::VectorXd& f0,
                                     const Eigen::VectorXd& u0, const Eigen::VectorXd& v0) {
    Eigen::SimplicialLDLT<SparseMatrix> m(sys.mass);
    if (m.info() != Eigen::Success) throw FactorizationError("mass matrix is singular");
    return m.solve(f0 - sys.damping * v0 - sys.stiffness * u0);
}

TimeSeriesResult integrate(const MdofSystem& sys, const ForceSchedule& force,
                           const Eigen::VectorXd& u0, const Eigen::VectorXd& v0,
                           const TimeGrid& tgrid, const IntegratorConfig& cfg, std::size_t stride,
                           Eigen::MatrixXd* velocities) {
    const Eigen::Index n = sys.size();
    if (u0.size() != n || v0.size() != n) throw DomainError("initial state has the wrong dimension");
    if (stride == 0) throw ValidationError("output.stride", "must be >= 1");
    if (sys.rank_warning && sys.undamped()) {
        throw RankDeficiencyError("undamped system with rigid-body mode: " + *sys.rank_warning);
    }

    auto load_at = [&](double t) {
        Eigen::VectorXd f = force(t);
        if (f.size() != n) throw DomainError("force schedule returned the wrong dimension");
        if (!f.allFinite()) throw DomainError("non-finite force at t = " + std::to_string(t));
        return f;
    };

    IntegratorConfig step_cfg = cfg;
    step_cfg.dt = tgrid.dt();
    const NewmarkStepper stepper(sys, step_cfg);

    const std::size_t steps = tgrid.step_count();
    const std::size_t samples = steps / stride + 1 + (steps % stride != 0 ? 1 : 0);
    TimeSeriesResult r;
    r.times.reserve(samples);
    r.frames.resize(static_cast<Eigen::Index>(samples), n);
    if (velocities) velocities->resize(static_cast<Eigen::Index>(samples), n);
    r.metadata.solver = "newmark";

    DynamicState state{u0, v0, initial_acceleration(sys, load_at(tgrid.start()), u0, v0), tgrid.start()};
    auto record = [&](const DynamicState& s) {
        const auto row = static_cast<Eigen::Index>(r.times.size());
        r.times.push_back(s.t);
        r.frames.row(row) = s.u.transpose();
        if (velocities) velocities->row(row) = s.v.transpose();
    };
    record(state);
    for (std::size_t k = 1; k <= steps; ++k) {
        const double t = tgrid.time(k);
        state = stepper.step(state, load_at(t));
        state.t = t;
        if (k % stride == 0 || k == steps) record(state);
    }
    if (!r.frames.allFinite()) throw SolverError("integration produced non-finite displacements");
    return r;
}

// ----------------------------------------------------------------------------

Eigen::VectorXd lumped_masses(const BeamSpec& beam, std::size_t node_count) {
    const auto s = derive_section(beam);
    const SpatialGrid grid(beam.length, node_count);
    Eigen::VectorXd m = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(node_count),
                                                  s.mass_per_length * grid.spacing());
    m(0) *= 0.5;
    m(m.size() - 1) *= 0.5;
    return m;
}

MdofSystem discretize_beam(const BeamSpec& beam, const BoundarySpec& bc, std::size_t node_count,
                           const RayleighCoeffs& damping) {
    if (node_count < 7) throw ValidationError("grid.nodes", "beam discretization needs >= 7 nodes");
    auto op = assemble_bending_operator(beam, bc, node_count);
    const Eigen::VectorXd nodal_mass = lumped_masses(beam, node_count);

    MdofSystem sys;
    Eigen::VectorXd m(static_cast<Eigen::Index>(op.free_nodes.size()));
    for (std::size_t d = 0; d < op.free_nodes.size(); ++d) {
        m(static_cast<Eigen::Index>(d)) = nodal_mass(static_cast<Eigen::Index>(op.free_nodes[d]));
        sys.labels.push_back("w[" + std::to_string(op.free_nodes[d]) + "]");
    }
    sys.mass = diagonal(m);
    sys.stiffness = std::move(op.stiffness);
    sys.damping = damping.alpha_m * sys.mass + damping.beta_k * sys.stiffness;
    sys.node_of_dof = std::move(op.free_nodes);
    sys.node_count = node_count;
    if (op.rank_deficient) {
        sys.rank_warning = "supports " + to_string(bc.left.kind) + "-" + to_string(bc.right.kind) +
                           " leave " + std::to_string(rigid_mode_count(bc)) + " rigid-body mode(s)";
    }
    return sys;
}

Eigen::VectorXd generalized_frequencies(const MdofSystem& sys) {
    const Eigen::MatrixXd k = Eigen::MatrixXd(sys.stiffness);
    const Eigen::MatrixXd m = Eigen::MatrixXd(sys.mass);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(k, m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw SolverError("generalized eigenvalue solve failed");
    return es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
}

RayleighCoeffs rayleigh_for_beam(const BeamSpec& beam, const BoundarySpec& bc,
                                 std::size_t node_count, double zeta) {
    if (zeta == 0.0) return {};
    const auto omegas = generalized_frequencies(discretize_beam(beam, bc, node_count));
    const auto first = static_cast<Eigen::Index>(rigid_mode_count(bc));
    if (omegas.size() < first + 2) throw SolverError("too few modes for a Rayleigh fit");
    return fit_rayleigh(zeta, omegas(first), omegas(first + 1));
}

Eigen::VectorXd moving_load_force(double P, double v, double x0, const SpatialGrid& grid, double t) {
    Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid.node_count()));
    add_point_force(f, grid, P, x0 + v * t);
    return f;
}

Eigen::VectorXd beam_load_vector(const std::vector<LoadCase>& loads, const SpatialGrid& grid, double t) {
    Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid.node_count()));
    for (const auto& load : loads) {
        if (const auto* m = std::get_if<MovingPointLoad>(&load)) {
            add_point_force(f, grid, m->P, m->position_at(t));
        } else if (const auto* h = std::get_if<HarmonicPointLoad>(&load)) {
            add_point_force(f, grid, h->magnitude_at(t), h->position);
        } else {
            f += static_nodal_forces({load}, grid);
        }
    }
    return f;
}

Eigen::VectorXd to_dofs(const MdofSystem& sys, const Eigen::VectorXd& nodal) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(sys.node_of_dof.size()));
    for (std::size_t d = 0; d < sys.node_of_dof.size(); ++d) {
        out(static_cast<Eigen::Index>(d)) = nodal(static_cast<Eigen::Index>(sys.node_of_dof[d]));
    }
    return out;
}

TimeSeriesResult simulate_beam(const BeamSpec& beam, const MdofSystem& sys,
                               const std::vector<LoadCase>& loads, const TimeGrid& tgrid,
                               const IntegratorConfig& cfg, std::size_t stride) {
    if (sys.node_of_dof.empty()) throw DomainError("simulate_beam needs a discretized beam system");
    const SpatialGrid grid(beam.length, sys.node_count);
    for (const auto& load : loads) validate_load(load, beam.length);

    // Static loads are split once; only time-dependent ones are rebuilt per step.
    std::vector<LoadCase> steady, varying;
    for (const auto& load : loads) (is_time_dependent(load) ? varying : steady).push_back(load);
    const Eigen::VectorXd steady_dofs = to_dofs(sys, static_nodal_forces(steady, grid));
    auto force = [&](double t) -> Eigen::VectorXd {
        if (varying.empty()) return steady_dofs;
        return steady_dofs + to_dofs(sys, beam_load_vector(varying, grid, t));
    };

    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(sys.size());
    auto dof_result = integrate(sys, force, zero, zero, tgrid, cfg, stride);

    TimeSeriesResult r;
    r.times = std::move(dof_result.times);
    r.frames = Eigen::MatrixXd::Zero(dof_result.frames.rows(), static_cast<Eigen::Index>(grid.node_count()));
    for (std::size_t d = 0; d < sys.node_of_dof.size(); ++d) {
        r.frames.col(static_cast<Eigen::Index>(sys.node_of_dof[d])) = dof_result.frames.col(static_cast<Eigen::Index>(d));
    }
    std::string description;
    for (const auto& load : loads) description += (description.empty() ? "" : " + ") + describe(load);
    r.metadata = {grid.positions(), beam, description, "newmark"};
    return r;
}

// ----------------------------------------------------------------------------

namespace {

SweepPoint sweep_one(const MdofSystem& sys, const Eigen::VectorXd& unit_force, std::size_t probe_dof,
                     double f, const IntegratorConfig& cfg, const SweepOptions& opts) {
    const double period = 1.0 / f;
    const auto per_period = std::max<std::size_t>(
        opts.min_steps_per_period, static_cast<std::size_t>(std::ceil(period / cfg.dt - 1e-9)));
    IntegratorConfig step_cfg = cfg;
    step_cfg.dt = period / static_cast<double>(per_period);
    const NewmarkStepper stepper(sys, step_cfg);

    const std::size_t total_periods = opts.settle_periods + opts.measure_periods;
    const std::size_t measure_start = opts.settle_periods * per_period;
    const std::size_t previous_start =
        opts.settle_periods >= opts.measure_periods ? (opts.settle_periods - opts.measure_periods) * per_period
                                                    : measure_start;
    const double omega = 2.0 * std::numbers::pi * f;

    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(sys.size());
    DynamicState state{zero, zero, zero, 0.0};
    double peak = 0.0, previous_peak = 0.0;
    const std::size_t steps = total_periods * per_period;
    for (std::size_t k = 1; k <= steps; ++k) {
        const double t = static_cast<double>(k) * step_cfg.dt;
        state = stepper.step(state, std::sin(omega * t) * unit_force);
        const double w = std::abs(state.u(static_cast<Eigen::Index>(probe_dof)));
        if (k > measure_start) {
            peak = std::max(peak, w);
        } else if (k > previous_start) {
            previous_peak = std::max(previous_peak, w);
        }
    }
    if (!std::isfinite(peak)) throw NonConvergenceError("non-finite response at f = " + std::to_string(f) + " Hz", f);
    if (previous_start < measure_start && peak > opts.growth_tolerance * previous_peak) {
        throw NonConvergenceError("response still growing at f = " + std::to_string(f) +
                                      " Hz; add damping or settle periods",
                                  f);
    }
    return {f, peak};
}

}  // namespace

std::vector<SweepPoint> frequency_sweep(const BeamSpec& beam, const BoundarySpec& bc,
                                        std::size_t node_count, double P0, double xload,
                                        const std::vector<double>& requested,
                                        const IntegratorConfig& cfg, const SweepOptions& opts) {
    cfg.validate();
    std::vector<double> freqs = requested;
    std::sort(freqs.begin(), freqs.end());
    if (opts.measure_periods == 0) throw ValidationError("sweep.measure_periods", "must be >= 1");
    for (double f : freqs) {
        if (!std::isfinite(f) || f <= 0.0) throw ValidationError("sweep", "frequencies must be > 0");
    }
    const auto sys = discretize_beam(beam, bc, node_count, rayleigh_for_beam(beam, bc, node_count, opts.zeta1));
    const SpatialGrid grid(beam.length, node_count);
    const std::size_t mid_node = grid.nearest_node(0.5 * beam.length);
    const auto dof_it = std::find(sys.node_of_dof.begin(), sys.node_of_dof.end(), mid_node);
    if (dof_it == sys.node_of_dof.end()) throw DomainError("midspan node is constrained");
    const auto probe_dof = static_cast<std::size_t>(dof_it - sys.node_of_dof.begin());

    Eigen::VectorXd unit_nodal = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(node_count));
    add_point_force(unit_nodal, grid, P0, xload);
    const Eigen::VectorXd unit_force = to_dofs(sys, unit_nodal);

    std::vector<SweepPoint> out(freqs.size());
    std::vector<std::exception_ptr> errors(freqs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < freqs.size(); i = next++) {
            try {
                out[i] = sweep_one(sys, unit_force, probe_dof, freqs[i], cfg, opts);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::clamp<std::size_t>(opts.threads, 1, std::max<std::size_t>(freqs.size(), 1));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

}  // namespace beamlab
