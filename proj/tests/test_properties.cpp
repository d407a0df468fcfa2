#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "beamlab/dynamics.hpp"
#include "beamlab/modal.hpp"
#include "beamlab/scenario.hpp"
#include "beamlab/statics.hpp"
#include "oracles.hpp"

using namespace beamlab;

namespace {
const BeamSpec kBeam{10.0, 0.2, 0.4, 25e9, 2500.0};
constexpr double kPi = std::numbers::pi;
}

TEST(StaticProperties, LinearInLoad) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> pos(0.0, 10.0), mag(-1e4, 1e4);
    for (const auto& bc : {BoundarySpec::pinned_pinned(), BoundarySpec::clamped_free(),
                           BoundarySpec{EndCondition::spring(1e6), EndCondition::clamped()}}) {
        for (int trial = 0; trial < 5; ++trial) {
            const LoadCase a = PointLoad{mag(rng), pos(rng)}, b = Udl{mag(rng)};
            const double s = mag(rng) / 1e4;
            const auto wa = static_fd_solve(kBeam, bc, {a}, 61).deflection;
            const auto wb = static_fd_solve(kBeam, bc, {b}, 61).deflection;
            auto scaled = a;
            std::get<PointLoad>(scaled).P *= s;
            const auto wab = static_fd_solve(kBeam, bc, {scaled, b}, 61).deflection;
            EXPECT_LT((wab - (s * wa + wb)).cwiseAbs().maxCoeff(), 1e-9 * (wa.cwiseAbs().maxCoeff() + wb.cwiseAbs().maxCoeff()));
        }
    }
}

TEST(StaticProperties, ReciprocityOnNodes) {
    // Deflection at i from a unit load at j equals deflection at j from a unit load at i.
    const SpatialGrid g(10.0, 41);
    for (const auto& bc : {BoundarySpec::pinned_pinned(), BoundarySpec::clamped_free(),
                           BoundarySpec{EndCondition::spring(1e5), EndCondition::spring(3e6)}}) {
        for (auto [i, j] : {std::pair{5, 30}, std::pair{12, 20}, std::pair{1, 39}}) {
            const double wij = static_fd_solve(kBeam, bc, {PointLoad{1.0, g.position(j)}}, 41).at_node(i);
            const double wji = static_fd_solve(kBeam, bc, {PointLoad{1.0, g.position(i)}}, 41).at_node(j);
            EXPECT_NEAR(wij, wji, 1e-12 * std::abs(wij) + 1e-20);
        }
    }
}

TEST(StaticProperties, SecondOrderConvergence) {
    const double exact = oracle::ss_udl(5.0, 5000.0, 10.0, oracle::reference().EI);
    double prev = 0.0;
    for (std::size_t n : {21u, 41u, 81u, 161u}) {
        const double err = std::abs(static_fd_solve(kBeam, BoundarySpec::pinned_pinned(), {Udl{5000.0}}, n).at_node(n / 2) - exact);
        if (prev > 0.0) EXPECT_NEAR(std::log2(prev / err), 2.0, 0.1);
        prev = err;
    }
}

TEST(StaticProperties, SpringStiffnessMonotone) {
    double prev = INFINITY;
    for (double k : {1e4, 1e5, 1e6, 1e7, 1e8, 1e10}) {
        const BoundarySpec bc{EndCondition::spring(k), EndCondition::spring(k)};
        const double mid = static_fd_solve(kBeam, bc, {Udl{5000.0}}, 101).at_node(50);
        EXPECT_LT(mid, prev);
        prev = mid;
    }
    const double pinned = static_fd_solve(kBeam, BoundarySpec::pinned_pinned(), {Udl{5000.0}}, 101).at_node(50);
    // Stiff springs only add a rigid settlement of R / k with R = qL / 2.
    EXPECT_NEAR(prev - pinned, 25000.0 / 1e10, 1e-9);
}

TEST(ModalProperties, SpringRootsBetweenLimits) {
    const auto free = find_beta_roots(kBeam, {EndCondition::free(), EndCondition::free()}, 1)[0];
    double prev = 0.0;
    for (double k : {1e2, 1e4, 1e6, 1e8, 1e10}) {
        const BoundarySpec bc{EndCondition::spring(k), EndCondition::spring(k)};
        // Third root: the first two are the rigid-body pair lifted by the springs.
        const auto r = find_beta_roots(kBeam, bc, 3);
        EXPECT_GT(r[0], prev);
        prev = r[0];
        EXPECT_GE(r[2], free * (1 - 1e-9));
    }
    EXPECT_NEAR(prev / (kPi / 10.0), 1.0, 1e-3);
}

TEST(ModalProperties, SoftSpringsGiveRigidBodyFrequencies) {
    // Bounce and rocking on two springs: omega^2 = 2k/m and 6k/m.
    const double k = 100.0, m = 2000.0;
    const BoundarySpec bc{EndCondition::spring(k), EndCondition::spring(k)};
    const auto modes = modal_analysis(kBeam, bc, 2, 51);
    EXPECT_NEAR(modes[0].omega / std::sqrt(2 * k / m), 1.0, 1e-3);
    EXPECT_NEAR(modes[1].omega / std::sqrt(6 * k / m), 1.0, 1e-3);
}

TEST(ModalProperties, FiniteDifferenceAgreesForEverySupport) {
    const std::vector<BoundarySpec> cases = {
        BoundarySpec::pinned_pinned(),
        BoundarySpec::clamped_free(),
        {EndCondition::clamped(), EndCondition::clamped()},
        {EndCondition::spring(1e6), EndCondition::pinned()},
        {EndCondition::spring(1e7), EndCondition::spring(1e7)},
        {EndCondition::clamped(), EndCondition::spring(1e6)},
    };
    for (const auto& bc : cases) {
        const auto modes = modal_analysis(kBeam, bc, 3, 51);
        const auto w = generalized_frequencies(discretize_beam(kBeam, bc, 401));
        for (int i = 0; i < 3; ++i) {
            EXPECT_NEAR(w(i) / modes[i].omega, 1.0, 5e-3)
                << to_string(bc.left.kind) << "-" << to_string(bc.right.kind) << " mode " << i + 1;
        }
    }
}

TEST(DynamicProperties, UndampedBeamConservesEnergy) {
    const auto sys = discretize_beam(kBeam, BoundarySpec::pinned_pinned(), 41);
    Eigen::VectorXd u0(sys.size());
    const SpatialGrid g(10.0, 41);
    for (Eigen::Index d = 0; d < sys.size(); ++d) {
        const double x = g.position(sys.node_of_dof[static_cast<std::size_t>(d)]);
        u0(d) = 1e-3 * (std::sin(kPi * x / 10) + 0.3 * std::sin(3 * kPi * x / 10));
    }
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(sys.size());
    Eigen::MatrixXd vel;
    const auto r = integrate(sys, [&](double) { return zero; }, u0, zero, TimeGrid(0.0, 5.0, 1e-3),
                             IntegratorConfig{}, 50, &vel);
    auto energy = [&](Eigen::Index k) {
        const Eigen::VectorXd u = r.frames.row(k).transpose(), v = vel.row(k).transpose();
        return 0.5 * v.dot(sys.mass * v) + 0.5 * u.dot(sys.stiffness * u);
    };
    const double e0 = energy(0);
    for (Eigen::Index k = 0; k < r.frames.rows(); ++k) EXPECT_NEAR(energy(k) / e0, 1.0, 1e-9);
}

TEST(DynamicProperties, MovingLoadForceResultantAndMoment) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> t(0.0, 10.0);
    const SpatialGrid g(10.0, 37);
    for (int i = 0; i < 50; ++i) {
        const double ti = t(rng);
        const auto f = moving_load_force(2500.0, 1.0, 0.0, g, ti);
        double moment = 0.0;
        for (std::size_t n = 0; n < g.node_count(); ++n) moment += f(static_cast<Eigen::Index>(n)) * g.position(n);
        EXPECT_NEAR(f.sum(), 2500.0, 1e-9);
        EXPECT_NEAR(moment / 2500.0, ti, 1e-9);
    }
}

TEST(DynamicProperties, SweepIndependentOfThreadCount) {
    IntegratorConfig cfg;
    cfg.dt = 0.005;
    SweepOptions opts;
    opts.settle_periods = 20;
    const std::vector<double> f = {1.0, 2.5, 4.0, 5.5, 7.0, 8.5, 10.0};
    opts.threads = 1;
    const auto a = frequency_sweep(kBeam, BoundarySpec::pinned_pinned(), 21, 1000.0, 5.0, f, cfg, opts);
    opts.threads = 3;
    const auto b = frequency_sweep(kBeam, BoundarySpec::pinned_pinned(), 21, 1000.0, 5.0, f, cfg, opts);
    for (std::size_t i = 0; i < f.size(); ++i) EXPECT_EQ(a[i].steady_amplitude, b[i].steady_amplitude);
}

TEST(DynamicProperties, SlowSweepApproachesStaticCompliance) {
    IntegratorConfig cfg;
    cfg.dt = 0.005;
    SweepOptions opts;
    opts.settle_periods = 30;
    const auto p = frequency_sweep(kBeam, BoundarySpec::pinned_pinned(), 41, 1000.0, 5.0, {0.2}, cfg, opts);
    const double stat = static_fd_solve(kBeam, BoundarySpec::pinned_pinned(), {PointLoad{1000.0, 5.0}}, 41).at_node(20);
    const double r = 0.2 / 5.736;
    EXPECT_NEAR(p[0].steady_amplitude / stat, 1.0 / (1.0 - r * r), 5e-3);
}
