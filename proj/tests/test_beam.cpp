#include <gtest/gtest.h>

#include <cmath>

#include "beamlab/beam.hpp"
#include "beamlab/errors.hpp"
#include "oracles.hpp"

using namespace beamlab;

namespace {
const BeamSpec kBeam{10.0, 0.2, 0.4, 25e9, 2500.0};
}

TEST(Section, ReferenceBeamProperties) {
    const auto s = derive_section(kBeam);
    EXPECT_NEAR(s.second_moment, 1.0666666666666667e-3, 1e-15);
    EXPECT_NEAR(s.area, 0.08, 1e-15);
    EXPECT_NEAR(s.flexural_rigidity, oracle::reference().EI, 1e-6);
    EXPECT_NEAR(s.mass_per_length, 200.0, 1e-12);
    EXPECT_NEAR(s.wave_coefficient, 365.148, 1e-3);
}

TEST(Section, RejectsNonPositiveFieldsByName) {
    BeamSpec b = kBeam;
    b.length = 0.0;
    try {
        b.validate();
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.field(), "beam.length");
    }
    b = kBeam;
    b.density = -1.0;
    EXPECT_THROW(derive_section(b), ValidationError);
    b = kBeam;
    b.elastic_modulus = std::nan("");
    EXPECT_THROW(b.validate(), ValidationError);
}

TEST(Boundary, SpringNeedsPositiveStiffness) {
    BoundarySpec bc{EndCondition::spring(0.0), EndCondition::pinned()};
    EXPECT_THROW(bc.validate(), ValidationError);
    bc.left.stiffness = 1e3;
    EXPECT_NO_THROW(bc.validate());
}

TEST(Boundary, RigidBodyRestraint) {
    EXPECT_TRUE(BoundarySpec::pinned_pinned().restrains_rigid_body());
    EXPECT_TRUE(BoundarySpec::clamped_free().restrains_rigid_body());
    EXPECT_FALSE((BoundarySpec{EndCondition::free(), EndCondition::free()}).restrains_rigid_body());
    EXPECT_FALSE((BoundarySpec{EndCondition::pinned(), EndCondition::free()}).restrains_rigid_body());
    EXPECT_TRUE((BoundarySpec{EndCondition::spring(1.0), EndCondition::spring(1.0)}).restrains_rigid_body());
}

TEST(Boundary, KindNamesRoundTrip) {
    for (auto k : {EndKind::Pinned, EndKind::Free, EndKind::Clamped, EndKind::Spring}) {
        EXPECT_EQ(end_kind_from_string(to_string(k)), k);
    }
    EXPECT_THROW(end_kind_from_string("welded"), ValidationError);
}

TEST(Loads, MovingPosition) {
    const MovingPointLoad m{1e4, 1.0, 0.0};
    EXPECT_DOUBLE_EQ(m.position_at(5.0), 5.0);
    EXPECT_DOUBLE_EQ(m.position_at(0.0), 0.0);
}

TEST(Loads, HarmonicMagnitude) {
    const HarmonicPointLoad h{1e4, 1.0, 5.0};
    EXPECT_NEAR(h.magnitude_at(0.25), 1e4, 1e-9);
    EXPECT_NEAR(h.magnitude_at(0.5), 0.0, 1e-9);
}

TEST(Loads, ValidationNamesField) {
    try {
        validate_load(PointLoad{1e4, 12.0}, 10.0, "loads[0]");
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.field(), "loads[0].a");
    }
    EXPECT_THROW(validate_load(MovingPointLoad{1e4, -1.0, 0.0}, 10.0), ValidationError);
    EXPECT_THROW(validate_load(HarmonicPointLoad{1e4, 0.0, 5.0}, 10.0), ValidationError);
    EXPECT_TRUE(is_time_dependent(MovingPointLoad{1, 1, 0}));
    EXPECT_FALSE(is_time_dependent(Udl{1}));
}

TEST(Grid, SpatialGridEndsExactly) {
    const SpatialGrid g(10.0, 201);
    EXPECT_DOUBLE_EQ(g.spacing(), 0.05);
    EXPECT_EQ(g.position(0), 0.0);
    EXPECT_EQ(g.position(200), 10.0);
    EXPECT_EQ(g.position(100), 5.0);
    EXPECT_EQ(g.nearest_node(5.01), 100u);
    EXPECT_THROW(SpatialGrid(10.0, 4), ValidationError);
}

TEST(Grid, TimeGridStepCount) {
    const TimeGrid t(0.0, 15.0, 0.05);
    EXPECT_EQ(t.step_count(), 300u);
    EXPECT_NEAR(t.time(100), 5.0, 1e-12);
    EXPECT_THROW(TimeGrid(0.0, 1.0, -0.1), ValidationError);
    EXPECT_THROW(TimeGrid(1.0, 0.0, 0.1), ValidationError);
}
