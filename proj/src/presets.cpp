#include <functional>
#include <utility>

#include "beamlab/errors.hpp"
#include "beamlab/scenario.hpp"

namespace beamlab {

namespace {

// Section and material shared by every preset.
constexpr BeamSpec kReferenceBeam{10.0, 0.2, 0.4, 25e9, 2500.0};

const std::vector<std::string> kSectionDefaults = {"beam.width", "beam.height", "beam.elastic_modulus",
                                                   "beam.density"};

Scenario base(const std::string& name, SolverKind solver, BoundarySpec bc) {
    Scenario s;
    s.name = name;
    s.solver = solver;
    s.beam = kReferenceBeam;
    s.bc = bc;
    return s;
}

void flag(Scenario& s, std::initializer_list<const char*> fields) {
    for (const char* f : fields) s.applied_defaults.emplace_back(f);
}

void flag_section(Scenario& s) {
    s.applied_defaults.insert(s.applied_defaults.end(), kSectionDefaults.begin(), kSectionDefaults.end());
}

Scenario exp1() {
    auto s = base("exp1", SolverKind::Static, BoundarySpec::pinned_pinned());
    // The bearing stiffness would let the beam settle 25 m as a rigid body under qL; it feeds
    // modal runs only.
    s.modal_bc = BoundarySpec{EndCondition::spring(1000.0), EndCondition::spring(1000.0)};
    s.loads = {Udl{5000.0}};
    s.nodes = 201;
    s.probes = {5.0};
    flag(s, {"bc", "grid.nodes", "probes", "integrator", "output.stride"});
    return s;
}

Scenario exp2_1() {
    auto s = base("exp2_1", SolverKind::QuasiStatic, BoundarySpec::pinned_pinned());
    s.loads = {MovingPointLoad{10000.0, 1.0, 0.0}};
    s.nodes = 101;
    s.time = TimeSpec{0.0, 15.0, 0.05};
    s.probes = {5.0};
    flag_section(s);
    flag(s, {"grid.nodes", "time.dt", "probes", "integrator", "output.stride"});
    return s;
}

Scenario exp2_2() {
    auto s = base("exp2_2", SolverKind::QuasiStatic, BoundarySpec::pinned_pinned());
    s.loads = {HarmonicPointLoad{10000.0, 1.0, 5.0}};
    s.nodes = 101;
    s.time = TimeSpec{0.0, 10.0, 0.01};
    s.probes = {5.0};
    flag_section(s);
    flag(s, {"bc", "grid.nodes", "time.dt", "probes", "integrator", "output.stride"});
    return s;
}

Scenario exp3() {
    auto s = base("exp3", SolverKind::Static, BoundarySpec::clamped_free());
    s.loads = {PointLoad{10000.0, 5.0}};
    s.nodes = 201;
    s.probes = {2.5, 5.0, 10.0};
    flag_section(s);
    flag(s, {"grid.nodes", "probes", "integrator", "output.stride"});
    return s;
}

Scenario exp4() {
    auto s = base("exp4", SolverKind::Nonlinear, BoundarySpec::clamped_free());
    s.loads = {PointLoad{10000.0, 5.0}};
    s.nodes = 201;
    s.material = RambergOsgood{kReferenceBeam.elastic_modulus, 5e6, 3.0};
    s.probes = {10.0};
    flag_section(s);
    flag(s, {"material.alpha", "material.n", "grid.nodes", "probes", "integrator", "output.stride"});
    return s;
}

Scenario exp5_1() {
    auto s = base("exp5_1", SolverKind::Sweep, BoundarySpec::pinned_pinned());
    // The load frequency is replaced by each sweep frequency.
    s.loads = {HarmonicPointLoad{1000.0, 0.5, 5.0}};
    s.nodes = 51;
    s.time = TimeSpec{0.0, 0.0, 0.005};
    s.zeta1 = 0.02;
    s.sweep = SweepSpec{0.5, 15.0, 59, 100, 5};
    s.probes = {5.0};
    flag(s, {"loads[0].x", "grid.nodes", "time", "integrator.rayleigh.zeta1", "sweep", "probes", "output.stride"});
    return s;
}

Scenario exp5_2() {
    auto s = base("exp5_2", SolverKind::Dynamic, BoundarySpec::pinned_pinned());
    s.loads = {HarmonicPointLoad{1000.0, 2.0, 5.0}};
    s.nodes = 51;
    s.time = TimeSpec{0.0, 10.0, 0.005};
    s.zeta1 = 0.02;
    s.probes = {5.0};
    flag(s, {"loads[0].f", "loads[0].x", "grid.nodes", "time", "integrator.rayleigh.zeta1", "probes",
             "output.stride"});
    return s;
}

const std::vector<std::pair<std::string, std::function<Scenario()>>>& registry() {
    static const std::vector<std::pair<std::string, std::function<Scenario()>>> presets = {
        {"exp1", exp1},     {"exp2_1", exp2_1}, {"exp2_2", exp2_2}, {"exp3", exp3},
        {"exp4", exp4},     {"exp5_1", exp5_1}, {"exp5_2", exp5_2},
    };
    return presets;
}

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& [name, make] : registry()) names.push_back(name);
    return names;
}

Scenario preset(const std::string& name) {
    for (const auto& [n, make] : registry()) {
        if (n == name) {
            Scenario s = make();
            s.validate();
            return s;
        }
    }
    std::string valid;
    for (const auto& n : preset_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw ValidationError("preset", "unknown preset '" + name + "' (valid: " + valid + ")");
}

}  // namespace beamlab
