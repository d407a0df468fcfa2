#include "beamlab/scenario.hpp"

#include <cmath>
#include <initializer_list>
#include <type_traits>

#include "beamlab/errors.hpp"

namespace beamlab {

using json = nlohmann::json;

namespace {

constexpr double kDefaultAlpha = 5e6;
constexpr double kDefaultExponent = 3.0;
constexpr double kDefaultSweepDt = 0.005;

const std::pair<SolverKind, const char*> kSolverNames[] = {
    {SolverKind::Static, "static"},   {SolverKind::QuasiStatic, "quasi_static"},
    {SolverKind::Modal, "modal"},     {SolverKind::Dynamic, "dynamic"},
    {SolverKind::Sweep, "sweep"},     {SolverKind::Nonlinear, "nonlinear"},
};

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

std::string indexed(const std::string& path, std::size_t i) {
    return path + "[" + std::to_string(i) + "]";
}

// Walks one JSON object, remembering which keys were read so that leftovers can be rejected.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string path, std::vector<std::string>& defaults)
        : j_(j), path_(std::move(path)), defaults_(defaults) {
        if (!j_.is_object()) throw ValidationError(path_.empty() ? "scenario" : path_, "must be an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const json& at(const std::string& key) const {
        if (!j_.contains(key)) throw ValidationError(join(path_, key), "is required");
        return j_.at(key);
    }

    double number(const std::string& key) const {
        const json& v = at(key);
        if (!v.is_number()) throw ValidationError(join(path_, key), "must be a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw ValidationError(join(path_, key), "must be finite");
        return d;
    }

    double number_or(const std::string& key, double fallback) const {
        if (has(key)) return number(key);
        defaults_.push_back(join(path_, key));
        return fallback;
    }

    std::size_t count(const std::string& key) const {
        const json& v = at(key);
        if (!v.is_number_integer() || v.get<long long>() < 0) {
            throw ValidationError(join(path_, key), "must be a non-negative integer");
        }
        return v.get<std::size_t>();
    }

    std::size_t count_or(const std::string& key, std::size_t fallback) const {
        if (has(key)) return count(key);
        defaults_.push_back(join(path_, key));
        return fallback;
    }

    std::string text(const std::string& key) const {
        const json& v = at(key);
        if (!v.is_string()) throw ValidationError(join(path_, key), "must be a string");
        return v.get<std::string>();
    }

    void only(std::initializer_list<const char*> allowed) const {
        for (const auto& item : j_.items()) {
            bool known = false;
            for (const char* a : allowed) known = known || item.key() == a;
            if (!known) throw ValidationError(join(path_, item.key()), "unknown key");
        }
    }

    std::string path(const std::string& key) const { return join(path_, key); }

private:
    const json& j_;
    std::string path_;
    std::vector<std::string>& defaults_;
};

EndKind parse_end(const ObjectReader& r, const std::string& key) {
    try {
        return end_kind_from_string(r.text(key));
    } catch (const ValidationError& e) {
        if (e.field() != "bc") throw;
        throw ValidationError(r.path(key), "must be one of pinned, free, clamped, spring");
    }
}

BoundarySpec parse_boundary(const json& j, const std::string& path, bool allow_modal_only,
                            std::optional<BoundarySpec>& modal_bc, std::vector<std::string>& defaults) {
    ObjectReader r(j, path, defaults);
    if (allow_modal_only) {
        r.only({"left", "right", "k", "modal_only"});
    } else {
        r.only({"left", "right", "k"});
    }
    BoundarySpec bc;
    bc.left.kind = parse_end(r, "left");
    bc.right.kind = parse_end(r, "right");
    const bool springs = bc.left.kind == EndKind::Spring || bc.right.kind == EndKind::Spring;
    if (springs) {
        const double k = r.number("k");
        if (bc.left.kind == EndKind::Spring) bc.left.stiffness = k;
        if (bc.right.kind == EndKind::Spring) bc.right.stiffness = k;
    } else if (r.has("k")) {
        throw ValidationError(r.path("k"), "only allowed with a spring end");
    }
    try {
        bc.validate();
    } catch (const ValidationError& e) {
        throw ValidationError(r.path("k"), e.what());
    }
    if (allow_modal_only && r.has("modal_only")) {
        std::optional<BoundarySpec> unused;
        modal_bc = parse_boundary(r.at("modal_only"), r.path("modal_only"), false, unused, defaults);
    }
    return bc;
}

LoadCase parse_load(const json& j, const std::string& path, std::vector<std::string>& defaults) {
    ObjectReader r(j, path, defaults);
    const std::string type = r.text("type");
    if (type == "udl") {
        r.only({"type", "q"});
        return Udl{r.number("q")};
    }
    if (type == "point") {
        r.only({"type", "P", "a"});
        return PointLoad{r.number("P"), r.number("a")};
    }
    if (type == "moving_point") {
        r.only({"type", "P", "v", "x0"});
        return MovingPointLoad{r.number("P"), r.number("v"), r.number_or("x0", 0.0)};
    }
    if (type == "harmonic_point") {
        r.only({"type", "P0", "f", "x"});
        return HarmonicPointLoad{r.number("P0"), r.number("f"), r.number("x")};
    }
    throw ValidationError(r.path("type"), "must be one of udl, point, moving_point, harmonic_point");
}

json boundary_json(const BoundarySpec& bc) {
    json j = {{"left", to_string(bc.left.kind)}, {"right", to_string(bc.right.kind)}};
    if (bc.left.kind == EndKind::Spring) {
        j["k"] = bc.left.stiffness;
    } else if (bc.right.kind == EndKind::Spring) {
        j["k"] = bc.right.stiffness;
    }
    return j;
}

json load_json(const LoadCase& load) {
    return std::visit(
        [](const auto& l) -> json {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, Udl>) {
                return {{"type", "udl"}, {"q", l.q}};
            } else if constexpr (std::is_same_v<T, PointLoad>) {
                return {{"type", "point"}, {"P", l.P}, {"a", l.position}};
            } else if constexpr (std::is_same_v<T, MovingPointLoad>) {
                return {{"type", "moving_point"}, {"P", l.P}, {"v", l.v}, {"x0", l.x0}};
            } else {
                return {{"type", "harmonic_point"}, {"P0", l.P0}, {"f", l.f}, {"x", l.position}};
            }
        },
        load);
}

std::pair<std::size_t, std::size_t> line_and_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

template <class T>
std::size_t count_of(const std::vector<LoadCase>& loads) {
    std::size_t n = 0;
    for (const auto& l : loads) n += std::holds_alternative<T>(l) ? 1 : 0;
    return n;
}

}  // namespace

std::string to_string(SolverKind kind) {
    for (const auto& [k, name] : kSolverNames) {
        if (k == kind) return name;
    }
    return "unknown";
}

SolverKind solver_from_string(const std::string& name) {
    for (const auto& [k, n] : kSolverNames) {
        if (name == n) return k;
    }
    throw ValidationError("solver", "unknown solver '" + name +
                                        "' (expected static, quasi_static, modal, dynamic, sweep, nonlinear)");
}

std::vector<double> SweepSpec::frequencies() const {
    std::vector<double> f(f_count);
    for (std::size_t i = 0; i < f_count; ++i) {
        f[i] = f_count == 1 ? f_min
                            : f_min + (f_max - f_min) * static_cast<double>(i) / static_cast<double>(f_count - 1);
    }
    return f;
}

IntegratorConfig Scenario::integrator() const {
    IntegratorConfig cfg;
    cfg.gamma = gamma;
    cfg.beta = beta;
    cfg.dt = time ? time->dt : kDefaultSweepDt;
    return cfg;
}

bool Scenario::operator==(const Scenario& o) const {
    return name == o.name && solver == o.solver && beam == o.beam && bc == o.bc && modal_bc == o.modal_bc &&
           loads == o.loads && nodes == o.nodes && time == o.time && gamma == o.gamma && beta == o.beta &&
           zeta1 == o.zeta1 && material == o.material && sweep == o.sweep && probes == o.probes &&
           stride == o.stride;
}

void Scenario::validate() const {
    if (name.empty()) throw ValidationError("name", "must not be empty");
    beam.validate();
    bc.validate();
    if (modal_bc) modal_bc->validate();
    for (std::size_t i = 0; i < loads.size(); ++i) validate_load(loads[i], beam.length, indexed("loads", i));
    if (nodes < 5) throw ValidationError("grid.nodes", "must be >= 5");
    if (stride == 0) throw ValidationError("output.stride", "must be >= 1");
    for (std::size_t i = 0; i < probes.size(); ++i) {
        if (!std::isfinite(probes[i]) || probes[i] < 0.0 || probes[i] > beam.length) {
            throw ValidationError(indexed("probes", i), "must lie within [0, L]");
        }
    }
    if (!std::isfinite(gamma) || gamma < 0.5) throw ValidationError("integrator.gamma", "must be >= 0.5");
    if (!std::isfinite(beta) || beta < 0.25 * gamma) throw ValidationError("integrator.beta", "must be >= gamma / 4");
    if (!std::isfinite(zeta1) || zeta1 < 0.0 || zeta1 >= 1.0) {
        throw ValidationError("integrator.rayleigh.zeta1", "must lie in [0, 1)");
    }
    if (time) {
        if (!std::isfinite(time->dt) || time->dt <= 0.0) throw ValidationError("time.dt", "must be > 0");
        if (time->end < time->start) throw ValidationError("time.end", "must be >= time.start");
    }
    if (material) material->validate();

    const std::string solver_name = to_string(solver);
    auto need_time_span = [&] {
        if (!time) throw ValidationError("time", "is required for solver " + solver_name);
        (void)TimeGrid(time->start, time->end, time->dt);
    };
    switch (solver) {
        case SolverKind::Static:
            if (loads.empty()) throw ValidationError("loads", "static solver needs at least one load");
            for (std::size_t i = 0; i < loads.size(); ++i) {
                if (is_time_dependent(loads[i])) {
                    throw ValidationError(indexed("loads", i), "static solver takes only udl and point loads");
                }
            }
            break;
        case SolverKind::QuasiStatic:
            need_time_span();
            if (loads.size() != 1 || count_of<Udl>(loads) + count_of<PointLoad>(loads) != 0) {
                throw ValidationError("loads", "quasi_static solver needs exactly one moving_point or harmonic_point load");
            }
            if (!(bc == BoundarySpec::pinned_pinned())) {
                throw ValidationError("bc", "quasi_static solver needs pinned ends");
            }
            break;
        case SolverKind::Modal:
            break;
        case SolverKind::Dynamic:
            need_time_span();
            if (loads.empty()) throw ValidationError("loads", "dynamic solver needs at least one load");
            if (nodes < 7) throw ValidationError("grid.nodes", "dynamic solver needs >= 7 nodes");
            break;
        case SolverKind::Sweep:
            if (!sweep) throw ValidationError("sweep", "is required for solver sweep");
            if (!(sweep->f_min > 0.0)) throw ValidationError("sweep.f_min", "must be > 0");
            if (!(sweep->f_max >= sweep->f_min) || !std::isfinite(sweep->f_max)) {
                throw ValidationError("sweep.f_max", "must be >= sweep.f_min");
            }
            if (sweep->f_count == 0) throw ValidationError("sweep.f_count", "must be >= 1");
            if (sweep->settle_periods == 0) throw ValidationError("sweep.settle_periods", "must be >= 1");
            if (sweep->measure_periods == 0) throw ValidationError("sweep.measure_periods", "must be >= 1");
            if (loads.size() != 1 || count_of<HarmonicPointLoad>(loads) != 1) {
                throw ValidationError("loads", "sweep solver needs exactly one harmonic_point load");
            }
            if (nodes < 7) throw ValidationError("grid.nodes", "sweep solver needs >= 7 nodes");
            break;
        case SolverKind::Nonlinear:
            if (loads.size() != 1 || count_of<PointLoad>(loads) != 1) {
                throw ValidationError("loads", "nonlinear solver needs exactly one point load");
            }
            if (std::get<PointLoad>(loads[0]).P < 0.0) throw ValidationError("loads[0].P", "must be >= 0");
            if (std::get<PointLoad>(loads[0]).position <= 0.0) throw ValidationError("loads[0].a", "must be > 0");
            if (!(bc == BoundarySpec::clamped_free())) {
                throw ValidationError("bc", "nonlinear solver needs a clamped left end and a free right end");
            }
            if (!material) throw ValidationError("material", "is required for solver nonlinear");
            break;
    }
}

Scenario parse_scenario(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const auto [line, column] = line_and_column(text, e.byte);
        throw ParseError("malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(column) +
                             ": " + e.what(),
                         line, column);
    }

    Scenario s;
    auto& defaults = s.applied_defaults;
    ObjectReader root(doc, "", defaults);
    root.only({"schema", "name", "solver", "beam", "bc", "loads", "grid", "time", "integrator", "material", "sweep",
               "probes", "output"});
    const std::string schema = root.text("schema");
    if (schema != kSchemaVersion) {
        throw ValidationError("schema", "unsupported version '" + schema + "' (expected " + kSchemaVersion + ")");
    }
    s.name = root.text("name");
    s.solver = solver_from_string(root.text("solver"));

    {
        ObjectReader r(root.at("beam"), "beam", defaults);
        r.only({"length", "width", "height", "elastic_modulus", "density"});
        s.beam = {r.number("length"), r.number("width"), r.number("height"), r.number("elastic_modulus"),
                  r.number("density")};
        s.beam.validate();
    }

    s.bc = parse_boundary(root.at("bc"), "bc", true, s.modal_bc, defaults);

    if (root.has("loads")) {
        const json& loads = root.at("loads");
        if (!loads.is_array()) throw ValidationError("loads", "must be an array");
        for (std::size_t i = 0; i < loads.size(); ++i) s.loads.push_back(parse_load(loads[i], indexed("loads", i), defaults));
    } else {
        defaults.push_back("loads");
    }

    if (root.has("grid")) {
        ObjectReader r(root.at("grid"), "grid", defaults);
        r.only({"nodes"});
        s.nodes = r.count_or("nodes", s.nodes);
    } else {
        defaults.push_back("grid.nodes");
    }

    if (root.has("time")) {
        ObjectReader r(root.at("time"), "time", defaults);
        r.only({"start", "end", "dt"});
        TimeSpec t;
        t.start = r.number_or("start", 0.0);
        t.dt = r.number("dt");
        t.end = s.solver == SolverKind::Sweep ? r.number_or("end", t.start) : r.number("end");
        s.time = t;
    } else if (s.solver == SolverKind::Sweep) {
        s.time = TimeSpec{0.0, 0.0, kDefaultSweepDt};
        defaults.push_back("time");
    }

    if (root.has("integrator")) {
        ObjectReader r(root.at("integrator"), "integrator", defaults);
        r.only({"gamma", "beta", "rayleigh"});
        s.gamma = r.number_or("gamma", s.gamma);
        s.beta = r.number_or("beta", s.beta);
        if (r.has("rayleigh")) {
            ObjectReader rr(r.at("rayleigh"), "integrator.rayleigh", defaults);
            rr.only({"zeta1"});
            s.zeta1 = rr.number_or("zeta1", s.zeta1);
        } else {
            defaults.push_back("integrator.rayleigh.zeta1");
        }
    } else {
        defaults.push_back("integrator");
    }

    if (root.has("material")) {
        ObjectReader r(root.at("material"), "material", defaults);
        r.only({"E", "alpha", "n"});
        s.material = RambergOsgood{r.number_or("E", s.beam.elastic_modulus), r.number_or("alpha", kDefaultAlpha),
                                   r.number_or("n", kDefaultExponent)};
    } else if (s.solver == SolverKind::Nonlinear) {
        s.material = RambergOsgood{s.beam.elastic_modulus, kDefaultAlpha, kDefaultExponent};
        defaults.push_back("material");
    }

    if (root.has("sweep")) {
        ObjectReader r(root.at("sweep"), "sweep", defaults);
        r.only({"f_min", "f_max", "f_count", "settle_periods", "measure_periods"});
        SweepSpec sw;
        sw.f_min = r.number("f_min");
        sw.f_max = r.number("f_max");
        sw.f_count = r.count("f_count");
        sw.settle_periods = r.count_or("settle_periods", sw.settle_periods);
        sw.measure_periods = r.count_or("measure_periods", sw.measure_periods);
        s.sweep = sw;
    }

    if (root.has("probes")) {
        const json& probes = root.at("probes");
        if (!probes.is_array()) throw ValidationError("probes", "must be an array");
        for (std::size_t i = 0; i < probes.size(); ++i) {
            if (!probes[i].is_number()) throw ValidationError(indexed("probes", i), "must be a number");
            s.probes.push_back(probes[i].get<double>());
        }
    }

    if (root.has("output")) {
        ObjectReader r(root.at("output"), "output", defaults);
        r.only({"stride"});
        s.stride = r.count_or("stride", s.stride);
    } else {
        defaults.push_back("output.stride");
    }

    s.validate();
    return s;
}

json to_json(const Scenario& s) {
    json j;
    j["schema"] = kSchemaVersion;
    j["name"] = s.name;
    j["solver"] = to_string(s.solver);
    j["beam"] = {{"length", s.beam.length},
                 {"width", s.beam.width},
                 {"height", s.beam.height},
                 {"elastic_modulus", s.beam.elastic_modulus},
                 {"density", s.beam.density}};
    j["bc"] = boundary_json(s.bc);
    if (s.modal_bc) j["bc"]["modal_only"] = boundary_json(*s.modal_bc);
    j["loads"] = json::array();
    for (const auto& l : s.loads) j["loads"].push_back(load_json(l));
    j["grid"] = {{"nodes", s.nodes}};
    if (s.time) j["time"] = {{"start", s.time->start}, {"end", s.time->end}, {"dt", s.time->dt}};
    j["integrator"] = {{"gamma", s.gamma}, {"beta", s.beta}, {"rayleigh", {{"zeta1", s.zeta1}}}};
    if (s.material) j["material"] = {{"E", s.material->E}, {"alpha", s.material->alpha}, {"n", s.material->n}};
    if (s.sweep) {
        j["sweep"] = {{"f_min", s.sweep->f_min},
                      {"f_max", s.sweep->f_max},
                      {"f_count", s.sweep->f_count},
                      {"settle_periods", s.sweep->settle_periods},
                      {"measure_periods", s.sweep->measure_periods}};
    }
    j["probes"] = s.probes;
    j["output"] = {{"stride", s.stride}};
    return j;
}

}  // namespace beamlab
