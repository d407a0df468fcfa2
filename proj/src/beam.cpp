#include "beamlab/beam.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "beamlab/errors.hpp"

namespace beamlab {

namespace {

void require_positive(double value, const char* field) {
    if (!std::isfinite(value) || value <= 0.0) {
        throw ValidationError(field, "must be finite and > 0");
    }
}

void require_finite(double value, const std::string& field) {
    if (!std::isfinite(value)) throw ValidationError(field, "must be finite");
}

void require_on_span(double x, double length, const std::string& field) {
    require_finite(x, field);
    if (x < 0.0 || x > length) throw ValidationError(field, "must lie within [0, L]");
}

}  // namespace

void BeamSpec::validate() const {
    require_positive(length, "beam.length");
    require_positive(width, "beam.width");
    require_positive(height, "beam.height");
    require_positive(elastic_modulus, "beam.elastic_modulus");
    require_positive(density, "beam.density");
}

SectionProperties derive_section(const BeamSpec& beam) {
    beam.validate();
    SectionProperties s;
    s.second_moment = beam.width * beam.height * beam.height * beam.height / 12.0;
    s.area = beam.width * beam.height;
    s.flexural_rigidity = beam.elastic_modulus * s.second_moment;
    s.mass_per_length = beam.density * s.area;
    s.wave_coefficient = std::sqrt(s.flexural_rigidity / s.mass_per_length);
    return s;
}

// ----------------------------------------------------------------------------

void BoundarySpec::validate() const {
    for (const auto& [end, name] : {std::pair{left, "bc.left"}, std::pair{right, "bc.right"}}) {
        if (end.kind == EndKind::Spring && (!std::isfinite(end.stiffness) || end.stiffness <= 0.0)) {
            throw ValidationError(std::string(name), "spring stiffness must be finite and > 0");
        }
    }
}

bool BoundarySpec::restrains_rigid_body() const {
    auto translational = [](const EndCondition& e) {
        return e.kind == EndKind::Pinned || e.kind == EndKind::Spring;
    };
    if (left.kind == EndKind::Clamped || right.kind == EndKind::Clamped) return true;
    return translational(left) && translational(right);
}

std::string to_string(EndKind kind) {
    switch (kind) {
        case EndKind::Pinned: return "pinned";
        case EndKind::Free: return "free";
        case EndKind::Clamped: return "clamped";
        case EndKind::Spring: return "spring";
    }
    return "unknown";
}

EndKind end_kind_from_string(const std::string& name) {
    if (name == "pinned") return EndKind::Pinned;
    if (name == "free") return EndKind::Free;
    if (name == "clamped") return EndKind::Clamped;
    if (name == "spring") return EndKind::Spring;
    throw ValidationError("bc", "unknown end condition '" + name +
                                    "' (expected pinned, free, clamped or spring)");
}

// ----------------------------------------------------------------------------

double HarmonicPointLoad::magnitude_at(double t) const {
    return P0 * std::sin(2.0 * std::numbers::pi * f * t);
}

void validate_load(const LoadCase& load, double length, const std::string& field) {
    std::visit(
        [&](const auto& l) {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, Udl>) {
                require_finite(l.q, field + ".q");
            } else if constexpr (std::is_same_v<T, PointLoad>) {
                require_finite(l.P, field + ".P");
                require_on_span(l.position, length, field + ".a");
            } else if constexpr (std::is_same_v<T, MovingPointLoad>) {
                require_finite(l.P, field + ".P");
                require_finite(l.v, field + ".v");
                if (l.v < 0.0) throw ValidationError(field + ".v", "must be >= 0");
                require_on_span(l.x0, length, field + ".x0");
            } else {
                require_finite(l.P0, field + ".P0");
                if (!std::isfinite(l.f) || l.f <= 0.0) {
                    throw ValidationError(field + ".f", "must be finite and > 0");
                }
                require_on_span(l.position, length, field + ".x");
            }
        },
        load);
}

bool is_time_dependent(const LoadCase& load) {
    return std::holds_alternative<MovingPointLoad>(load) ||
           std::holds_alternative<HarmonicPointLoad>(load);
}

std::string describe(const LoadCase& load) {
    std::ostringstream os;
    os.precision(17);
    std::visit(
        [&](const auto& l) {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, Udl>) {
                os << "udl(q=" << l.q << ")";
            } else if constexpr (std::is_same_v<T, PointLoad>) {
                os << "point(P=" << l.P << ", a=" << l.position << ")";
            } else if constexpr (std::is_same_v<T, MovingPointLoad>) {
                os << "moving_point(P=" << l.P << ", v=" << l.v << ", x0=" << l.x0 << ")";
            } else {
                os << "harmonic_point(P0=" << l.P0 << ", f=" << l.f << ", x=" << l.position << ")";
            }
        },
        load);
    return os.str();
}

// ----------------------------------------------------------------------------

SpatialGrid::SpatialGrid(double length, std::size_t node_count)
    : length_(length), node_count_(node_count), spacing_(0.0) {
    if (!std::isfinite(length) || length <= 0.0) {
        throw ValidationError("beam.length", "must be finite and > 0");
    }
    if (node_count < 5) throw ValidationError("grid.nodes", "must be >= 5");
    spacing_ = length / static_cast<double>(node_count - 1);
}

double SpatialGrid::position(std::size_t i) const {
    if (i + 1 == node_count_) return length_;
    return static_cast<double>(i) * spacing_;
}

std::vector<double> SpatialGrid::positions() const {
    std::vector<double> xs(node_count_);
    for (std::size_t i = 0; i < node_count_; ++i) xs[i] = position(i);
    return xs;
}

std::size_t SpatialGrid::nearest_node(double x) const {
    const double clamped = std::clamp(x, 0.0, length_);
    const auto i = static_cast<std::size_t>(std::llround(clamped / spacing_));
    return std::min(i, node_count_ - 1);
}

TimeGrid::TimeGrid(double t_start, double t_end, double dt)
    : start_(t_start), end_(t_end), dt_(dt), steps_(0) {
    if (!std::isfinite(t_start)) throw ValidationError("time.start", "must be finite");
    if (!std::isfinite(t_end) || t_end <= t_start) {
        throw ValidationError("time.end", "must be finite and > time.start");
    }
    if (!std::isfinite(dt) || dt <= 0.0) throw ValidationError("time.dt", "must be finite and > 0");
    steps_ = static_cast<std::size_t>(std::llround((t_end - t_start) / dt));
    if (steps_ == 0) throw ValidationError("time.dt", "must not exceed the time span");
}

// ----------------------------------------------------------------------------

void TimeSeriesResult::check() const {
    if (static_cast<std::size_t>(frames.rows()) != times.size()) {
        throw SolverError("time series: frame count does not match time count");
    }
    if (!frames.allFinite()) throw SolverError("time series: non-finite deflection");
    for (const auto& [node, history] : probes) {
        if (history.size() != times.size()) throw SolverError("time series: probe length mismatch");
    }
}

void TimeSeriesResult::attach_probes(const std::vector<double>& positions) {
    const auto& xs = metadata.node_positions;
    for (double x : positions) {
        const auto it = std::min_element(xs.begin(), xs.end(), [x](double a, double b) {
            return std::abs(a - x) < std::abs(b - x);
        });
        if (it == xs.end()) continue;
        const auto node = static_cast<std::size_t>(it - xs.begin());
        std::vector<double> history(times.size());
        for (std::size_t k = 0; k < times.size(); ++k) {
            history[k] = frames(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(node));
        }
        probes[node] = std::move(history);
    }
}

}  // namespace beamlab
