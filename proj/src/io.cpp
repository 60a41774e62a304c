#include "stickysim/io.hpp"

#include "stickysim/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace stickysim::io {

namespace {

Backend backend_from_name(const std::string& name) {
    if (name == "rational") return Backend::Rational;
    if (name == "float") return Backend::Float;
    throw InputError("unknown backend: " + name);
}

const json& require(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw InputError(std::string("missing field: ") + key);
    return *it;
}

void require_format(const json& j, const char* format) {
    if (require(j, "format").get<std::string>() != format)
        throw InputError(std::string("expected format \"") + format + "\"");
}

} // namespace

json scalar_to_json(const Scalar& s) {
    if (s.backend() == Backend::Rational) return s.str();
    return s.dbl();
}

Scalar scalar_from_json(const json& j, Backend backend) {
    if (j.is_string()) return Scalar::parse(j.get<std::string>(), backend);
    if (j.is_number_integer())
        return Scalar::of(j.get<long long>(), backend);
    if (j.is_number_float()) {
        double d = j.get<double>();
        return backend == Backend::Float ? Scalar::real(d) : Scalar::rational(Rational(d));
    }
    throw InputError("expected a number or numeric string");
}

json vec_to_json(const VecN& v) {
    json arr = json::array();
    for (int i = 0; i < v.dim(); ++i) arr.push_back(scalar_to_json(v[i]));
    return arr;
}

VecN vec_from_json(const json& j, Backend backend, int dimension) {
    if (!j.is_array() || static_cast<int>(j.size()) != dimension)
        throw InputError("expected a vector of dimension " + std::to_string(dimension));
    std::vector<Scalar> comps;
    for (const auto& c : j) comps.push_back(scalar_from_json(c, backend));
    return VecN(std::move(comps));
}

json scenario_to_json(const Scenario& s) {
    json j;
    j["format"] = "stickysim-scenario";
    j["version"] = 1;
    j["dimension"] = s.dimension;
    j["backend"] = backend_name(s.backend);
    j["tolerance"] = scalar_to_json(s.tolerance);
    j["horizon"] = scalar_to_json(s.horizon);
    j["event_cap"] = s.event_cap;
    json particles = json::array();
    for (const auto& p : s.particles) {
        json pj;
        pj["mass"] = scalar_to_json(p.mass);
        pj["position"] = vec_to_json(p.position);
        pj["velocity"] = vec_to_json(p.velocity);
        particles.push_back(std::move(pj));
    }
    j["particles"] = std::move(particles);
    if (!s.provenance_json.empty()) j["provenance"] = json::parse(s.provenance_json);
    return j;
}

Scenario scenario_from_json(const json& j) {
    require_format(j, "stickysim-scenario");
    Scenario s;
    s.dimension = require(j, "dimension").get<int>();
    s.backend = backend_from_name(require(j, "backend").get<std::string>());
    s.tolerance = scalar_from_json(require(j, "tolerance"), s.backend);
    s.horizon = scalar_from_json(require(j, "horizon"), s.backend);
    s.event_cap = j.value("event_cap", kDefaultEventCap);
    const json& particles = require(j, "particles");
    if (!particles.is_array()) throw InputError("particles must be an array");
    int index = 0;
    for (const auto& pj : particles) {
        Particle p;
        p.mass = scalar_from_json(require(pj, "mass"), s.backend);
        p.position = vec_from_json(require(pj, "position"), s.backend, s.dimension);
        p.velocity = vec_from_json(require(pj, "velocity"), s.backend, s.dimension);
        p.members = {index++};
        s.particles.push_back(std::move(p));
    }
    if (j.contains("provenance")) s.provenance_json = j["provenance"].dump();
    validate_scenario(s);
    return s;
}

json events_to_json(const EventLog& log, Backend backend) {
    json j;
    j["format"] = "stickysim-events";
    j["backend"] = backend_name(backend);
    json events = json::array();
    for (const auto& event : log) {
        json ej;
        ej["time"] = scalar_to_json(event.time);
        json clusters = json::array();
        for (const auto& c : event.clusters) {
            json cj;
            cj["members"] = c.members;
            json masses = json::array();
            for (const auto& m : c.masses) masses.push_back(scalar_to_json(m));
            cj["masses"] = std::move(masses);
            json pre = json::array();
            for (const auto& v : c.pre_velocities) pre.push_back(vec_to_json(v));
            cj["pre_velocities"] = std::move(pre);
            cj["post_velocity"] = vec_to_json(c.post_velocity);
            cj["energy_drop"] = scalar_to_json(c.energy_drop);
            cj["stuck"] = c.stuck;
            clusters.push_back(std::move(cj));
        }
        ej["clusters"] = std::move(clusters);
        events.push_back(std::move(ej));
    }
    j["events"] = std::move(events);
    return j;
}

EventLog events_from_json(const json& j) {
    require_format(j, "stickysim-events");
    Backend backend = backend_from_name(require(j, "backend").get<std::string>());
    EventLog log;
    for (const auto& ej : require(j, "events")) {
        CollisionEvent event;
        event.time = scalar_from_json(require(ej, "time"), backend);
        for (const auto& cj : require(ej, "clusters")) {
            EventCluster c;
            c.members = require(cj, "members").get<std::vector<std::vector<int>>>();
            for (const auto& m : require(cj, "masses")) c.masses.push_back(scalar_from_json(m, backend));
            const json& pre = require(cj, "pre_velocities");
            int dim = pre.empty() || pre[0].empty() ? 0 : static_cast<int>(pre[0].size());
            for (const auto& v : pre) c.pre_velocities.push_back(vec_from_json(v, backend, dim));
            c.post_velocity = vec_from_json(require(cj, "post_velocity"), backend, dim);
            c.energy_drop = scalar_from_json(require(cj, "energy_drop"), backend);
            c.stuck = require(cj, "stuck").get<bool>();
            event.clusters.push_back(std::move(c));
        }
        log.push_back(std::move(event));
    }
    return log;
}

json trajectory_to_json(const Trajectory& t) {
    json j;
    j["format"] = "stickysim-trajectory";
    j["backend"] = backend_name(t.backend);
    j["dimension"] = t.dimension;
    j["horizon"] = scalar_to_json(t.horizon);
    json masses = json::array();
    for (const auto& m : t.masses) masses.push_back(scalar_to_json(m));
    j["masses"] = std::move(masses);
    json paths = json::array();
    for (const auto& segs : t.paths) {
        json path = json::array();
        for (const auto& seg : segs) {
            json sj;
            sj["t_start"] = scalar_to_json(seg.t_start);
            sj["t_end"] = scalar_to_json(seg.t_end);
            sj["position_start"] = vec_to_json(seg.position_start);
            sj["velocity"] = vec_to_json(seg.velocity);
            path.push_back(std::move(sj));
        }
        paths.push_back(std::move(path));
    }
    j["paths"] = std::move(paths);
    return j;
}

Trajectory trajectory_from_json(const json& j) {
    require_format(j, "stickysim-trajectory");
    Trajectory t;
    t.backend = backend_from_name(require(j, "backend").get<std::string>());
    t.dimension = require(j, "dimension").get<int>();
    t.horizon = scalar_from_json(require(j, "horizon"), t.backend);
    for (const auto& m : require(j, "masses")) t.masses.push_back(scalar_from_json(m, t.backend));
    for (const auto& path : require(j, "paths")) {
        std::vector<Segment> segs;
        for (const auto& sj : path) {
            Segment seg{scalar_from_json(require(sj, "t_start"), t.backend),
                        scalar_from_json(require(sj, "t_end"), t.backend),
                        vec_from_json(require(sj, "position_start"), t.backend, t.dimension),
                        vec_from_json(require(sj, "velocity"), t.backend, t.dimension)};
            segs.push_back(std::move(seg));
        }
        t.paths.push_back(std::move(segs));
    }
    Scalar tol = t.backend == Backend::Rational ? Scalar::rational(0)
                                                : Scalar::real(kDefaultPositionTol);
    validate_trajectory(t, tol);
    return t;
}

json example3_spec_to_json(const Example3Spec& spec) {
    json j;
    j["format"] = "stickysim-example3-spec";
    j["levels"] = spec.levels;
    j["seed"] = spec.seed;
    j["horizon"] = scalar_to_json(spec.horizon);
    json times = json::array(), points = json::array(), split = json::array(),
         compound = json::array();
    for (int i = 0; i < spec.levels; ++i) {
        times.push_back(scalar_to_json(spec.times[i]));
        points.push_back(vec_to_json(spec.points[i]));
        split.push_back(vec_to_json(spec.split_velocities[i]));
        compound.push_back(vec_to_json(spec.compound_velocities[i]));
    }
    j["times"] = std::move(times);
    j["points"] = std::move(points);
    j["split_velocities"] = std::move(split);
    j["compound_velocities"] = std::move(compound);
    return j;
}

Example3Spec example3_spec_from_json(const json& j) {
    require_format(j, "stickysim-example3-spec");
    Example3Spec spec;
    spec.levels = require(j, "levels").get<int>();
    spec.seed = require(j, "seed").get<std::uint64_t>();
    spec.horizon = scalar_from_json(require(j, "horizon"), Backend::Rational);
    for (int i = 0; i < spec.levels; ++i) {
        spec.times.push_back(scalar_from_json(require(j, "times")[i], Backend::Rational));
        spec.points.push_back(vec_from_json(require(j, "points")[i], Backend::Rational, 2));
        spec.split_velocities.push_back(
            vec_from_json(require(j, "split_velocities")[i], Backend::Rational, 2));
        spec.compound_velocities.push_back(
            vec_from_json(require(j, "compound_velocities")[i], Backend::Rational, 2));
    }
    return spec;
}

json example4_spec_to_json(const Example4Spec& spec) {
    json j;
    j["format"] = "stickysim-example4-spec";
    j["alpha"] = scalar_to_json(spec.params.alpha);
    j["beta"] = scalar_to_json(spec.params.beta);
    j["gamma"] = scalar_to_json(spec.params.gamma);
    j["levels"] = spec.levels;
    j["targeting"] = spec.targeting == Targeting::InfiniteTail ? "infinite_tail" : "truncated_tail";
    j["variant"] = spec.variant == WhiteVariant::Vertical ? "vertical" : "slanted";
    json times = json::array(), taus = json::array(), targets = json::array();
    for (const auto& t : spec.times) times.push_back(scalar_to_json(t));
    for (const auto& t : spec.taus) taus.push_back(scalar_to_json(t));
    for (const auto& t : spec.targets) targets.push_back(scalar_to_json(t));
    j["times"] = std::move(times);
    j["taus"] = std::move(taus);
    j["targets"] = std::move(targets);
    j["black_indices"] = spec.black_indices;
    j["white_indices"] = spec.white_indices;
    return j;
}

std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

std::string content_hash(const json& j) {
    std::string text = canonical_dump(j);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("invalid JSON in " + path.string() + ": " + e.what());
    }
    return j;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write file: " + path.string());
    out << text;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const Scalar& step) {
    if (step.sign() <= 0) throw InputError("csv: sample step must be > 0");
    os << "t,index";
    for (int d = 1; d <= traj.dimension; ++d) os << ",x" << d;
    os << "\n";
    auto emit = [&](const Scalar& t) {
        for (int i = 0; i < traj.size(); ++i) {
            os << Scalar::real(t.to_double()).str() << "," << i;
            VecN x = traj.position_at(i, t);
            for (int d = 0; d < traj.dimension; ++d)
                os << "," << Scalar::real(x[d].to_double()).str();
            os << "\n";
        }
    };
    Scalar t = step.same(0);
    while (t < traj.horizon) {
        emit(t);
        t += step;
    }
    emit(traj.horizon);
}

namespace {

struct Bounds {
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool started = false;
    void add(double x, double y) {
        if (!started) {
            xmin = xmax = x;
            ymin = ymax = y;
            started = true;
            return;
        }
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

} // namespace

void write_trajectory_svg(std::ostream& os, const Trajectory& traj, const EventLog* events) {
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                    "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};
    const bool planar = traj.dimension >= 2;

    // Plane point of index i at time t: (x1, x2), or (t, x1) in 1-d.
    auto plane_point = [&](int i, const Scalar& t) {
        VecN x = traj.position_at(i, t);
        return planar ? std::pair<double, double>{x[0].to_double(), x[1].to_double()}
                      : std::pair<double, double>{t.to_double(), x[0].to_double()};
    };

    Bounds b;
    std::vector<std::vector<std::pair<double, double>>> lines;
    for (int i = 0; i < traj.size(); ++i) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& seg : traj.paths[i]) {
            auto p = plane_point(i, seg.t_start);
            pts.push_back(p);
            b.add(p.first, p.second);
        }
        auto last = plane_point(i, traj.horizon);
        pts.push_back(last);
        b.add(last.first, last.second);
        lines.push_back(std::move(pts));
    }

    const double width = 720, height = 540, margin = 40;
    double spanx = std::max(b.xmax - b.xmin, 1e-9);
    double spany = std::max(b.ymax - b.ymin, 1e-9);
    auto X = [&](double x) { return margin + (x - b.xmin) / spanx * (width - 2 * margin); };
    auto Y = [&](double y) { return height - margin - (y - b.ymin) / spany * (height - 2 * margin); };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    os << "  <rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
       << "\" fill=\"white\" stroke=\"#cccccc\"/>\n";
    os << "  <text x=\"" << margin << "\" y=\"" << margin - 14 << "\" font-size=\"12\" fill=\"#444444\">"
       << (planar ? "x1 - x2 plane" : "t - x plane") << "</text>\n";
    for (std::size_t i = 0; i < lines.size(); ++i) {
        os << "  <polyline fill=\"none\" stroke=\"" << palette[i % 10]
           << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : lines[i]) os << fmt(X(x)) << "," << fmt(Y(y)) << " ";
        os << "\"/>\n";
    }
    if (events) {
        for (const auto& event : *events)
            for (const auto& cluster : event.clusters) {
                if (cluster.members.empty() || cluster.members[0].empty()) continue;
                auto p = plane_point(cluster.members[0][0], event.time);
                os << "  <circle cx=\"" << fmt(X(p.first)) << "\" cy=\"" << fmt(Y(p.second))
                   << "\" r=\"3\" fill=\"" << (cluster.stuck ? "#000000" : "#999999")
                   << "\" fill-opacity=\"0.75\"/>\n";
            }
    }
    os << "</svg>\n";
}

} // namespace stickysim::io
