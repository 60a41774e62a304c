#include "stickysim/generators.hpp"

#include "stickysim/errors.hpp"
#include "stickysim/rng.hpp"

#include <algorithm>
#include <set>

namespace stickysim {

namespace {

Scalar rat(long long n, long long d = 1) { return Scalar::rational(n, d); }

Particle original(int index, Scalar mass, VecN position, VecN velocity) {
    return Particle{std::move(mass), std::move(position), std::move(velocity), {index}};
}

/// A ballistic line: position(t) = anchor + (t - t_ref) * velocity.
struct Line {
    VecN anchor;
    Scalar t_ref;
    VecN velocity;
    int level = 0;
    bool compound = false; // merge-product line rather than a pre-collision one

    VecN at(const Scalar& t) const { return anchor + (t - t_ref) * velocity; }
};

/// Do two lines occupy the same point at some common time in [0, horizon]?
/// Exact test in the rational backend.
bool lines_meet(const Line& a, const Line& b, const Scalar& horizon) {
    VecN d0 = b.at(a.t_ref) - a.anchor; // offset at t = a.t_ref
    VecN dv = b.velocity - a.velocity;
    Scalar dv2 = dv.norm2();
    if (dv2.is_zero()) return d0.is_zero();
    Scalar t = a.t_ref - d0.dot(dv) / dv2;
    if (t < 0 || t > horizon) return false;
    return (d0 + (t - a.t_ref) * dv).is_zero();
}

/// Adjacent-level contacts forced by the cascade itself: the merge product
/// of level i starts exactly where level i's pair collides, so it meets
/// both lines of that pair there. Those contacts are the construction, not
/// accidents, and are exempt from the non-intersection requirement.
bool construction_forced(const Line& a, const Line& b) {
    const Line& deep = a.level > b.level ? a : b;
    const Line& shallow = a.level > b.level ? b : a;
    if (deep.level != shallow.level + 1 || !shallow.compound) return false;
    return true; // {split_i or compound_i} vs compound_{i-1}, touching at t_i
}

bool nip_clear(const Line& candidate, const std::vector<Line>& earlier, const Scalar& horizon) {
    for (const auto& line : earlier) {
        if (line.level == candidate.level) continue;
        if (construction_forced(candidate, line)) continue;
        if (lines_meet(candidate, line, horizon)) return false;
    }
    return true;
}

} // namespace

Scenario example2_scenario(const Example2Options& opts) {
    Scenario s;
    s.dimension = 2;
    s.backend = Backend::Rational;
    s.tolerance = rat(0);
    s.horizon = opts.horizon;
    s.particles = {
        original(0, rat(1), VecN{rat(1), opts.perturb}, VecN{rat(0), rat(1)}),
        original(1, rat(1), VecN{rat(0), rat(1)}, VecN{rat(1), rat(0)}),
    };
    validate_scenario(s);
    return s;
}

Trajectory example2_resplit_trajectory(const Scalar& T, const Scalar& horizon) {
    if (T < 1) throw InputError("resplit time must be >= 1");
    if (horizon <= T) throw InputError("horizon must exceed the resplit time");
    Scenario base = example2_scenario({rat(0), horizon});
    Scalar zero = rat(0), one = rat(1);
    VecN v1{rat(0), rat(1)}, v2{rat(1), rat(0)}, vm{rat(1, 2), rat(1, 2)};
    VecN meet{rat(1), rat(1)};
    VecN split = meet + (T - 1) * vm;

    Trajectory traj;
    traj.dimension = 2;
    traj.backend = Backend::Rational;
    traj.horizon = horizon;
    traj.masses = {rat(1), rat(1)};
    traj.paths = {
        {Segment{zero, one, base.particles[0].position, v1}, Segment{one, T, meet, vm},
         Segment{T, horizon, split, v1}},
        {Segment{zero, one, base.particles[1].position, v2}, Segment{one, T, meet, vm},
         Segment{T, horizon, split, v2}},
    };
    validate_trajectory(traj, rat(0));
    return traj;
}

Example3Result example3_scenario(int levels, std::uint64_t seed, const Scalar& horizon) {
    if (levels < 2) throw InputError("example3: levels >= 2 required");
    if (horizon.backend() != Backend::Rational || horizon < rat(1, 2))
        throw InputError("example3: rational horizon >= 1/2 required");

    Rng rng(seed);
    Example3Spec spec;
    spec.levels = levels;
    spec.seed = seed;
    spec.horizon = horizon;

    std::vector<Line> lines; // both lines of every earlier level
    VecN point = VecN::zero(2, Backend::Rational);          // interaction point of level i
    VecN compound_prev = VecN::zero(2, Backend::Rational);  // v_{i-1}^*

    for (int i = 1; i <= levels; ++i) {
        Scalar t_i = pow_int(rat(1, 2), i);
        bool placed = false;
        for (int attempt = 0; attempt < 2000 && !placed; ++attempt) {
            VecN v{rng.rational_in_unit(64), rng.rational_in_unit(64)};
            if (v == compound_prev) continue; // degenerate split: no real collision
            VecN v_star = compound_prev * rat(2) - v; // momentum balance of the equal-mass split
            Line split_line{point, t_i, v, i, false};
            Line compound_line{point, t_i, v_star, i, true};
            if (!nip_clear(split_line, lines, horizon) ||
                !nip_clear(compound_line, lines, horizon))
                continue;
            spec.times.push_back(t_i);
            spec.points.push_back(point);
            spec.split_velocities.push_back(v);
            spec.compound_velocities.push_back(v_star);
            lines.push_back(split_line);
            lines.push_back(compound_line);
            // Where the compound of this level formed, one step deeper in time.
            Scalar t_next = pow_int(rat(1, 2), i + 1);
            point = point - (t_i - t_next) * v_star;
            compound_prev = v_star;
            placed = true;
        }
        if (!placed)
            throw BudgetExceeded("example3: line sampling budget exhausted at level " +
                                 std::to_string(i) + "; reseed");
    }

    Scenario s;
    s.dimension = 2;
    s.backend = Backend::Rational;
    s.tolerance = rat(0);
    s.horizon = horizon;
    for (int i = 1; i <= levels; ++i) {
        Scalar mass = pow_int(rat(1, 2), i);
        const VecN& v = spec.split_velocities[i - 1];
        VecN x0 = spec.points[i - 1] - spec.times[i - 1] * v;
        s.particles.push_back(original(i - 1, mass, x0, v));
    }
    // Tail stand-in: total deeper mass 2^-N riding the deepest compound line.
    {
        Scalar mass = pow_int(rat(1, 2), levels);
        const VecN& v = spec.compound_velocities[levels - 1];
        VecN x0 = spec.points[levels - 1] - spec.times[levels - 1] * v;
        s.particles.push_back(original(levels, mass, x0, v));
    }
    validate_scenario(s);
    return {std::move(s), std::move(spec)};
}

bool nip_check(const Example3Spec& spec, const Scalar& horizon) {
    std::vector<Line> lines;
    for (std::size_t i = 0; i < spec.points.size(); ++i) {
        int level = static_cast<int>(i) + 1;
        lines.push_back({spec.points[i], spec.times[i], spec.split_velocities[i], level, false});
        lines.push_back(
            {spec.points[i], spec.times[i], spec.compound_velocities[i], level, true});
    }
    for (std::size_t i = 0; i < lines.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) {
            if (lines[i].level == lines[j].level) continue;
            if (construction_forced(lines[i], lines[j])) continue;
            if (lines_meet(lines[i], lines[j], horizon)) return false;
        }
    return true;
}

Example4Result example4_scenario(const TailParams& params, int levels, Targeting targeting,
                                 WhiteVariant variant, const Scalar& horizon) {
    params.require_valid();
    if (params.backend() != Backend::Rational)
        throw InputError("example4: rational parameters required");
    if (levels < 2) throw InputError("example4: levels >= 2 required");

    Example4Spec spec;
    spec.params = params;
    spec.levels = levels;
    spec.targeting = targeting;
    spec.variant = variant;
    for (int k = 1; k <= levels + 1; ++k)
        spec.times.push_back(collision_time_tk(params, k)); // t_0 .. t_N

    Scenario s;
    s.dimension = 2;
    s.backend = Backend::Rational;
    s.tolerance = rat(0);
    s.horizon = horizon.sign() > 0 ? horizon : spec.times[0];

    for (int k = 1; k <= levels; ++k) {
        Scalar mass = pow_int(params.alpha, k);
        VecN pos{pow_int(params.beta, k), rat(0)};
        VecN vel{free_velocity(params, k), rat(0)};
        s.particles.push_back(original(k - 1, mass, pos, vel));
        spec.black_indices.push_back(k - 1);
    }
    for (int k = 1; k <= levels; ++k) {
        Scalar tau = select_tau(params, k);
        Scalar target = targeting == Targeting::InfiniteTail
                            ? barycenter_tail(params, k, tau)
                            : barycenter_tail_truncated(params, k, levels, tau);
        spec.taus.push_back(tau);
        spec.targets.push_back(target);
        Scalar mass = pow_int(params.alpha, k);
        VecN vel = variant == WhiteVariant::Vertical
                       ? VecN{rat(0), rat(-1)}
                       : VecN{rat(1), -rat(1) / rat(k)};
        VecN pos = VecN{target, rat(0)} - tau * vel; // crosses the axis at tau, on target
        int index = levels + k - 1;
        s.particles.push_back(original(index, mass, pos, vel));
        spec.white_indices.push_back(index);
    }
    validate_scenario(s);
    return {std::move(s), std::move(spec)};
}

namespace {

std::vector<int> hits_impl(const EventLog& log, const Example4Spec& spec, bool stuck_only) {
    std::set<int> blacks(spec.black_indices.begin(), spec.black_indices.end());
    std::set<int> whites(spec.white_indices.begin(), spec.white_indices.end());
    std::set<int> hit_levels;
    for (const auto& event : log)
        for (const auto& cluster : event.clusters) {
            if (stuck_only && !cluster.stuck) continue;
            bool has_black = false;
            std::vector<int> cluster_whites;
            for (const auto& member_set : cluster.members)
                for (int m : member_set) {
                    if (blacks.count(m)) has_black = true;
                    if (whites.count(m)) cluster_whites.push_back(m);
                }
            if (!has_black) continue;
            for (int w : cluster_whites)
                hit_levels.insert(w - spec.levels + 1); // back to 1-based level
        }
    return {hit_levels.begin(), hit_levels.end()};
}

} // namespace

std::vector<int> white_hits(const EventLog& log, const Example4Spec& spec) {
    return hits_impl(log, spec, false);
}

std::vector<int> white_stick_hits(const EventLog& log, const Example4Spec& spec) {
    return hits_impl(log, spec, true);
}

} // namespace stickysim
