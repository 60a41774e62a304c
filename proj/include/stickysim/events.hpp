#pragma once

#include "stickysim/scalar.hpp"
#include "stickysim/vec.hpp"

#include <cstdint>
#include <vector>

namespace stickysim {

enum class Decision : std::uint8_t { Stick, Pass };

/// One decision per collision-event cluster, in the order clusters are
/// encountered when the scenario is replayed. Later events depend on
/// earlier decisions, so the length must match the realized sequence.
struct Policy {
    std::vector<Decision> decisions;

    static Policy all_stick(std::size_t n) {
        return Policy{std::vector<Decision>(n, Decision::Stick)};
    }
};

/// One coincidence cluster within an event: which particles met, their
/// states just before, and the momentum-conserving merged velocity. For a
/// passed cluster velocities are untouched and energy_drop is 0.
struct EventCluster {
    std::vector<std::vector<int>> members; // member sets of the particles that met
    std::vector<Scalar> masses;
    std::vector<VecN> pre_velocities;
    VecN post_velocity;
    Scalar energy_drop;
    bool stuck = true;

    std::vector<int> merged_members() const {
        std::vector<int> all;
        for (const auto& m : members) all.insert(all.end(), m.begin(), m.end());
        return all;
    }
};

struct CollisionEvent {
    Scalar time;
    std::vector<EventCluster> clusters;
};

using EventLog = std::vector<CollisionEvent>;

/// Straight-line piece of one particle's path; the position at t in
/// [t_start, t_end] is position_start + (t - t_start) * velocity.
struct Segment {
    Scalar t_start;
    Scalar t_end;
    VecN position_start;
    VecN velocity;

    VecN position_at(const Scalar& t) const { return position_start + (t - t_start) * velocity; }
};

/// Piecewise-linear path per original index over [0, horizon], continuous,
/// with breakpoints where the index's velocity changes. Members of a
/// compound share its path. Masses are the original per-index masses.
struct Trajectory {
    int dimension = 0;
    Backend backend = Backend::Rational;
    Scalar horizon;
    std::vector<Scalar> masses;
    std::vector<std::vector<Segment>> paths;

    int size() const { return static_cast<int>(paths.size()); }
    const Segment& segment_at(int index, const Scalar& t) const;
    VecN position_at(int index, const Scalar& t) const;
    /// Right-continuous segment velocity at t.
    VecN velocity_at(int index, const Scalar& t) const;
    VecN initial_position(int index) const { return paths[index].front().position_start; }
    VecN initial_velocity(int index) const { return paths[index].front().velocity; }
};

/// Throws InputError unless paths are contiguous, continuous, and cover
/// [0, horizon] for every index.
void validate_trajectory(const Trajectory& traj, const Scalar& tol);

/// Piecewise-constant kinetic energy: value i holds on [times[i],
/// times[i+1]), the last value extends to infinity. Right-continuous.
struct EnergyProfile {
    std::vector<Scalar> times;
    std::vector<Scalar> values;

    Scalar value_at(const Scalar& t) const;
};

} // namespace stickysim
