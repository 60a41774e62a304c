#pragma once

#include "stickysim/events.hpp"
#include "stickysim/particle.hpp"
#include "stickysim/scenario.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace stickysim {

/// Ballistic first-meeting time of two particles, relative to their common
/// reference time. Computed as t* = -dx.dv/|dv|^2 followed by a coincidence
/// check of dx + t* dv; absence (parallel motion, t* <= 0, or residual
/// beyond tol) is a value, not an error.
std::optional<Scalar> pair_collision_time(const Particle& a, const Particle& b,
                                          const Scalar& tol);

/// The earliest upcoming collision at or before `horizon` (absolute time),
/// with every particle coinciding at that instant grouped into clusters by
/// transitive closure. Pairs already coincident at state.time are consumed
/// contacts and generate nothing.
struct NextEvent {
    Scalar time;                            // absolute
    std::vector<std::vector<int>> clusters; // indices into state.particles, size >= 2 each
};
std::optional<NextEvent> next_event(const SystemState& state, const Scalar& horizon,
                                    const Scalar& tol);

/// Momentum-conserving merge of coincident particles: total mass, member
/// union, mass-weighted velocity, common position. Throws on non-coincident
/// input.
Particle merge_cluster(const std::vector<Particle>& ps, const Scalar& tol);

/// Energy lost when the cluster sticks: sum m|v|^2/2 - |sum mv|^2/(2 sum m).
/// Nonnegative; zero iff all pre-velocities are equal.
Scalar cluster_energy_drop(const std::vector<Particle>& ps);

struct EvolveResult {
    Trajectory trajectory;
    EventLog events;
};

/// The unique sticky solution on [0, horizon]: advance to the next event,
/// merge every cluster, repeat. Throws BudgetExceeded past the event cap.
EvolveResult evolve(const Scenario& scenario);

struct PolicyEvolveResult {
    Trajectory trajectory;
    EventLog events;
    EnergyProfile energy;
};

/// Replay with per-cluster stick/pass control. A passed cluster is recorded
/// with velocities untouched and is not re-offered at the same instant.
/// Throws InputError if the policy length does not match the realized event
/// sequence.
PolicyEvolveResult evolve_with_policy(const Scenario& scenario, const Policy& policy);

/// Decision callback form: called with the running cluster ordinal; used by
/// the policy search and for injecting decisions in tests. A nullopt
/// decision aborts the replay (outcome.complete = false).
struct ProviderRunResult {
    Trajectory trajectory;
    EventLog events;
    int decisions_consumed = 0;
    bool complete = true;
};
ProviderRunResult evolve_with_provider(
    const Scenario& scenario,
    const std::function<std::optional<Decision>(int ordinal)>& provider);

/// Free-flight candidate for the same initial data: every index keeps its
/// initial velocity over the whole horizon.
Trajectory free_flight_trajectory(const Scenario& scenario);

} // namespace stickysim
