#pragma once

#include "stickysim/scenario.hpp"
#include "stickysim/events.hpp"
#include "stickysim/tail.hpp"

#include <cstdint>
#include <vector>

namespace stickysim {

/// Two unit-mass particles in the plane aimed at a right-angle crossing:
/// positions (1,0), (0,1), velocities (0,1), (1,0). With perturb != 0 the
/// first particle starts at (1, perturb) and the crossing is missed.
struct Example2Options {
    Scalar perturb = Scalar::rational(0);
    Scalar horizon = Scalar::rational(3);
};
Scenario example2_scenario(const Example2Options& opts = {});

/// Candidate trajectory for the same data that merges at t=1 and splits
/// again at t=T >= 1, each index resuming its own initial velocity. Weak
/// but neither sticky nor (for T within the horizon) energy admissible.
Trajectory example2_resplit_trajectory(const Scalar& T, const Scalar& horizon);

/// Backward binary-collision cascade: masses 2^-i pair up at times 2^-i
/// until a single stationary unit-mass compound sits at the origin. The
/// innermost infinite tail is truncated into one particle of mass 2^-N
/// riding the deepest compound line.
struct Example3Spec {
    int levels = 0;
    std::uint64_t seed = 0;
    Scalar horizon;
    std::vector<Scalar> times;              // t_i = 2^-i, i = 1..N
    std::vector<VecN> points;               // interaction point of level i
    std::vector<VecN> split_velocities;     // v_i (pre-collision particle)
    std::vector<VecN> compound_velocities;  // v_i^* (compound absorbed at t_i)
};
struct Example3Result {
    Scenario scenario; // particles: level 1..N, then the tail stand-in
    Example3Spec spec;
};
Example3Result example3_scenario(int levels, std::uint64_t seed, const Scalar& horizon);

/// Non-intersection property of the generated line family: no line of level
/// i meets a line of an earlier level at a common time in [0, horizon],
/// apart from the contacts the cascade itself dictates (each level's merge
/// product starts exactly where that level's pair collides, so it touches
/// both of those lines there; the two lines of one level likewise meet at
/// their own interaction time).
bool nip_check(const Example3Spec& spec, const Scalar& horizon);

/// Bullet/target configuration: black particles on the x1 axis per
/// TailParams, plus one white bullet per level aimed to cross the axis at
/// its target point exactly at time tau_k.
enum class Targeting {
    InfiniteTail,  // aim at the closed-form infinite-tail barycenter
    TruncatedTail, // aim at the truncated barycenter, exact at finite N
};
enum class WhiteVariant {
    Vertical, // bullets fall straight down
    Slanted,  // bullets drift right with slope -1/k, limits into the axis flow
};
struct Example4Spec {
    TailParams params;
    int levels = 0;
    Targeting targeting = Targeting::TruncatedTail;
    WhiteVariant variant = WhiteVariant::Vertical;
    std::vector<Scalar> times;   // t_0 .. t_N
    std::vector<Scalar> taus;    // tau_1 .. tau_N
    std::vector<Scalar> targets; // aimed x1 coordinate per white k
    std::vector<int> black_indices;
    std::vector<int> white_indices;
};
struct Example4Result {
    Scenario scenario; // blacks 0..N-1, whites N..2N-1
    Example4Spec spec;
};
/// horizon <= 0 selects the default t_0 (the outermost formula time).
Example4Result example4_scenario(const TailParams& params, int levels, Targeting targeting,
                                 WhiteVariant variant, const Scalar& horizon);

/// White levels that share an event cluster with black-descended matter.
std::vector<int> white_hits(const EventLog& log, const Example4Spec& spec);
/// Same, restricted to clusters that actually stuck.
std::vector<int> white_stick_hits(const EventLog& log, const Example4Spec& spec);

} // namespace stickysim
