#pragma once

#include "stickysim/scenario.hpp"

#include <cstdint>
#include <vector>

namespace stickysim {

/// A point mass replaced by samples of a compactly supported bump on the
/// ball |x - center| < radius, with the radial collapse velocity field
/// base_velocity + (center - x)/s. With radius = s^2 every sample reaches
/// center + s * base_velocity exactly at t = s, so the cloud shrinks
/// homothetically onto the original particle's path.
struct BallCloud {
    VecN center;
    Scalar collapse_scale; // s
    Scalar radius;         // r = s^2, so the collapse time needs no square root
    Scalar amplitude = Scalar::rational(1);
    VecN base_velocity;
    Scalar target_mass;
    std::vector<VecN> sample_positions;
    std::vector<Scalar> sample_masses;
};

/// Bump value amplitude * exp(-1/(radius^2 - |x-center|^2)) inside the
/// ball, 0 outside. Transcendental, so evaluated in double precision and
/// returned in the cloud's backend.
Scalar smooth_bump(const BallCloud& cloud, const VecN& x);

/// base_velocity + (center - x)/s.
VecN collapse_velocity(const VecN& center, const Scalar& s, const VecN& base_velocity,
                       const VecN& x);

/// Fills the cloud with `samples` (rounded up to even) positions drawn in
/// antipodal pairs strictly inside the ball, with per-sample masses
/// proportional to the bump value and normalized to target_mass exactly.
/// Pair symmetry makes the sample barycenter equal the center and the
/// sample momentum equal target_mass * base_velocity, both exactly, so the
/// post-collapse compound continues the original particle's line.
/// Returns the samples as particles (member sets left empty).
std::vector<Particle> discretize_ball(BallCloud& cloud, int samples, std::uint64_t seed);

/// One discretized cloud as a runnable scenario.
Scenario cloud_scenario(const BallCloud& cloud, const Scalar& horizon, int event_cap);

struct SmoothingSchedule {
    Scalar initial_scale = Scalar::rational(1, 8); // s for the first particle
    Scalar decay = Scalar::rational(3, 4);         // s_k = initial_scale * decay^k
    Scalar floor = Scalar::rational(1, 1 << 30);   // give up below this scale
    int samples_per_cloud = 8;
};

struct SmoothedCloud {
    int source_index = 0;   // particle index in the base scenario
    BallCloud cloud;
    int first_particle = 0; // sample index range in the smoothed scenario
    int sample_count = 0;
};

struct SmoothResult {
    Scenario scenario;
    std::vector<SmoothedCloud> clouds;
};

/// Replaces every point mass of the base scenario by a ball cloud, halving
/// collapse scales until all moving ball envelopes stay pairwise disjoint
/// through the longer of the two collapse windows (verified exactly). After
/// the last collapse the system coincides with the base point system.
SmoothResult smooth_scenario(const Scenario& base, const SmoothingSchedule& schedule,
                             std::uint64_t seed);

} // namespace stickysim
