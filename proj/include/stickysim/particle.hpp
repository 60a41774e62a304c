#pragma once

#include "stickysim/scalar.hpp"
#include "stickysim/vec.hpp"

#include <vector>

namespace stickysim {

/// A point mass, possibly compound. `members` is the sorted set of original
/// scenario indices it comprises; its mass is the sum of their masses.
struct Particle {
    Scalar mass;
    VecN position;
    VecN velocity;
    std::vector<int> members;
};

/// Particle set at a common time. Normal form: no two live particles
/// coincide in position.
struct SystemState {
    Scalar time;
    int dimension = 0;
    std::vector<Particle> particles;
};

/// True iff |p - q|^2 <= tol^2. In the rational backend tol must be 0 and the
/// test is exact equality.
bool coincide(const VecN& p, const VecN& q, const Scalar& tol);

/// Mass-weighted mean position; throws on an empty list.
VecN barycenter(const std::vector<Particle>& particles);

VecN momentum(const std::vector<Particle>& particles);
VecN momentum(const SystemState& state);

/// Kinetic energy (1/2) sum m_i |v_i|^2, via squared norms only.
Scalar energy(const std::vector<Particle>& particles);
Scalar energy(const SystemState& state);

} // namespace stickysim
