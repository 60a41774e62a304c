#pragma once

#include "stickysim/particle.hpp"

#include <string>
#include <vector>

namespace stickysim {

inline constexpr int kDefaultEventCap = 10000;

/// Initial data plus run parameters. Horizon is always explicit; the
/// tolerance is the position-coincidence tolerance (0 in rational mode).
struct Scenario {
    int dimension = 2;
    Backend backend = Backend::Rational;
    Scalar tolerance = Scalar::rational(0);
    Scalar horizon = Scalar::rational(1);
    int event_cap = kDefaultEventCap;
    std::vector<Particle> particles;
    /// Optional generator provenance, as raw JSON text (empty = none).
    std::string provenance_json;
};

/// Throws InputError on any violated invariant (backend consistency,
/// positive masses, distinct initial positions, positive horizon, ...).
void validate_scenario(const Scenario& s);

/// Same initial data under the other numeric backend. Rational -> float
/// rounds to double; float -> rational is exact. The tolerance is replaced
/// by `new_tol`.
Scenario convert_backend(const Scenario& s, Backend target, const Scalar& new_tol);

} // namespace stickysim
