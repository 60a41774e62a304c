#pragma once

#include "stickysim/events.hpp"

#include <vector>

namespace stickysim {

/// Maximal coincidence structure of two paths: closed intervals (instants
/// have start == end), disjoint, sorted by start.
struct CoincidencePiece {
    Scalar start;
    Scalar end;
    bool is_instant() const { return start == end; }
};
std::vector<CoincidencePiece> pair_coincidence(const Trajectory& traj, int i, int j,
                                               const Scalar& tol);

/// A pair that touches at first_contact but is separated at some later time
/// within the horizon violates the sticky property.
struct StickyViolation {
    int i;
    int j;
    Scalar first_contact;
    Scalar separation;
};
std::vector<StickyViolation> check_sticky(const Trajectory& traj, const Scalar& tol);

/// Residual of the weak-solution identity x_i(t) = x_i(0) + integral of the
/// cluster-barycentric velocity V_i. V_i is reconstructed from interval
/// coincidences (isolated touch instants have measure zero and are
/// ignored). The maximum is attained at a breakpoint, so only breakpoints
/// are evaluated.
struct WeakReport {
    Scalar max_residual2; // squared, exact in rational mode
    int worst_index = -1;
    Scalar worst_time;
    double max_residual() const;
    bool pass(const Scalar& tol) const { return max_residual2 <= tol * tol; }
};
WeakReport check_weak(const Trajectory& traj, const Scalar& tol);

/// Piecewise-constant kinetic energy of the trajectory (right-continuous,
/// consecutive equal values coalesced).
EnergyProfile energy_profile(const Trajectory& traj);

/// Non-increasing check; float mode allows increases up to 1e-12 relative
/// (rounding of re-summed cluster energies), rational mode is exact.
bool is_energy_admissible(const EnergyProfile& profile);

/// Sum of m_i m_j over unordered pairs that touch and later separate.
Scalar nonstickiness_phi(const Trajectory& traj, const std::vector<Scalar>& masses,
                         const Scalar& tol);

/// Exponentially discounted energy integral of e^{-t/eps} E(t) dt over
/// [0, inf), in closed form. Float result regardless of profile backend.
Scalar j_epsilon(const EnergyProfile& profile, const Scalar& eps);

struct Moments {
    Scalar mass;
    VecN momentum;
    Scalar energy;
};
/// Moments of the empirical measure sum m_i delta_{x_i(t)} carried by the
/// trajectory at time t in [0, horizon].
Moments eulerian_moments(const Trajectory& traj, const Scalar& t);

} // namespace stickysim
