#pragma once

#include "stickysim/scalar.hpp"

#include <cstdint>

namespace stickysim {

/// Parameters of the geometric particle family on the axis: masses alpha^k,
/// initial positions beta^k, velocities 1 - gamma^k. Valid parameters
/// satisfy 0 < beta < gamma < 1 and 0 < alpha < 1/(1+beta+gamma); the
/// predicate checkers accept invalid triples, the scenario generators do
/// not.
struct TailParams {
    Scalar alpha;
    Scalar beta;
    Scalar gamma;

    Backend backend() const { return alpha.backend(); }
    bool in_open_unit_interval() const;
    /// 0 < beta < gamma < 1 and the mass-decay bound on alpha.
    bool valid() const;
    void require_valid() const; // throws InputError naming the violated bound
};

/// Free position of the k-th family member: x_k(t) = beta^k + t(1-gamma^k).
Scalar free_position(const TailParams& p, int k, const Scalar& t);
Scalar free_velocity(const TailParams& p, int k);

/// Barycenter of the infinite family {x_j : j >= k} in closed form:
/// (1-alpha) [ beta^k/(1-alpha beta) + t/(1-alpha) - t gamma^k/(1-alpha gamma) ].
Scalar barycenter_tail(const TailParams& p, int k, const Scalar& t);

/// Barycenter of the finite slice {x_j : k <= j <= last}, by direct summation.
Scalar barycenter_tail_truncated(const TailParams& p, int k, int last, const Scalar& t);

/// Time t_{k-1} at which the infinite-tail barycenter b_k meets x_{k-1}:
/// [(1-beta)/(1-alpha beta)] [(1-alpha gamma)/(1-gamma)] (beta/gamma)^{k-1}.
Scalar collision_time_tk(const TailParams& p, int k);

/// Strict inequality x_{k+1}(t_{k-1}) > x_{k-1}(t_{k-1}); also asserts the
/// identity x_{k-1}(t_{k-1}) = b_k(t_{k-1}) as a formula self-check.
bool lemma1_check(const TailParams& p, int k);

/// A certified time tau_k strictly inside (t_k, t_{k-1}) with
/// x_{k+1}(tau_k) > b_k(tau_k), found by dyadic steps from the upper end and
/// re-verified in the calling backend. Deterministic for fixed parameters.
Scalar select_tau(const TailParams& p, int k);

/// Proper-subset barycenter comparison at tau: with indices restricted to
/// {k, ..., k+tail_cutoff}, every subset containing k (bit j of subset_mask
/// <=> index k+j) other than the full set must satisfy b'_k(tau) < b_k(tau).
bool lemma2_check(const TailParams& p, int k, const Scalar& tau, std::uint32_t subset_mask,
                  int tail_cutoff);

} // namespace stickysim
