#pragma once

#include "stickysim/engine.hpp"

namespace stickysim {

struct PolicySearchResult {
    Policy policy;
    Scalar j_value; // float-backed
};

/// Exhaustive depth-first enumeration over stick/pass decision sequences
/// (the event sequence is re-derived after each decision). Returns a
/// minimizer of the discounted-energy integral; ties break toward the
/// lexicographically-first stick-preferring policy. Throws BudgetExceeded
/// if any branch exceeds `event_cap` events.
PolicySearchResult policy_search(const Scenario& scenario, const Scalar& eps,
                                 const Scalar& horizon, int event_cap);

} // namespace stickysim
