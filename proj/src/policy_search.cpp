#include "stickysim/policy_search.hpp"

#include "stickysim/checks.hpp"
#include "stickysim/errors.hpp"

#include <limits>

namespace stickysim {

namespace {

struct Search {
    const Scenario& scenario;
    const Scalar& eps;
    std::vector<Decision> prefix;
    Policy best_policy;
    double best_value = std::numeric_limits<double>::infinity();

    void dfs() {
        auto run = evolve_with_provider(scenario, [&](int ordinal) -> std::optional<Decision> {
            if (ordinal >= static_cast<int>(prefix.size())) return std::nullopt;
            return prefix[static_cast<std::size_t>(ordinal)];
        });
        if (!run.complete) {
            // Stick explored first so that ties keep the stick-preferring branch.
            prefix.push_back(Decision::Stick);
            dfs();
            prefix.back() = Decision::Pass;
            dfs();
            prefix.pop_back();
            return;
        }
        double value = j_epsilon(energy_profile(run.trajectory), eps).dbl();
        if (value < best_value) {
            best_value = value;
            best_policy.decisions = prefix;
        }
    }
};

} // namespace

PolicySearchResult policy_search(const Scenario& scenario, const Scalar& eps,
                                 const Scalar& horizon, int event_cap) {
    Scenario bounded = scenario;
    bounded.horizon = horizon;
    bounded.event_cap = event_cap;
    validate_scenario(bounded);

    Search search{bounded, eps, {}, {}, std::numeric_limits<double>::infinity()};
    search.dfs();
    return {std::move(search.best_policy), Scalar::real(search.best_value)};
}

} // namespace stickysim
