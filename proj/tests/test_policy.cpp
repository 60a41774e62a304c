#include "stickysim/policy_search.hpp"

#include "stickysim/checks.hpp"
#include "stickysim/generators.hpp"

#include <doctest.h>

using namespace stickysim;

namespace {
Scalar rat(long long n, long long d = 1) { return Scalar::rational(n, d); }
} // namespace

TEST_CASE("crossing pair: sticking minimizes for every eps") {
    Scenario s = example2_scenario();
    for (double eps : {0.1, 0.3, 1.0, 3.0, 10.0}) {
        auto result = policy_search(s, Scalar::real(eps), s.horizon, 50);
        REQUIRE(result.policy.decisions.size() == 1);
        CHECK(result.policy.decisions[0] == Decision::Stick);
        // two-leaf comparison: the reported value equals the sticky branch
        auto replay = evolve_with_policy(s, result.policy);
        CHECK(result.j_value.dbl() ==
              j_epsilon(replay.energy, Scalar::real(eps)).dbl());
    }
}

TEST_CASE("single particle has an empty policy") {
    Scenario s;
    s.dimension = 1;
    s.horizon = rat(2);
    s.particles = {Particle{rat(1), VecN{rat(0)}, VecN{rat(1)}, {0}}};
    auto result = policy_search(s, rat(1), s.horizon, 10);
    CHECK(result.policy.decisions.empty());
}

TEST_CASE("bullet system: minimizer sticks all blacks and exactly one white") {
    const TailParams params{rat(1, 4), rat(1, 2), rat(3, 4)};
    auto gen = example4_scenario(params, 3, Targeting::TruncatedTail, WhiteVariant::Vertical,
                                 rat(0));
    int previous = 0;
    for (double eps : {10.0, 1.0, 0.1, 0.01}) {
        auto result = policy_search(gen.scenario, Scalar::real(eps), gen.scenario.horizon, 200);
        auto replay = evolve_with_policy(gen.scenario, result.policy);
        auto sticks = white_stick_hits(replay.events, gen.spec);
        REQUIRE(sticks.size() == 1);
        // deeper (larger) white level as eps decreases
        CHECK(sticks[0] >= previous);
        previous = sticks[0];
        for (const auto& event : replay.events)
            for (const auto& cluster : event.clusters) {
                bool pure_black = true;
                for (const auto& member_set : cluster.members)
                    for (int m : member_set)
                        if (m >= gen.spec.levels) pure_black = false;
                if (pure_black) CHECK(cluster.stuck);
            }
    }
    CHECK(previous == 3); // smallest eps sticks the deepest available bullet
}
