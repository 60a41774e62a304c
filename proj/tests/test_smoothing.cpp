#include "stickysim/smoothing.hpp"

#include "stickysim/checks.hpp"
#include "stickysim/engine.hpp"
#include "stickysim/errors.hpp"
#include "stickysim/generators.hpp"
#include "stickysim/rng.hpp"

#include <doctest.h>

using namespace stickysim;

namespace {
Scalar rat(long long n, long long d = 1) { return Scalar::rational(n, d); }
VecN v2(Scalar a, Scalar b) { return VecN{std::move(a), std::move(b)}; }
const Scalar kZero = rat(0);

BallCloud make_cloud(VecN center, Scalar s, VecN base_velocity, Scalar mass) {
    BallCloud c;
    c.center = std::move(center);
    c.collapse_scale = s;
    c.radius = s * s;
    c.base_velocity = std::move(base_velocity);
    c.target_mass = std::move(mass);
    return c;
}
} // namespace

TEST_CASE("bump support and positivity") {
    BallCloud c = make_cloud(v2(rat(0), rat(0)), rat(1), v2(rat(0), rat(0)), rat(1));
    // moderate radius r = 1: values representable without underflow
    CHECK(smooth_bump(c, v2(rat(1), rat(0))).is_zero());   // on the boundary
    CHECK(smooth_bump(c, v2(rat(2), rat(2))).is_zero());   // outside
    CHECK(smooth_bump(c, v2(rat(0), rat(0))) > rat(0));    // center
    CHECK(smooth_bump(c, v2(rat(1, 2), rat(0))) > rat(0)); // interior
    CHECK(smooth_bump(c, v2(rat(1, 2), rat(0))) < smooth_bump(c, v2(rat(0), rat(0))));
}

TEST_CASE("collapse velocity field") {
    VecN center = v2(rat(2), rat(1));
    VecN base = v2(rat(1), rat(-1));
    Scalar s = rat(1, 4);
    CHECK(collapse_velocity(center, s, base, center) == base); // value at the center
    // v + (c-x)/s == v - (x-c)/s, checked at a boundary-distance point
    VecN x = center + v2(s * s, rat(0));
    CHECK(collapse_velocity(center, s, base, x) == base - (x - center) / s);
    CHECK_THROWS_AS(collapse_velocity(center, rat(0), base, x), InputError);
}

TEST_CASE("discretized cloud collapses in a single exact event") {
    Rng rng(31);
    for (int trial = 0; trial < 6; ++trial) {
        BallCloud cloud = make_cloud(
            v2(rat(rng.int_in(-4, 4)), rat(rng.int_in(-4, 4))),
            rat(1, 1 + rng.int_in(2, 8)),
            v2(rat(rng.int_in(-2, 2)), rat(rng.int_in(-2, 2))),
            rat(rng.int_in(1, 5)));
        auto particles = discretize_ball(cloud, 8, rng.next_u64());
        REQUIRE(particles.size() == 8);

        // exact normalization, exact symmetry of barycenter and momentum
        Scalar mass_sum = rat(0);
        VecN weighted = VecN::zero(2, Backend::Rational);
        VecN mom = VecN::zero(2, Backend::Rational);
        for (const auto& p : particles) {
            CHECK(p.mass > rat(0));
            CHECK((p.position - cloud.center).norm2() < cloud.radius * cloud.radius);
            mass_sum += p.mass;
            weighted += p.mass * p.position;
            mom += p.mass * p.velocity;
        }
        CHECK(mass_sum == cloud.target_mass);
        CHECK(weighted / mass_sum == cloud.center);
        CHECK(mom == cloud.target_mass * cloud.base_velocity);

        // one merge event at exactly t = s at center + s * base_velocity
        Scenario sc = cloud_scenario(cloud, cloud.collapse_scale * 2, 100);
        auto [traj, log] = evolve(sc);
        REQUIRE(log.size() == 1);
        CHECK(log[0].time == cloud.collapse_scale);
        REQUIRE(log[0].clusters.size() == 1);
        CHECK(log[0].clusters[0].merged_members().size() == 8);
        CHECK(log[0].clusters[0].post_velocity == cloud.base_velocity);
        CHECK(traj.position_at(0, cloud.collapse_scale) ==
              cloud.center + cloud.collapse_scale * cloud.base_velocity);
    }
}

TEST_CASE("cloud parameter validation") {
    BallCloud bad = make_cloud(v2(rat(0), rat(0)), rat(1, 4), v2(rat(0), rat(0)), rat(1));
    bad.radius = rat(1, 4); // not scale^2
    CHECK_THROWS_AS(discretize_ball(bad, 4, 1), InputError);
}

TEST_CASE("smoothed crossing pair reproduces the point dynamics exactly") {
    Scenario base = example2_scenario();
    SmoothingSchedule schedule;
    schedule.samples_per_cloud = 6;
    auto result = smooth_scenario(base, schedule, 3);
    REQUIRE(result.clouds.size() == 2);

    // disjoint balls
    Scalar d2 = (result.clouds[0].cloud.center - result.clouds[1].cloud.center).norm2();
    Scalar reach = result.clouds[0].cloud.radius + result.clouds[1].cloud.radius;
    CHECK(d2 > reach * reach);

    auto [traj, log] = evolve(result.scenario);
    REQUIRE(log.size() == 3); // two collapses, then the crossing
    CHECK(log[0].time == min(result.clouds[0].cloud.collapse_scale,
                             result.clouds[1].cloud.collapse_scale));
    CHECK(log[2].time == rat(1)); // the original meeting time, exactly
    CHECK(log[2].clusters[0].post_velocity == v2(rat(1, 2), rat(1, 2)));
    // every sample ends on the diagonal line through (1,1)
    CHECK(traj.position_at(0, rat(2)) == v2(rat(3, 2), rat(3, 2)));
    CHECK(traj.position_at(result.scenario.particles.size() > 6 ? 7 : 5, rat(2)) ==
          v2(rat(3, 2), rat(3, 2)));
}

TEST_CASE("smoothed bullet system keeps the point hit structure") {
    const TailParams params{rat(1, 4), rat(1, 2), rat(3, 4)};
    auto base = example4_scenario(params, 3, Targeting::TruncatedTail, WhiteVariant::Vertical,
                                  rat(0));
    SmoothingSchedule schedule;
    schedule.initial_scale = rat(1, 16);
    schedule.samples_per_cloud = 4;
    auto result = smooth_scenario(base.scenario, schedule, 11);
    auto [traj, log] = evolve(result.scenario);

    // collapse events first (one per cloud), then the original cascade
    std::size_t clouds = result.clouds.size();
    REQUIRE(log.size() > clouds);
    Scalar max_scale = result.clouds[0].cloud.collapse_scale;
    for (const auto& c : result.clouds) max_scale = max(max_scale, c.cloud.collapse_scale);
    for (std::size_t e = 0; e < clouds; ++e) CHECK(log[e].time <= max_scale);

    // map samples back to their source particles and recover the hit set
    std::vector<int> sample_owner(result.scenario.particles.size());
    for (const auto& c : result.clouds)
        for (int i = 0; i < c.sample_count; ++i) sample_owner[c.first_particle + i] =
            c.source_index;
    std::set<int> hit_whites;
    for (std::size_t e = clouds; e < log.size(); ++e)
        for (const auto& cluster : log[e].clusters) {
            bool has_black = false;
            std::set<int> whites;
            for (const auto& member_set : cluster.members)
                for (int m : member_set) {
                    int owner = sample_owner[m];
                    if (owner < 3) has_black = true;  // blacks are sources 0..2
                    if (owner >= 3) whites.insert(owner - 3 + 1);
                }
            if (has_black) hit_whites.insert(whites.begin(), whites.end());
        }
    CHECK(hit_whites == std::set<int>{3});
    // the deepest bullet's compound meets the black compound at exactly tau_3
    CHECK(log[clouds].time == base.spec.taus[2]);
}

TEST_CASE("smoothing fails loudly when no disjoint schedule exists") {
    Scenario base = example2_scenario();
    SmoothingSchedule schedule;
    // envelopes overlap at the initial scale, and the floor forbids halving
    schedule.initial_scale = rat(1);
    schedule.floor = rat(9, 10);
    CHECK_THROWS_AS(smooth_scenario(base, schedule, 1), BudgetExceeded);
}
