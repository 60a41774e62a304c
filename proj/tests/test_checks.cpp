#include "stickysim/checks.hpp"

#include "stickysim/engine.hpp"
#include "stickysim/errors.hpp"
#include "stickysim/generators.hpp"
#include "stickysim/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace stickysim;

namespace {
Scalar rat(long long n, long long d = 1) { return Scalar::rational(n, d); }
const Scalar kZero = rat(0);

// Independent oracle for the discounted-energy integral: composite Simpson
// over each constant piece plus the analytic exponential tail.
double jeps_quadrature(const EnergyProfile& profile, double eps) {
    double acc = 0;
    auto weight = [&](double t) { return std::exp(-t / eps); };
    for (std::size_t k = 0; k < profile.times.size(); ++k) {
        double a = profile.times[k].to_double();
        double b = k + 1 < profile.times.size() ? profile.times[k + 1].to_double()
                                                : a + 60.0 * eps;
        double piece = 0;
        const int steps = 4000;
        double h = (b - a) / steps;
        for (int i = 0; i < steps; ++i) {
            double lo = a + i * h;
            piece += h / 6.0 * (weight(lo) + 4.0 * weight(lo + h / 2) + weight(lo + h));
        }
        acc += profile.values[k].to_double() * piece;
    }
    return acc;
}
} // namespace

TEST_CASE("sticky and weak checks on the crossing pair") {
    Scenario s = example2_scenario();
    auto [traj, log] = evolve(s);
    CHECK(check_sticky(traj, kZero).empty());
    CHECK(check_weak(traj, kZero).max_residual2.is_zero());

    auto profile = energy_profile(traj);
    CHECK(profile.times == std::vector<Scalar>{rat(0), rat(1)});
    CHECK(profile.values == std::vector<Scalar>{rat(1), rat(1, 2)});
    CHECK(is_energy_admissible(profile));
}

TEST_CASE("resplit candidate is weak but neither sticky nor admissible") {
    SUBCASE("split at T=1") {
        Trajectory traj = example2_resplit_trajectory(rat(1), rat(3));
        auto violations = check_sticky(traj, kZero);
        REQUIRE(violations.size() == 1);
        CHECK(violations[0].i == 0);
        CHECK(violations[0].j == 1);
        CHECK(violations[0].first_contact == rat(1));
        CHECK(violations[0].separation == rat(1));
        CHECK(nonstickiness_phi(traj, traj.masses, kZero) == rat(1));

        auto profile = energy_profile(traj);
        CHECK(profile.values == std::vector<Scalar>{rat(1)}); // meets and leaves instantly
        CHECK(check_weak(traj, kZero).max_residual2.is_zero());
    }
    SUBCASE("split at T=2") {
        Trajectory traj = example2_resplit_trajectory(rat(2), rat(4));
        CHECK(check_weak(traj, kZero).max_residual2.is_zero());
        auto profile = energy_profile(traj);
        CHECK(profile.times == std::vector<Scalar>{rat(0), rat(1), rat(2)});
        CHECK(profile.values == std::vector<Scalar>{rat(1), rat(1, 2), rat(1)});
        CHECK_FALSE(is_energy_admissible(profile));
        auto violations = check_sticky(traj, kZero);
        REQUIRE(violations.size() == 1);
        CHECK(violations[0].first_contact == rat(1));
        CHECK(violations[0].separation == rat(2));
    }
}

TEST_CASE("pair coincidence structure merges touch intervals") {
    Trajectory traj = example2_resplit_trajectory(rat(2), rat(4));
    auto pieces = pair_coincidence(traj, 0, 1, kZero);
    REQUIRE(pieces.size() == 1);
    CHECK(pieces[0].start == rat(1));
    CHECK(pieces[0].end == rat(2));
}

TEST_CASE("free flight under the non-intersection property is weak with zero residual") {
    auto [scenario, spec] = example3_scenario(4, 21, rat(1));
    Trajectory free = free_flight_trajectory(scenario);
    CHECK(check_weak(free, kZero).max_residual2.is_zero());
    CHECK(is_energy_admissible(energy_profile(free)));
    auto violations = check_sticky(free, kZero);
    REQUIRE(violations.size() == 1); // only the deepest pair crosses
    CHECK(violations[0].i == 3);
    CHECK(violations[0].j == 4);
    CHECK(violations[0].first_contact == pow_int(rat(1, 2), 4));
    CHECK(nonstickiness_phi(free, free.masses, kZero) == pow_int(rat(1, 4), 4));
}

TEST_CASE("discounted-energy integral") {
    SUBCASE("constant unit energy integrates to eps at eps=1") {
        EnergyProfile constant{{rat(0)}, {rat(1)}};
        CHECK(j_epsilon(constant, rat(1)).dbl() == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("crossing-pair sticky profile at eps=1 equals 1 - 1/(2e)") {
        Scenario s = example2_scenario();
        auto [traj, log] = evolve(s);
        auto profile = energy_profile(traj);
        double expected = 1.0 - 1.0 / (2.0 * std::exp(1.0));
        double got = j_epsilon(profile, rat(1)).dbl();
        CHECK(got == doctest::Approx(expected).epsilon(1e-12));
        CHECK(got == doctest::Approx(jeps_quadrature(profile, 1.0)).epsilon(1e-9));
    }
    SUBCASE("sticking beats free flight for every eps in the grid") {
        Scenario s = example2_scenario();
        auto stick = energy_profile(evolve(s).trajectory);
        auto free = energy_profile(free_flight_trajectory(s));
        for (double eps : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0})
            CHECK(j_epsilon(stick, Scalar::real(eps)).dbl() <
                  j_epsilon(free, Scalar::real(eps)).dbl());
    }
    SUBCASE("closed form matches quadrature on random profiles") {
        Rng rng(99);
        for (int trial = 0; trial < 20; ++trial) {
            EnergyProfile profile;
            Scalar t = rat(0);
            Scalar e = rat(rng.int_in(1, 50), 7);
            for (int k = 0; k < 6; ++k) {
                profile.times.push_back(t);
                profile.values.push_back(e);
                t += rat(rng.int_in(1, 9), 4);
                e = rat(rng.int_in(0, 40), 11); // not necessarily monotone
            }
            for (double eps : {0.3, 1.0, 3.0}) {
                double closed = j_epsilon(profile, Scalar::real(eps)).dbl();
                double quad = jeps_quadrature(profile, eps);
                CHECK(std::abs(closed - quad) <= 1e-10 * std::max(1.0, std::abs(closed)));
            }
        }
    }
    SUBCASE("eps must be positive") {
        EnergyProfile constant{{rat(0)}, {rat(1)}};
        CHECK_THROWS_AS(j_epsilon(constant, rat(0)), InputError);
        CHECK_THROWS_AS(j_epsilon(constant, rat(-1)), InputError);
    }
}

TEST_CASE("eulerian moments") {
    Scenario s = example2_scenario();
    auto [traj, log] = evolve(s);
    auto profile = energy_profile(traj);
    auto total = eulerian_moments(traj, rat(0));
    CHECK(total.mass == rat(2));
    for (int k = 0; k <= 6; ++k) {
        Scalar t = rat(k, 2);
        auto m = eulerian_moments(traj, t);
        CHECK(m.mass == total.mass);
        CHECK(m.momentum == VecN{rat(1), rat(1)}); // constant across the event
        CHECK(m.energy == profile.value_at(t));
    }
    CHECK_THROWS_AS(eulerian_moments(traj, rat(4)), std::out_of_range);
    CHECK_THROWS_AS(eulerian_moments(traj, rat(-1)), std::out_of_range);
}

TEST_CASE("energy admissibility allows float rounding noise only") {
    EnergyProfile wiggle{{Scalar::real(0), Scalar::real(1)},
                         {Scalar::real(1.0), Scalar::real(1.0 + 1e-13)}};
    CHECK(is_energy_admissible(wiggle));
    EnergyProfile rise{{Scalar::real(0), Scalar::real(1)},
                       {Scalar::real(1.0), Scalar::real(1.0 + 1e-6)}};
    CHECK_FALSE(is_energy_admissible(rise));
    EnergyProfile exact_rise{{rat(0), rat(1)}, {rat(1), rat(1) + rat(1, 1000000000)}};
    CHECK_FALSE(is_energy_admissible(exact_rise));
}
