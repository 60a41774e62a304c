#include "stickysim/io.hpp"

#include "stickysim/checks.hpp"
#include "stickysim/engine.hpp"
#include "stickysim/errors.hpp"
#include "stickysim/generators.hpp"

#include <doctest.h>

#include <sstream>

using namespace stickysim;

namespace {
Scalar rat(long long n, long long d = 1) { return Scalar::rational(n, d); }
} // namespace

TEST_CASE("scalar serialization") {
    CHECK(io::scalar_to_json(rat(1, 2)) == "1/2");
    CHECK(io::scalar_to_json(rat(7)) == "7/1"); // canonical p/q, q > 0, reduced
    CHECK(io::scalar_to_json(rat(-2, 4)) == "-1/2");
    CHECK(io::scalar_to_json(Scalar::real(0.5)).get<double>() == 0.5);
    CHECK(io::scalar_from_json(io::json("3/4"), Backend::Rational) == rat(3, 4));
    CHECK(io::scalar_from_json(io::json(5), Backend::Rational) == rat(5));
    CHECK(io::scalar_from_json(io::json(0.25), Backend::Rational) == rat(1, 4));
    CHECK_THROWS_AS(io::scalar_from_json(io::json(nullptr), Backend::Rational), InputError);
}

TEST_CASE("scenario round trip is stable") {
    Scenario s = example2_scenario();
    s.provenance_json = R"({"generator":"example2"})";
    auto j = io::scenario_to_json(s);
    Scenario back = io::scenario_from_json(j);
    CHECK(io::canonical_dump(io::scenario_to_json(back)) == io::canonical_dump(j));
    CHECK(back.particles.size() == 2);
    CHECK(back.particles[0].position == s.particles[0].position);
    CHECK(back.backend == Backend::Rational);
}

TEST_CASE("scenario validation failures are input errors") {
    auto j = io::scenario_to_json(example2_scenario());
    SUBCASE("nonzero tolerance under the rational backend") {
        j["tolerance"] = "1/1000";
        CHECK_THROWS_AS(io::scenario_from_json(j), InputError);
    }
    SUBCASE("coincident initial positions") {
        j["particles"][1]["position"] = j["particles"][0]["position"];
        CHECK_THROWS_AS(io::scenario_from_json(j), InputError);
    }
    SUBCASE("missing fields") {
        j.erase("horizon");
        CHECK_THROWS_AS(io::scenario_from_json(j), InputError);
    }
    SUBCASE("wrong format tag") {
        j["format"] = "something-else";
        CHECK_THROWS_AS(io::scenario_from_json(j), InputError);
    }
}

TEST_CASE("event log round trip") {
    Scenario s = example2_scenario();
    auto [traj, log] = evolve(s);
    auto j = io::events_to_json(log, s.backend);
    EventLog back = io::events_from_json(j);
    CHECK(io::canonical_dump(io::events_to_json(back, s.backend)) == io::canonical_dump(j));
    REQUIRE(back.size() == 1);
    CHECK(back[0].time == rat(1));
    CHECK(back[0].clusters[0].post_velocity == log[0].clusters[0].post_velocity);
}

TEST_CASE("trajectory round trip and validation") {
    Trajectory traj = example2_resplit_trajectory(rat(2), rat(4));
    auto j = io::trajectory_to_json(traj);
    Trajectory back = io::trajectory_from_json(j);
    CHECK(io::canonical_dump(io::trajectory_to_json(back)) == io::canonical_dump(j));
    CHECK(back.position_at(0, rat(3)) == traj.position_at(0, rat(3)));

    // a discontinuous path must be rejected on load
    j["paths"][0][1]["position_start"] = io::vec_to_json(VecN{rat(9), rat(9)});
    CHECK_THROWS_AS(io::trajectory_from_json(j), InputError);
}

TEST_CASE("cascade spec sidecar round trip") {
    auto [scenario, spec] = example3_scenario(3, 9, rat(1));
    auto j = io::example3_spec_to_json(spec);
    Example3Spec back = io::example3_spec_from_json(j);
    CHECK(back.levels == 3);
    CHECK(back.seed == 9);
    CHECK(back.times == spec.times);
    CHECK(nip_check(back, scenario.horizon));
}

TEST_CASE("csv export") {
    Scenario s = example2_scenario();
    auto [traj, log] = evolve(s);
    std::ostringstream os;
    io::write_trajectory_csv(os, traj, rat(1));
    std::string text = os.str();
    CHECK(text.substr(0, 13) == "t,index,x1,x2");
    // rows at t = 0,1,2 and the horizon 3, for both indices
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 4 * 2);
    CHECK_THROWS_AS(io::write_trajectory_csv(os, traj, rat(0)), InputError);
}

TEST_CASE("svg export") {
    Scenario s = example2_scenario();
    auto [traj, log] = evolve(s);
    std::ostringstream os;
    io::write_trajectory_svg(os, traj, &log);
    std::string text = os.str();
    CHECK(text.find("<svg") != std::string::npos);
    CHECK(text.find("<polyline") != std::string::npos);
    CHECK(text.find("<circle") != std::string::npos); // the stick event marker

    // 1-d plots use the t-x plane
    Scenario line;
    line.dimension = 1;
    line.horizon = rat(2);
    line.particles = {Particle{rat(1), VecN{rat(0)}, VecN{rat(1)}, {0}}};
    auto run1 = evolve(line);
    std::ostringstream os1;
    io::write_trajectory_svg(os1, run1.trajectory, &run1.events);
    CHECK(os1.str().find("t - x plane") != std::string::npos);
}

TEST_CASE("content hash is stable and parameter-sensitive") {
    io::json a = {{"levels", 3}, {"seed", 7}};
    io::json b = {{"levels", 3}, {"seed", 7}};
    io::json c = {{"levels", 4}, {"seed", 7}};
    CHECK(io::content_hash(a) == io::content_hash(b));
    CHECK(io::content_hash(a) != io::content_hash(c));
    CHECK(io::content_hash(a).size() == 16);
}
