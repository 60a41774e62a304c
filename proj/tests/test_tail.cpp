#include "stickysim/tail.hpp"

#include "stickysim/errors.hpp"
#include "stickysim/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace stickysim;

namespace {
Scalar rat(long long n, long long d = 1) { return Scalar::rational(n, d); }

const TailParams kReference{rat(1, 4), rat(1, 2), rat(3, 4)};

// Oracle: direct partial sum of the defining series for the tail barycenter.
Scalar series_barycenter(const TailParams& p, int k, const Scalar& t, int terms) {
    Scalar mass = Scalar::zero(p.backend());
    Scalar weighted = Scalar::zero(p.backend());
    for (int j = k; j < k + terms; ++j) {
        Scalar m = pow_int(p.alpha, j);
        mass += m;
        weighted += m * free_position(p, j, t);
    }
    return weighted / mass;
}

// Oracle: bisection for the unique root of b_k(t) - x_{k-1}(t), bracketing
// by doubling. Returns the final exact bracket.
std::pair<Scalar, Scalar> bisect_meeting_time(const TailParams& p, int k, int iterations) {
    auto f = [&](const Scalar& t) { return barycenter_tail(p, k, t) - free_position(p, k - 1, t); };
    Scalar lo = Scalar::zero(p.backend());
    Scalar hi = Scalar::one(p.backend());
    while (f(hi).sign() < 0) hi *= 2;
    for (int i = 0; i < iterations; ++i) {
        Scalar mid = (lo + hi) / 2;
        if (f(mid).sign() < 0)
            lo = mid;
        else
            hi = mid;
    }
    return {lo, hi};
}

TailParams random_valid_params(Rng& rng) {
    while (true) {
        Scalar beta = rat(rng.int_in(1, 38), 40);
        Scalar gamma = rat(rng.int_in(2, 39), 40);
        if (!(beta < gamma)) continue;
        Scalar bound = 1 / (1 + beta + gamma);
        Scalar alpha = bound * rat(rng.int_in(1, 19), 20);
        TailParams p{alpha, beta, gamma};
        if (p.valid()) return p;
    }
}
} // namespace

TEST_CASE("tail barycenter closed form") {
    SUBCASE("k=1 at t=0 equals 3/7") {
        Scalar b = barycenter_tail(kReference, 1, rat(0));
        CHECK(b == rat(3, 7));
        // partial-sum oracle with geometric tail bound
        Scalar series = series_barycenter(kReference, 1, rat(0), 30);
        CHECK((b - series).abs() < pow_int(rat(1, 2), 50));
    }
    SUBCASE("k=1 at t=13/7 meets the level-0 formula position 1") {
        CHECK(barycenter_tail(kReference, 1, rat(13, 7)) == rat(1));
        CHECK(free_position(kReference, 0, rat(13, 7)) == rat(1));
    }
    SUBCASE("t=0 value matches the series for random parameters") {
        Rng rng(5);
        for (int trial = 0; trial < 100; ++trial) {
            TailParams p = random_valid_params(rng);
            int k = static_cast<int>(rng.int_in(1, 6));
            Scalar t = rat(rng.int_in(0, 8), 4);
            Scalar closed = barycenter_tail(p, k, t);
            int terms = 60;
            Scalar series = series_barycenter(p, k, t, terms);
            // |closed - series| is controlled by the mass ratio of the cut tail
            Scalar tail_bound = pow_int(p.alpha, terms) * (t + 1) * 100;
            CHECK((closed - series).abs() <= tail_bound);
        }
    }
    SUBCASE("parameters outside (0,1) are rejected") {
        CHECK_THROWS_AS(barycenter_tail(TailParams{rat(3, 2), rat(1, 2), rat(3, 4)}, 1, rat(0)),
                        InputError);
    }
}

TEST_CASE("meeting-time formula vs bisection oracle") {
    SUBCASE("reference parameters, exact rational agreement") {
        CHECK(collision_time_tk(kReference, 1) == rat(13, 7));
        CHECK(collision_time_tk(kReference, 2) == rat(26, 21));
        CHECK(collision_time_tk(kReference, 3) == rat(52, 63));
        for (int k = 1; k <= 10; ++k) {
            Scalar t = collision_time_tk(kReference, k);
            // exact substitution into the defining equation
            CHECK(barycenter_tail(kReference, k, t) == free_position(kReference, k - 1, t));
            auto [lo, hi] = bisect_meeting_time(kReference, k, 80);
            CHECK(lo <= t);
            CHECK(t <= hi);
        }
    }
    SUBCASE("float backend agrees to 1e-12 relative") {
        TailParams p{Scalar::real(0.25), Scalar::real(0.5), Scalar::real(0.75)};
        for (int k = 1; k <= 10; ++k) {
            double t = collision_time_tk(p, k).dbl();
            auto [lo, hi] = bisect_meeting_time(p, k, 60);
            double mid = (lo.dbl() + hi.dbl()) / 2;
            CHECK(std::abs(t - mid) <= 1e-12 * std::max(1.0, std::abs(t)));
        }
    }
    SUBCASE("sequence strictly decreasing to zero for beta < gamma") {
        Scalar prev = collision_time_tk(kReference, 1);
        for (int k = 2; k <= 12; ++k) {
            Scalar next = collision_time_tk(kReference, k);
            CHECK(next < prev);
            prev = next;
        }
        CHECK(prev < rat(1, 10));
    }
}

TEST_CASE("overtake inequality (lemma1)") {
    SUBCASE("reference parameters, k=2: 0.8408 > 0.8095") {
        CHECK(lemma1_check(kReference, 2));
        Scalar t1 = collision_time_tk(kReference, 2);
        CHECK(free_position(kReference, 3, t1).to_double() == doctest::Approx(0.840774));
        CHECK(free_position(kReference, 1, t1).to_double() == doctest::Approx(0.809524));
    }
    SUBCASE("invalid alpha = 3/5 fails") {
        CHECK_FALSE(lemma1_check(TailParams{rat(3, 5), rat(1, 2), rat(3, 4)}, 2));
    }
    SUBCASE("reference sweep k=2..12") {
        for (int k = 2; k <= 12; ++k) CHECK(lemma1_check(kReference, k));
    }
    SUBCASE("valid random parameters always pass; failures violate the alpha bound") {
        Rng rng(17);
        for (int trial = 0; trial < 500; ++trial) {
            TailParams p = random_valid_params(rng);
            for (int k = 2; k <= 12; ++k) CHECK(lemma1_check(p, k));
        }
        // arbitrary triples: any observed failure must break the alpha bound
        for (int trial = 0; trial < 300; ++trial) {
            Scalar beta = rat(rng.int_in(1, 38), 40);
            Scalar gamma = rat(rng.int_in(2, 39), 40);
            if (!(beta < gamma)) continue;
            Scalar alpha = rat(rng.int_in(1, 39), 40);
            TailParams p{alpha, beta, gamma};
            for (int k = 2; k <= 6; ++k)
                if (!lemma1_check(p, k)) CHECK_FALSE(alpha * (1 + beta + gamma) < 1);
        }
    }
    SUBCASE("k must exceed 1") { CHECK_THROWS(lemma1_check(kReference, 1)); }
}

TEST_CASE("certified tau strictly between consecutive meeting times") {
    SUBCASE("certificate property for k=2..10") {
        for (int k = 2; k <= 10; ++k) {
            Scalar tau = select_tau(kReference, k);
            CHECK(tau > collision_time_tk(kReference, k + 1));
            CHECK(tau < collision_time_tk(kReference, k));
            CHECK(free_position(kReference, k + 1, tau) > barycenter_tail(kReference, k, tau));
        }
    }
    SUBCASE("deterministic across calls") {
        CHECK(select_tau(kReference, 2) == select_tau(kReference, 2));
    }
    SUBCASE("k=2 lies in (52/63, 26/21)") {
        Scalar tau = select_tau(kReference, 2);
        CHECK(tau > rat(52, 63));
        CHECK(tau < rat(26, 21));
    }
}

TEST_CASE("subset barycenter comparison (lemma2)") {
    const int tail_cutoff = 10;
    const std::uint32_t full = (std::uint32_t{1} << (tail_cutoff + 1)) - 1;
    SUBCASE("all 1023 proper subsets containing k pass at k=2") {
        Scalar tau = select_tau(kReference, 2);
        int passed = 0;
        for (std::uint32_t mask = 1; mask < full; mask += 2)
            if (lemma2_check(kReference, 2, tau, mask, tail_cutoff)) ++passed;
        CHECK(passed == 1023);
    }
    SUBCASE("singleton {k} has the smallest barycenter") {
        Scalar tau = select_tau(kReference, 3);
        CHECK(lemma2_check(kReference, 3, tau, 1u, tail_cutoff));
        CHECK(free_position(kReference, 3, tau) < barycenter_tail(kReference, 3, tau));
    }
    SUBCASE("malformed subsets are rejected") {
        Scalar tau = select_tau(kReference, 2);
        CHECK_THROWS_AS(lemma2_check(kReference, 2, tau, full, tail_cutoff),
                        std::invalid_argument); // full set
        CHECK_THROWS_AS(lemma2_check(kReference, 2, tau, 2u, tail_cutoff),
                        std::invalid_argument); // k missing
    }
}

TEST_CASE("parameter validation names the violated bound") {
    TailParams bad{rat(3, 5), rat(1, 2), rat(3, 4)};
    CHECK_FALSE(bad.valid());
    CHECK_THROWS_WITH_AS(bad.require_valid(),
                         doctest::Contains("alpha < 1/(1+beta+gamma)"), InputError);
    TailParams swapped{rat(1, 4), rat(3, 4), rat(1, 2)};
    CHECK_THROWS_AS(swapped.require_valid(), InputError);
}
