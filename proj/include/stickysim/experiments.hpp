#pragma once

#include "stickysim/tail.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace stickysim {

struct CaseResult {
    std::string name;
    bool pass = false;
    nlohmann::ordered_json details; // machine-checkable witness on failure
};

/// Structured experiment outcome. Serialization is byte-deterministic for
/// fixed (seed, backend, parameters); wall time is measured but kept out of
/// the JSON for that reason.
struct Report {
    std::string experiment;
    nlohmann::ordered_json parameters;
    std::string backend;
    std::vector<std::uint64_t> seeds;
    std::vector<CaseResult> cases;
    bool pass = true;
    double wall_ms = 0;

    nlohmann::ordered_json to_json() const;
    void add(CaseResult c);
};

/// Two sticky solutions from one initial datum, at finite truncation: the
/// cascade merges at exactly t = 2^-i while the free-flight candidate is
/// weak and admissible yet fails the sticky property on exactly the deepest
/// pair, with non-stickiness 4^-N.
Report run_example3_nonuniqueness(int levels, std::uint64_t seed);

/// Finite shadow of non-existence: with truncated-tail targeting the hit
/// set is exactly {N} (escaping to infinity as N grows); with the
/// infinite-tail data every bullet misses at finite truncation.
Report run_example4_nonexistence(const TailParams& params, int levels);
Report nonexistence_sweep(const TailParams& params, int levels_lo, int levels_hi);

/// Discounted-energy policy structure: for each eps the exhaustive search
/// minimizer sticks every black-black event and exactly one white, whose
/// level is non-increasing in eps.
Report run_jeps_sweep(const TailParams& params, int levels, const std::vector<Scalar>& eps_grid);

/// Randomized engine invariants (conservation, energy monotonicity,
/// sticky/weak checks, symmetry invariances, cross-backend agreement) over
/// `count` seeded scenarios in dimensions 1-3 and both backends.
Report run_property_suite(std::uint64_t seed, int count);

} // namespace stickysim
