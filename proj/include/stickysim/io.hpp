#pragma once

#include "stickysim/events.hpp"
#include "stickysim/generators.hpp"
#include "stickysim/scenario.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>

namespace stickysim::io {

using json = nlohmann::ordered_json;

/// Rational scalars serialize as canonical "p/q" strings (q > 0, reduced);
/// floats as JSON numbers (shortest round-trip form).
json scalar_to_json(const Scalar& s);
Scalar scalar_from_json(const json& j, Backend backend);

json vec_to_json(const VecN& v);
VecN vec_from_json(const json& j, Backend backend, int dimension);

json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const json& j);

json events_to_json(const EventLog& log, Backend backend);
EventLog events_from_json(const json& j);

json trajectory_to_json(const Trajectory& t);
Trajectory trajectory_from_json(const json& j);

json example3_spec_to_json(const Example3Spec& spec);
Example3Spec example3_spec_from_json(const json& j);
json example4_spec_to_json(const Example4Spec& spec);

/// Deterministic text form (2-space indent, trailing newline).
std::string canonical_dump(const json& j);
/// FNV-1a 64-bit hash of the canonical dump, as 16 hex digits.
std::string content_hash(const json& j);

json load_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Rows t,index,x1..xn sampled every `step` from 0 to the horizon
/// (inclusive), decimal values.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const Scalar& step);

/// Minimal hand-emitted SVG: polyline per index in the x1-x2 plane (t-x for
/// one-dimensional data), dots at stick events.
void write_trajectory_svg(std::ostream& os, const Trajectory& traj, const EventLog* events);

} // namespace stickysim::io
