#pragma once

#include "splab/sbb.hpp"

#include "json.hpp"

#include <string>

namespace splab {

/// Identifies the run a trace belongs to.
struct TraceKey {
    std::string instance;
    std::string family;
};

/// One JSON record per run. Non-finite numbers and a missing incumbent are
/// written as null. wall_time is the KPI clock in the units of time_mode;
/// wall_seconds is only written in wall mode so pseudo-time records stay
/// byte-stable.
nlohmann::json trace_to_json(const TraceKey& key, const SolveTrace& trace);

/// Inverse of trace_to_json; throws std::invalid_argument on malformed input.
SolveTrace trace_from_json(const nlohmann::json& j, TraceKey* key = nullptr);

} // namespace splab
