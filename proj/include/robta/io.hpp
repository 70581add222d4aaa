#pragma once

#include <json.hpp>

#include "robta/synthesis.hpp"

namespace robta {

using json = nlohmann::ordered_json;

json to_json(const Region& r, const ClockSet& clocks);
Region region_from_json(const json& j, std::size_t clocks);

json to_json(const RegionState& s, const TimedAutomaton& a);
RegionState state_from_json(const json& j, const TimedAutomaton& a);

json to_json(const RegionPath& p, const TimedAutomaton& a);
RegionPath path_from_json(const json& j, const TimedAutomaton& a);

json to_json(const LassoWitness& w, const TimedAutomaton& a);
/// Accepts either a bare witness object or a verdict carrying one.
LassoWitness witness_from_json(const json& j, const TimedAutomaton& a);

/// Stats carry wall-clock time only when `timing` is set, so that identical
/// inputs give identical bytes.
json to_json(const Verdict& v, const TimedAutomaton& a, bool timing = false);

const char* to_string(Verdict::Outcome o);

}  // namespace robta
