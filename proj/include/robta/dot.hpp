#pragma once

#include <optional>
#include <string>

#include "robta/orbit.hpp"
#include "robta/region.hpp"

namespace robta {

std::string automaton_dot(const TimedAutomaton& a);
/// Delay self-loops are omitted; delay edges are dashed.
std::string region_graph_dot(const RegionGraph& g, const TimedAutomaton& a);
/// One cluster per layer, corners as nodes.
std::string orbit_graph_dot(const OrbitGraph& g, const ClockSet& clocks);
/// Corners filled by SCC color; the classification goes into the label.
std::string fog_dot(const FoldedOrbitGraph& f, const ClockSet& clocks,
                    const std::optional<IterationClass>& cls = std::nullopt);

}  // namespace robta
