#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "robta/dbm.hpp"
#include "robta/model.hpp"

namespace robta {

/// A region (ι, β₀⊎β₁⊎…⊎β_m) of [0,M]^X. β₀ holds the clocks with an integral
/// value (possibly none); β₁..β_m are non-empty and ordered by increasing
/// fractional part. Blocks are kept sorted so equal regions compare equal.
class Region {
 public:
  Region() : blocks_(1) {}
  Region(std::vector<long> iota, std::vector<std::vector<ClockId>> blocks);

  const std::vector<long>& iota() const { return iota_; }
  const std::vector<std::vector<ClockId>>& blocks() const { return blocks_; }
  const std::vector<ClockId>& block(std::size_t i) const { return blocks_[i]; }
  std::size_t clock_count() const { return iota_.size(); }
  /// Number of non-integral blocks m; the region has m+1 corners.
  std::size_t dimension() const { return blocks_.size() - 1; }
  bool punctual() const { return !blocks_[0].empty(); }
  /// Block index of clock x (0 for integral clocks).
  std::size_t block_of(ClockId x) const;

  bool contains(const Valuation& v) const;
  /// Corners c_0..c_m ordered by Manhattan norm.
  std::vector<Valuation> corners() const;
  /// Σ λ_i c_i.
  Valuation combine(const std::vector<Rational>& weights) const;
  /// The valuation with every corner weight equal to 1/(m+1).
  Valuation representative() const;
  Dbm to_dbm() const;

  /// Guard-syntax description, e.g. "x==0 && 0<y<1".
  std::string to_string(const ClockSet& clocks) const;

  auto operator<=>(const Region&) const = default;
  bool operator==(const Region&) const = default;

 private:
  std::vector<long> iota_;
  std::vector<std::vector<ClockId>> blocks_;
};

Region region_of(const Valuation& v);

/// λ_i = f_{m-i+1} - f_{m-i} where f_j is the fractional part of block j
/// (f_0 = 0, f_{m+1} = 1). All weights are positive and sum to one.
std::vector<Rational> corner_weights(const Valuation& v);
std::vector<Rational> corner_weights(const Valuation& v, const Region& r);

std::optional<Region> immediate_time_successor(const Region& r, int bound);
/// r itself followed by its immediate-successor chain up to the bound wall.
std::vector<Region> time_successors(const Region& r, int bound);
bool is_time_successor(const Region& r, const Region& r2, int bound);

/// Some d ≥ 0 with v+d ∈ target: the exact crossing time when target is
/// punctual, otherwise the midpoint of the interval spent in target.
std::optional<Rational> delay_into(const Valuation& v, const Region& target, int bound);

Region region_reset(const Region& r, const std::vector<ClockId>& resets);
bool region_satisfies(const Region& r, const Guard& g);

/// Every region of [0,bound]^X, in a fixed order.
std::vector<Region> all_regions(std::size_t clocks, int bound);
/// Regions r ⊆ g ∩ [0,bound]^X.
std::vector<Region> regions_in(const Guard& g, std::size_t clocks, int bound);
/// The region whose zone is exactly g; nullopt if g is not a single region.
std::optional<Region> region_from_guard(const Guard& g, std::size_t clocks, int bound);

struct RegionState {
  LocationId location = 0;
  Region region;

  auto operator<=>(const RegionState&) const = default;
  bool operator==(const RegionState&) const = default;
};

std::string to_string(const RegionState& s, const TimedAutomaton& a);

/// A delay to a time-successor followed by an edge whose guard holds there.
struct AtomicStep {
  RegionState source;
  Region delay_target;
  EdgeId edge = 0;
  RegionState target;

  bool operator==(const AtomicStep&) const = default;
};

/// Well-formed region path: a delay, an edge, a delay, ..., an edge.
using RegionPath = std::vector<AtomicStep>;

/// All atomic steps leaving s, ordered by (delay target chain position, edge id).
std::vector<AtomicStep> atomic_steps(const TimedAutomaton& a, const RegionState& s);
/// Empty string if well formed, otherwise a description of the first defect.
std::string check_well_formed(const TimedAutomaton& a, const RegionPath& path);

/// Initial region states: the zero valuation's region, or every region inside
/// the initial constraint when one is given.
std::vector<RegionState> initial_states(const TimedAutomaton& a);

struct RegionGraph {
  enum class Kind { Delay, Edge };
  struct Transition {
    std::size_t from, to;
    Kind kind;
    EdgeId edge;  // meaningful for Kind::Edge
  };
  std::vector<RegionState> states;
  std::map<RegionState, std::size_t> index;
  std::vector<Transition> transitions;
  std::vector<std::size_t> initial;
};

/// Reachable part of the region automaton. Delay transitions go to every
/// time-successor including the state itself.
RegionGraph build_region_automaton(const TimedAutomaton& a);

}  // namespace robta
