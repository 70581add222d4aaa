#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "robta/orbit.hpp"
#include "robta/region.hpp"
#include "robta/robust.hpp"
#include "robta/slice.hpp"

namespace robta {

struct SearchBudget {
  std::size_t max_states = 100000;  // robustly reachable region states
  std::size_t max_fogs = 200000;    // (region state, corner relation) pairs per anchor
};

struct SynthesisOptions {
  SearchBudget budget;
  unsigned threads = 1;
  std::optional<std::uint64_t> shuffle_seed;  // permutes exploration order; the verdict must not change
};

/// A winning lasso: prefix from an initial region state to the anchor, then a
/// robust cycle around the anchor whose k-th iterate has a cluster FOG.
struct LassoWitness {
  RegionState anchor;
  RegionPath prefix;
  RegionPath cycle;
  BoolMatrix fog;  // of one traversal of `cycle`
  std::size_t k = 1;
  CornerPartition partition;      // of the FOG of cycle^k
  std::vector<Rational> slice;    // weights of the certified slice
  Rational eta;                   // interior margin: every corner weight ≥ eta
  Rational delta0;                // certified perturbation bound
};

RegionPath repeat(const RegionPath& cycle, std::size_t k);

/// The interior zone N and the slice zone N ∩ slice used by the certificate.
Dbm certificate_interior(const LassoWitness& w);
Dbm certificate_slice_zone(const LassoWitness& w);

struct CertifiedBounds {
  Rational eta;
  std::vector<Rational> slice;
  Rational delta0;
};

/// Searches eta = 1/(4(m+1)·2^t) for a margin such that, for every
/// 0 < δ ≤ delta0: N ⊆ CPre_{π^k}(N), N∩S ⊆ CPre_{π^k}(N∩S), and the prefix
/// CPre of N is non-empty.
std::optional<CertifiedBounds> certify(const TimedAutomaton& a, const RegionState& anchor, const RegionPath& prefix,
                                       const RegionPath& cycle, std::size_t k, const CornerPartition& partition);

struct FogReport {
  BoolMatrix fog;
  IterationClass iteration;
  std::size_t cycle_length;
};

struct AnchorReport {
  RegionState anchor;
  std::vector<FogReport> fogs;
  std::size_t search_nodes = 0;
  bool budget_exceeded = false;
};

struct SearchStats {
  std::size_t regions = 0;       // robustly reachable region states
  std::size_t anchors = 0;
  std::size_t fogs = 0;          // distinct cycle FOGs over all anchors
  std::size_t search_nodes = 0;  // saturation nodes over all anchors
  double seconds = 0;
};

struct Verdict {
  enum class Outcome { Controllable, NotControllable, ResourceCap };
  Outcome outcome = Outcome::NotControllable;
  std::optional<LassoWitness> witness;
  std::vector<AnchorReport> anchors;
  SearchStats stats;
  bool initial_constraint = false;  // the verdict quantifies over an initial region set
  std::string note;

  bool controllable() const { return outcome == Outcome::Controllable; }
};

Verdict decide(const TimedAutomaton& a, const SynthesisOptions& options = {});

/// Re-derives every invariant of the witness; returns the failures.
std::vector<std::string> validate(const LassoWitness& w, const TimedAutomaton& a);

/// Robustly reachable region states from the initial ones, with the BFS
/// prefix leading to each.
struct RobustReach {
  std::vector<RegionState> states;
  std::vector<RegionPath> prefixes;
  bool budget_exceeded = false;
};
RobustReach robust_reachable(const TimedAutomaton& a, std::size_t max_states);

/// Atomic steps leaving s that are robust.
std::vector<AtomicStep> robust_steps(const TimedAutomaton& a, const RegionState& s);

/// Cycle FOGs around one anchor by saturation over (state, relation) pairs.
struct CycleSearch {
  std::vector<std::pair<BoolMatrix, RegionPath>> cycles;  // one shortest cycle per distinct FOG
  std::size_t nodes = 0;
  bool budget_exceeded = false;
};
CycleSearch search_cycles(const TimedAutomaton& a, const RegionState& anchor, std::size_t max_nodes,
                          std::optional<std::uint64_t> shuffle_seed = std::nullopt);

/// The first region cycle from `anchor` whose steps visit `locations` in
/// order (locations[0] is the anchor's) and return to the anchor, in the
/// order of atomic_steps. Robust steps only when `robust_only`.
std::optional<RegionPath> cycle_through(const TimedAutomaton& a, const RegionState& anchor,
                                        const std::vector<LocationId>& locations, bool robust_only = false);

}  // namespace robta
