#pragma once

#include <string>
#include <vector>

#include "robta/bool_matrix.hpp"
#include "robta/region.hpp"

namespace robta {

/// Layered corner graph over regions r_0..r_k; steps[i] relates the corners
/// of layers[i] to those of layers[i+1].
struct OrbitGraph {
  std::vector<Region> layers;
  std::vector<BoolMatrix> steps;

  /// Start-to-end reachability: the product of all step relations.
  BoolMatrix relation() const;
};

OrbitGraph orbit_identity(const Region& r);
/// Edges c -> c' whenever c' = c + d for an integer d >= 0. For r' = r this
/// includes c_0 -> c_m when r is not punctual.
OrbitGraph orbit_of_delay(const Region& r, const Region& r2, int bound);
/// Edges c -> c[R:=0].
OrbitGraph orbit_of_edge(const Region& r, const Edge& e);
OrbitGraph orbit_of_step(const TimedAutomaton& a, const AtomicStep& s);
OrbitGraph orbit_of_path(const TimedAutomaton& a, const RegionPath& path);
OrbitGraph concat(const OrbitGraph& a, const OrbitGraph& b);

/// Corner relation of a region cycle.
struct FoldedOrbitGraph {
  Region region;
  BoolMatrix relation;

  std::size_t size() const { return relation.rows(); }
  bool operator==(const FoldedOrbitGraph&) const = default;
};

FoldedOrbitGraph fold(const OrbitGraph& g);
/// Relation of one atomic step, computed without materializing layers.
BoolMatrix step_relation(const TimedAutomaton& a, const AtomicStep& s);
FoldedOrbitGraph fog_of_cycle(const TimedAutomaton& a, const RegionPath& cycle);
FoldedOrbitGraph compose_fog(const FoldedOrbitGraph& a, const FoldedOrbitGraph& b);
FoldedOrbitGraph fog_power(const FoldedOrbitGraph& f, std::size_t k);

/// Disjoint union of complete graphs with all self-loops, i.e. an
/// equivalence relation.
bool is_cluster(const BoolMatrix& rel);
inline bool is_cluster(const FoldedOrbitGraph& f) { return is_cluster(f.relation); }
/// Some weakly connected component is not strongly connected.
bool has_non_strong_component(const BoolMatrix& rel);

/// SCC index of each corner, numbered in order of first appearance.
std::vector<std::size_t> scc_colors(const BoolMatrix& rel);
/// Weakly connected component index of each corner, same numbering.
std::vector<std::size_t> wcc_colors(const BoolMatrix& rel);

struct IterationClass {
  enum class Kind { ClusterAt, Doomed };
  Kind kind;
  std::size_t k;
  std::size_t period_start = 0;  // powers repeat from here...
  std::size_t period = 0;        // ...with this period

  std::string to_string() const;
  bool operator==(const IterationClass&) const = default;
};

/// Minimal k with f^k a cluster graph, or minimal k with f^k having a weakly
/// connected component that is not strongly connected. Powers are computed
/// until the sequence repeats.
IterationClass iterate_classify(const FoldedOrbitGraph& f);

/// max(1, m·(m+1)!) and (m+1)! for a region of dimension m.
std::size_t cluster_bound(std::size_t m);
std::size_t doomed_bound(std::size_t m);

}  // namespace robta
