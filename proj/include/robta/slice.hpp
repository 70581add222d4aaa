#pragma once

#include <vector>

#include "robta/dbm.hpp"
#include "robta/orbit.hpp"
#include "robta/region.hpp"

namespace robta {

/// Coloring of the corners of a region; colors are 0..k, numbered in order of
/// first appearance along c_0..c_m (so c_0 always has color 0).
struct CornerPartition {
  Region region;
  std::vector<std::size_t> color;

  std::size_t colors() const;
  std::size_t class_size(std::size_t c) const;
  bool operator==(const CornerPartition&) const = default;
};

/// Colors are the complete SCCs of a cluster graph.
CornerPartition cluster_corner_partition(const FoldedOrbitGraph& f);

/// p_0 < ... < p_k with C_0 = {c_i | i ∈ [0,p_0] ∪ (p_k,m]} and
/// C_j = {c_i | i ∈ (p_{j-1}, p_j]}. Throws if the coloring has no such shape.
std::vector<std::size_t> splitting_positions(const CornerPartition& p);

/// Per-color sums of corner weights.
std::vector<Rational> slice_of(const Valuation& v, const CornerPartition& p);

/// The slice {ν ∈ r | slice_of(ν) = w} as a zone: the region plus one
/// equality between fractional parts per color, read off the splitting
/// positions. Block 0 stands for the reference clock.
Dbm slice_to_zone(const CornerPartition& p, const std::vector<Rational>& w);

/// The valuation whose corner weights are w_j / |C_j| on color j.
Valuation slice_representative(const CornerPartition& p, const std::vector<Rational>& w);

/// The weight vector of the slice through the region's barycenter.
std::vector<Rational> barycentric_slice(const CornerPartition& p);

/// Whether the corner weights of v can be transported onto those of v2 along
/// the edges of f (exact rational max-flow equal to one).
bool flow_reachable(const Valuation& v, const Valuation& v2, const FoldedOrbitGraph& f);

/// {ν ∈ r | every corner weight ≥ eta}, as a zone.
Dbm interior_zone(const Region& r, const Rational& eta);

}  // namespace robta
