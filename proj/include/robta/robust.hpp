#pragma once

#include <optional>

#include "robta/dbm.hpp"
#include "robta/region.hpp"

namespace robta {

/// A step is robust when its edge is punctual or is taken from a
/// non-punctual delay target.
bool is_robust_step(const TimedAutomaton& a, const AtomicStep& s);
bool is_robust(const TimedAutomaton& a, const RegionPath& path);
std::optional<std::size_t> first_non_robust_step(const TimedAutomaton& a, const RegionPath& path);

/// Controllable predecessor of s ⊆ target region across one atomic step:
///   r ∩ PreTime_{≥δ}(Shrink_δ(r' ∩ g ∩ Unreset_R(s)))   for non-punctual g,
///   r ∩ PreTime_{≥0}(r' ∩ g ∩ Unreset_R(s))             for punctual g,
/// where r is the source region and r' the delay target.
Dbm cpre_atomic(const TimedAutomaton& a, const AtomicStep& step, const Dbm& s, const Rational& delta);
/// Right-to-left fold of cpre_atomic.
Dbm cpre_path(const TimedAutomaton& a, const RegionPath& path, const Dbm& s, const Rational& delta);

ShrunkDbm shrunk_cpre_atomic(const TimedAutomaton& a, const AtomicStep& step, const ShrunkDbm& s);
ShrunkDbm shrunk_cpre_path(const TimedAutomaton& a, const RegionPath& path, const ShrunkDbm& s);

struct RobustCheck {
  bool robust = false;                       // CPre of the final region is non-empty for small δ
  Rational delta0;                           // valid when robust
  std::optional<std::size_t> offending_step; // first non-robust step, when not robust
  std::optional<ShrunkDbm> cpre;
};

RobustCheck robust_nonempty(const TimedAutomaton& a, const RegionPath& path);

/// Sup-norm ball: {ν' | |ν'(x) - ν(x)| ≤ radius for every x}.
struct Ball {
  Valuation center;
  Rational radius;
};

/// A ball whose intersection with r lies inside zone (zone ⊆ r, canonical,
/// non-empty). The center is the zone's clock-by-clock midpoint and the
/// radius is half the smallest slack of a constraint that r leaves free.
/// Radius 0 means the zone has no interior relative to r.
Ball interior_ball(const Dbm& zone, const Region& r);

/// Sup-norm ball of radius `radius` around v intersected with r, as a zone.
Dbm ball_zone(const Valuation& v, const Rational& radius, const Region& r);

}  // namespace robta
