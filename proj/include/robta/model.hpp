#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "robta/rational.hpp"

namespace robta {

using ClockId = std::size_t;
using LocationId = std::size_t;
using EdgeId = std::size_t;

/// Thrown for malformed automata and out-of-contract model operations.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ordered set of clock names. The order fixes corner orderings and DBM
/// indices everywhere downstream (DBM index of clock i is i + 1).
class ClockSet {
 public:
  ClockSet() = default;
  explicit ClockSet(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(ClockId c) const { return names_.at(c); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<ClockId> find(const std::string& name) const;

  bool operator==(const ClockSet&) const = default;

 private:
  std::vector<std::string> names_;
};

/// Clock assignment indexed by ClockId.
struct Valuation {
  std::vector<Rational> values;

  Valuation() = default;
  explicit Valuation(std::vector<Rational> v) : values(std::move(v)) {}
  static Valuation zero(std::size_t clocks) { return Valuation(std::vector<Rational>(clocks, Rational(0))); }

  std::size_t size() const { return values.size(); }
  const Rational& operator[](ClockId c) const { return values[c]; }
  Rational& operator[](ClockId c) { return values[c]; }

  bool operator==(const Valuation&) const = default;
};

/// ν + d. Throws ModelError if d < 0 or a clock would leave [0, bound].
Valuation delay(const Valuation& v, const Rational& d, int bound);
/// ν + d without a bound check (d may be any rational).
Valuation shifted(const Valuation& v, const Rational& d);
/// ν[R:=0].
Valuation reset(const Valuation& v, const std::vector<ClockId>& clocks);
bool within_bound(const Valuation& v, int bound);
Rational manhattan_norm(const Valuation& v);
Rational sup_distance(const Valuation& a, const Valuation& b);
std::string to_string(const Valuation& v, const ClockSet& clocks);

/// One side of an atomic constraint; absent means unbounded.
struct ConstraintBound {
  long value = 0;
  bool strict = false;
  bool operator==(const ConstraintBound&) const = default;
};

/// lower ⪯ x ⪯' upper, or lower ⪯ x - y ⪯' upper when `minus` is set.
struct AtomicConstraint {
  ClockId clock = 0;
  std::optional<ClockId> minus;
  std::optional<ConstraintBound> lower;
  std::optional<ConstraintBound> upper;

  bool diagonal() const { return minus.has_value(); }
  bool holds(const Valuation& v) const;
  bool operator==(const AtomicConstraint&) const = default;
};

enum class Punctuality { Empty, Punctual, NonPunctual };
const char* to_string(Punctuality p);

struct Guard {
  std::vector<AtomicConstraint> atoms;

  bool is_true() const { return atoms.empty(); }
  bool operator==(const Guard&) const = default;
};

bool satisfies(const Valuation& v, const Guard& g);

/// Renders in the input grammar, e.g. "0<x && x-y<=2". The empty guard is "true".
std::string to_string(const Guard& g, const ClockSet& clocks);

/// A witness pair (ν, ν+d) with d > 0, both satisfying the guard.
struct DelayWitness {
  Valuation start;
  Rational delay;
};

struct GuardClassification {
  Punctuality kind = Punctuality::Empty;
  std::optional<DelayWitness> witness;  // set iff kind == NonPunctual
};

/// Decides punctuality of g over [0,bound]^X by region enumeration: g is
/// non-punctual iff it contains a region with no integral clock, or two
/// distinct regions one of which is a time-successor of the other.
GuardClassification classify_guard(const Guard& g, std::size_t clock_count, int bound);

struct Edge {
  LocationId source = 0;
  LocationId target = 0;
  Guard guard;
  std::vector<ClockId> resets;  // sorted, unique
  Punctuality punctuality = Punctuality::NonPunctual;

  bool punctual() const { return punctuality == Punctuality::Punctual; }
};

/// Bounded timed automaton with a Büchi location set. Immutable once built;
/// the constructor validates every invariant and classifies edge guards.
class TimedAutomaton {
 public:
  TimedAutomaton(ClockSet clocks, std::vector<std::string> locations, int bound, std::vector<Edge> edges,
                 LocationId initial, std::optional<Guard> initial_constraint, std::vector<LocationId> buchi);

  const ClockSet& clocks() const { return clocks_; }
  std::size_t clock_count() const { return clocks_.size(); }
  const std::vector<std::string>& locations() const { return locations_; }
  const std::string& location_name(LocationId l) const { return locations_.at(l); }
  std::optional<LocationId> find_location(const std::string& name) const;
  int bound() const { return bound_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_.at(e); }
  const std::vector<EdgeId>& outgoing(LocationId l) const { return outgoing_.at(l); }
  LocationId initial() const { return initial_; }
  const std::optional<Guard>& initial_constraint() const { return initial_constraint_; }
  bool is_buchi(LocationId l) const { return buchi_.at(l); }
  std::vector<LocationId> buchi_locations() const;

 private:
  ClockSet clocks_;
  std::vector<std::string> locations_;
  int bound_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> outgoing_;
  LocationId initial_;
  std::optional<Guard> initial_constraint_;
  std::vector<bool> buchi_;
};

}  // namespace robta
